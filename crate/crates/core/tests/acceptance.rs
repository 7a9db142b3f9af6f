//! Acceptance suite. Each test prints one `PASS`/`FAIL` line and then
//! asserts on the same condition, so `cargo test --test acceptance --
//! --nocapture` gives a readable summary.

use std::time::Instant;

use qgt_core::bch::{self, BchSpec, RootMethod};
use qgt_core::codec::{self, DecoderOptions, DesignParams, SignatureMatrix, TestVector};
use qgt_core::density::{self, c_of_t, lambda_threshold, tests_needed, DeConfig, DensityEvolution};
use qgt_core::golden;
use qgt_core::graph::BiRegularGraph;
use qgt_core::sim::{self, TrialConfig};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id} [{verdict}] {name}: {detail}");
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

// Published c(t), ℓ* for t = 1..8.
const TABLE: [(f64, usize); 8] = [
    (1.222, 3),
    (0.597, 2),
    (0.388, 2),
    (0.294, 2),
    (0.239, 2),
    (0.202, 2),
    (0.176, 2),
    (0.156, 2),
];
const TABLE_TOL: f64 = 0.01;
const TABLE_TIME_LIMIT_SECS: f64 = 180.0;

#[test]
fn c1_table_of_constants() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut ell_ok = true;
    let mut rows = Vec::new();
    for (t, &(c, ell)) in (1..=8).zip(TABLE.iter()) {
        let got = c_of_t(t);
        worst = worst.max((got.c - c).abs());
        ell_ok &= got.ell_star == ell;
        rows.push(format!("t={t} c={:.4} ell*={}", got.c, got.ell_star));
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= TABLE_TOL && ell_ok && secs < TABLE_TIME_LIMIT_SECS;
    report(
        1,
        "c(t) table",
        pass,
        &format!(
            "max |dc| = {worst:.4} (tol {TABLE_TOL}), ell* exact = {ell_ok}, {secs:.1}s; {}",
            rows.join(", ")
        ),
    );
}

#[test]
fn c2_worked_example() {
    let h1_printed = vec![
        vec![0, 0, 1, 0, 1, 1, 1],
        vec![0, 1, 0, 1, 1, 1, 0],
        vec![1, 0, 0, 1, 0, 1, 1],
    ];
    let spec = BchSpec::new(3, 1, 7).unwrap();
    let h1_ok = bch::build_parity_columns(&spec).rows() == h1_printed;

    let sig = SignatureMatrix::build(1, 7).unwrap();
    let mut u_printed = vec![vec![1u8; 7]];
    u_printed.extend(h1_printed.iter().cloned());
    let u_ok = sig.rows() == u_printed;

    let graph = golden::example_graph();
    let a = codec::measurement_matrix(&graph, &sig).unwrap();
    let a_ok = a == golden::example_a();

    // Items 1, 4, 10 in 1-based labels.
    let y = TestVector(vec![3, 1, 0, 0, 1, 1, 1, 1, 0, 2, 1, 2, 0, 2, 0, 1, 1]);
    let encoded = codec::encode(&graph, &sig, &[0, 3, 9]).unwrap();
    let out = codec::decode(&graph, &sig, &y).unwrap();
    let decode_ok = encoded == y && out.recovered == [0, 3, 9] && out.iterations == 2 && out.success;

    report(
        2,
        "worked example",
        h1_ok && u_ok && a_ok && decode_ok,
        &format!(
            "H1 {h1_ok}, U {u_ok}, A {a_ok}, decode {decode_ok} (recovered {:?}, {} rounds)",
            out.recovered.iter().map(|v| v + 1).collect::<Vec<_>>(),
            out.iterations
        ),
    );
}

#[test]
fn c3_bch_decoder_oracle() {
    // Exhaustive: every pattern of weight <= 2 in the length-15 code.
    let spec = BchSpec::new(4, 2, 15).unwrap();
    let mut patterns = vec![vec![]];
    for i in 0..15 {
        patterns.push(vec![i]);
        for j in i + 1..15 {
            patterns.push(vec![i, j]);
        }
    }
    let mut exhaustive_fail = 0;
    for p in &patterns {
        let syn = bch::syndrome_of_positions(&spec, p);
        for method in [RootMethod::Chien, RootMethod::Direct] {
            if bch::decode_syndrome(&spec, &syn, p.len(), method).as_deref() != Ok(p.as_slice()) {
                exhaustive_fail += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut random_fail = 0;
    let mut disagree = 0;
    let mut total = 0;
    for b in [6u32, 8, 10] {
        for t in 1..=4 {
            let n = (1usize << b) - 1;
            let spec = BchSpec::new(b, t, n).unwrap();
            for _ in 0..10_000 {
                let w = rng.random_range(0..=t);
                let mut pos = sample(&mut rng, n, w).into_vec();
                pos.sort_unstable();
                let syn = bch::syndrome_of_positions(&spec, &pos);
                let chien = bch::decode_syndrome(&spec, &syn, w, RootMethod::Chien);
                let direct = bch::decode_syndrome(&spec, &syn, w, RootMethod::Direct);
                if chien.as_deref() != Ok(pos.as_slice()) {
                    random_fail += 1;
                }
                if chien != direct {
                    disagree += 1;
                }
                total += 1;
            }
        }
    }
    report(
        3,
        "BCH decoder oracle",
        patterns.len() == 121 && exhaustive_fail == 0 && random_fail == 0 && disagree == 0,
        &format!(
            "{} exhaustive patterns, {exhaustive_fail} failures; {total} random, {random_fail} failures, {disagree} chien/direct disagreements",
            patterns.len()
        ),
    );
}

const SUCCESS_BAR: f64 = 0.95;
const BATCH_TRIALS: usize = 200;

#[test]
fn c4_success_at_predicted_test_count() {
    let (n, k, t) = (1 << 16, 100, 2);
    let m = tests_needed(n, k, t).ceil as usize;
    let ell = c_of_t(t).ell_star;
    let design = sim::design_for_budget(n, k, t, ell, m)
        .unwrap()
        .expect("budget admits a design");
    let config = TrialConfig::from_design(&design, BATCH_TRIALS, 0x5EED);
    let stats = sim::run_batch(&config).unwrap();
    report(
        4,
        "success at predicted test count",
        stats.success_rate >= SUCCESS_BAR,
        &format!(
            "m = {m}, M = {}, s = {}, lambda = {:.3}, success {}/{} = {:.3} (bar {SUCCESS_BAR}), unidentified {:.3}",
            design.right_nodes,
            design.tests_per_node,
            design.lambda(),
            stats.successes,
            stats.trials,
            stats.success_rate,
            stats.mean_unidentified
        ),
    );
}

#[test]
fn c5_best_t() {
    let counts: Vec<_> = (1..=8).map(|t| tests_needed(1 << 16, 100, t)).collect();
    let best = counts.iter().min_by(|a, b| a.value.total_cmp(&b.value)).unwrap();
    let listing: Vec<String> = counts.iter().map(|c| format!("t={}:{:.0}", c.t, c.value)).collect();
    report(
        5,
        "minimizing t",
        best.t == 2,
        &format!("argmin t = {}; {}", best.t, listing.join(" ")),
    );
}

#[test]
fn c6_density_evolution_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut monotone = true;
    for _ in 0..100 {
        let t = rng.random_range(1..=8);
        let ell = rng.random_range(2..=8);
        let lambda = rng.random_range(0.1..12.0);
        let de = DensityEvolution::new(DeConfig::new(t, ell, lambda));
        let mut p = 1.0f64;
        for _ in 0..500 {
            let next = de.step(p);
            if next > p + 1e-15 {
                monotone = false;
            }
            p = next;
        }
    }

    let mut absorbing = true;
    for t in 1..=8 {
        for ell in 2..=6 {
            absorbing &= density::de_step(0.0, &DeConfig::new(t, ell, 3.0)) == 0.0;
        }
    }

    let mut closed_form_err = 0.0f64;
    for _ in 0..200 {
        let ell = rng.random_range(2..=8);
        let lambda = rng.random_range(0.1..10.0);
        let p: f64 = rng.random();
        let got = density::de_step(p, &DeConfig::new(1, ell, lambda));
        let want = (1.0 - (-lambda * p).exp()).powi(ell as i32 - 1);
        closed_form_err = closed_form_err.max((got - want).abs());
    }

    let mut dichotomy = true;
    let mut misses = Vec::new();
    for t in 1..=4 {
        for ell in [2, 3] {
            let lt = lambda_threshold(t, ell);
            let below = density::de_fixed_point(&DeConfig::new(t, ell, lt - 0.01));
            let above = density::de_fixed_point(&DeConfig::new(t, ell, lt + 0.01));
            if !below.converged_to_zero || above.converged_to_zero {
                dichotomy = false;
                misses.push(format!("(t={t}, ell={ell})"));
            }
        }
    }

    report(
        6,
        "density evolution properties",
        monotone && absorbing && closed_form_err <= 1e-10 && dichotomy,
        &format!(
            "monotone {monotone}, absorbing {absorbing}, t=1 closed-form err {closed_form_err:.1e}, dichotomy {dichotomy} {}",
            misses.join(" ")
        ),
    );
}

#[test]
fn c7_decoder_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut unsound = 0;
    let mut reencode_mismatch = 0;
    let mut successes = 0;
    let instances = 10_000;
    for _ in 0..instances {
        let n = rng.random_range(20..=2000);
        let t = rng.random_range(1..=4);
        let ell = rng.random_range(2..=4);
        let k = rng.random_range(1..=(n / 10).max(1));
        let m = rng
            .random_range(ell.max(k / 4).max(2)..=(3 * k).max(ell + 1))
            .min(n * ell);
        let graph = BiRegularGraph::sample(n, m, ell, rng.random()).unwrap();
        let sig = SignatureMatrix::build(t, graph.max_right_degree()).unwrap();
        let support = sample(&mut rng, n, k).into_vec();
        let y = codec::encode(&graph, &sig, &support).unwrap();
        let method = if rng.random() {
            RootMethod::Chien
        } else {
            RootMethod::Direct
        };
        let options = DecoderOptions {
            root_method: method,
            shuffle_seed: None,
        };
        let out = codec::decode_with(&graph, &sig, &y, options).unwrap();
        if out.recovered.iter().any(|v| !support.contains(v)) {
            unsound += 1;
        }
        if out.success {
            successes += 1;
            if codec::encode(&graph, &sig, &out.recovered).unwrap() != y {
                reencode_mismatch += 1;
            }
        }
    }
    report(
        7,
        "decoder soundness",
        unsound == 0 && reencode_mismatch == 0,
        &format!(
            "{instances} instances ({successes} successful): {unsound} with false positives, {reencode_mismatch} re-encode mismatches"
        ),
    );
}

const SCALING_TOLERANCE: f64 = 2.0;

#[test]
fn c8_decode_time_scaling() {
    let (k, t, ell) = (100, 2, 2);
    let right_nodes = (2.0 * c_of_t(t).c * k as f64).ceil() as usize;
    let reps = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut timings = Vec::new();
    for log_n in [14u32, 16, 18] {
        let n = 1usize << log_n;
        let design = DesignParams::with_right_nodes(n, k, t, ell, right_nodes).unwrap();
        let sig = design.signature().unwrap();
        let graph = BiRegularGraph::sample(n, right_nodes, ell, rng.random()).unwrap();
        let inputs: Vec<TestVector> = (0..reps)
            .map(|_| codec::encode(&graph, &sig, &sample(&mut rng, n, k).into_vec()).unwrap())
            .collect();
        let options = DecoderOptions {
            root_method: RootMethod::Direct,
            shuffle_seed: None,
        };
        // Warm-up pass, then the timed pass.
        for y in &inputs[..10] {
            codec::decode_with(&graph, &sig, y, options).unwrap();
        }
        let start = Instant::now();
        for y in &inputs {
            std::hint::black_box(codec::decode_with(&graph, &sig, y, options).unwrap());
        }
        timings.push((n, start.elapsed().as_secs_f64() / reps as f64));
    }
    let (n0, t0) = timings[0];
    let mut pass = true;
    let mut parts = Vec::new();
    for &(n, secs) in &timings {
        let observed = secs / t0;
        let trend = ((n / k) as f64).log2() / ((n0 / k) as f64).log2();
        pass &= observed <= SCALING_TOLERANCE * trend;
        parts.push(format!(
            "N=2^{}: {:.1}us (x{observed:.2}, log trend x{trend:.2})",
            n.trailing_zeros(),
            secs * 1e6
        ));
    }
    report(8, "decode time scaling", pass, &parts.join("; "));
}
