//! Seeded Monte Carlo trials and m/K sweeps.
//!
//! Trial `i` of a batch draws everything from
//! `splitmix64(master_seed ^ splitmix64(i))`, so results do not depend on
//! execution order or thread count.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bch::RootMethod;
use crate::codec::{self, DecoderOptions, DesignParams};
use crate::error::CodecError;
use crate::graph::BiRegularGraph;

pub const CSV_HEADER: &str = "m_over_K,t,ell,N,K,trials,success_rate,mean_unidentified,stderr,seed";

/// The splitmix64 output function, used for all seed derivation.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(index))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub ell: usize,
    pub right_nodes: usize,
    pub trials: usize,
    pub master_seed: u64,
    /// Reuse one graph (seeded from `master_seed`) across all trials.
    pub fixed_graph: bool,
    pub root_method: RootMethod,
}

impl TrialConfig {
    pub fn from_design(params: &DesignParams, trials: usize, master_seed: u64) -> Self {
        TrialConfig {
            n: params.n,
            k: params.k,
            t: params.t,
            ell: params.ell,
            right_nodes: params.right_nodes,
            trials,
            master_seed,
            fixed_graph: false,
            root_method: RootMethod::Direct,
        }
    }

    pub fn design(&self) -> Result<DesignParams, CodecError> {
        DesignParams::with_right_nodes(self.n, self.k, self.t, self.ell, self.right_nodes)
    }

    fn graph_seed(&self, rng: &mut ChaCha8Rng) -> u64 {
        if self.fixed_graph {
            splitmix64(self.master_seed)
        } else {
            rng.random()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialOutcome {
    pub seed: u64,
    pub success: bool,
    /// |S \ Ŝ| / K.
    pub unidentified_fraction: f64,
}

/// One trial: uniform K-subset, graph, encode, decode.
pub fn run_trial(config: &TrialConfig, seed: u64) -> Result<TrialOutcome, CodecError> {
    if config.k == 0 {
        return Ok(TrialOutcome {
            seed,
            success: true,
            unidentified_fraction: 0.0,
        });
    }
    let params = config.design()?;
    let sig = params.signature()?;
    run_trial_with(config, &sig, None, seed)
}

fn run_trial_with(
    config: &TrialConfig,
    sig: &codec::SignatureMatrix,
    graph: Option<&BiRegularGraph>,
    seed: u64,
) -> Result<TrialOutcome, CodecError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph_seed = config.graph_seed(&mut rng);
    let owned;
    let graph = match graph {
        Some(g) => g,
        None => {
            owned = BiRegularGraph::sample(config.n, config.right_nodes, config.ell, graph_seed)?;
            &owned
        }
    };
    let mut support = sample(&mut rng, config.n, config.k).into_vec();
    support.sort_unstable();
    let y = codec::encode(graph, sig, &support)?;
    let options = DecoderOptions {
        root_method: config.root_method,
        shuffle_seed: None,
    };
    let out = codec::decode_with(graph, sig, &y, options)?;
    let missed = support
        .iter()
        .filter(|v| out.recovered.binary_search(v).is_err())
        .count();
    Ok(TrialOutcome {
        seed,
        success: out.success,
        unidentified_fraction: missed as f64 / config.k as f64,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepStats {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_unidentified: f64,
    /// Binomial standard error of `success_rate`.
    pub stderr: f64,
    pub seeds: Vec<u64>,
}

impl SweepStats {
    pub fn from_outcomes(outcomes: &[TrialOutcome]) -> Self {
        let trials = outcomes.len();
        let successes = outcomes.iter().filter(|o| o.success).count();
        let n = trials.max(1) as f64;
        let p = successes as f64 / n;
        SweepStats {
            trials,
            successes,
            success_rate: p,
            mean_unidentified: outcomes.iter().map(|o| o.unidentified_fraction).sum::<f64>() / n,
            stderr: (p * (1.0 - p) / n).sqrt(),
            seeds: outcomes.iter().map(|o| o.seed).collect(),
        }
    }

    /// Stats for a budget too small to host any right node.
    fn infeasible(trials: usize) -> Self {
        SweepStats {
            trials,
            successes: 0,
            success_rate: 0.0,
            mean_unidentified: 1.0,
            stderr: 0.0,
            seeds: Vec::new(),
        }
    }
}

/// Runs `config.trials` trials in parallel.
pub fn run_batch(config: &TrialConfig) -> Result<SweepStats, CodecError> {
    let shared = if config.k == 0 {
        None
    } else {
        let sig = config.design()?.signature()?;
        let graph = if config.fixed_graph {
            Some(BiRegularGraph::sample(
                config.n,
                config.right_nodes,
                config.ell,
                splitmix64(config.master_seed),
            )?)
        } else {
            None
        };
        Some((sig, graph))
    };
    let outcomes = (0..config.trials as u64)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(config.master_seed, i);
            match &shared {
                None => Ok(TrialOutcome {
                    seed,
                    success: true,
                    unidentified_fraction: 0.0,
                }),
                Some((sig, graph)) => run_trial_with(config, sig, graph.as_ref(), seed),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepStats::from_outcomes(&outcomes))
}

/// Largest M whose design fits `m` tests (M*s + 1 <= m), with s recomputed
/// from r_max(M).
pub fn design_for_budget(
    n: usize,
    k: usize,
    t: usize,
    ell: usize,
    m: usize,
) -> Result<Option<DesignParams>, CodecError> {
    // s >= 3t + 1 because b >= 3.
    let upper = (m.saturating_sub(1) / (3 * t + 1)).min(n * ell);
    for right_nodes in (ell..=upper).rev() {
        let p = DesignParams::with_right_nodes(n, k, t, ell, right_nodes)?;
        if p.total_tests <= m {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub m_over_k: f64,
    /// Test budget ⌊(m/K) K⌋.
    pub m: usize,
    /// Design actually run, if the budget admits one.
    pub design: Option<DesignParams>,
    pub stats: SweepStats,
}

/// Runs a batch at every m/K grid point. `base.right_nodes` is replaced by
/// the budget-derived value at each point.
pub fn run_sweep(base: &TrialConfig, grid: &[f64]) -> Result<Vec<SweepPoint>, CodecError> {
    grid.iter()
        .map(|&ratio| {
            let m = (ratio * base.k as f64).floor() as usize;
            let design = design_for_budget(base.n, base.k, base.t, base.ell, m)?;
            let stats = match &design {
                Some(d) => run_batch(&TrialConfig {
                    right_nodes: d.right_nodes,
                    ..base.clone()
                })?,
                None => SweepStats::infeasible(base.trials),
            };
            Ok(SweepPoint {
                m_over_k: ratio,
                m,
                design,
                stats,
            })
        })
        .collect()
}

pub fn sweep_to_csv(base: &TrialConfig, points: &[SweepPoint]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{}",
            p.m_over_k,
            base.t,
            base.ell,
            base.n,
            base.k,
            p.stats.trials,
            p.stats.success_rate,
            p.stats.mean_unidentified,
            p.stats.stderr,
            base.master_seed
        )
        .unwrap();
    }
    out
}
