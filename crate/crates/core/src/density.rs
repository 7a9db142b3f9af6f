//! Density evolution for the peeling decoder and the test-count constants
//! derived from it.
//!
//! In the pruned graph (defective items only) the right edge-degree
//! distribution tends to ρ_i = e^-λ λ^(i-1) / (i-1)!, with λ = Kℓ/M the
//! average right degree. One decoding round maps the probability p that a
//! defective item is still unidentified to
//!
//! ```text
//! q = Σ_{i<=t} ρ_i + Σ_{i>t} ρ_i P[Bin(i-1, p) <= t-1]
//! p' = (1 - q)^(ℓ-1)
//! ```
//!
//! λ_T(ℓ) is the largest λ for which p → 0 starting from p = 1, and
//! c(t) = min_ℓ ℓ / λ_T(ℓ).

use std::ops::RangeInclusive;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::bch::MAX_T;

/// Left degrees searched by [`c_of_t`].
pub const DEFAULT_ELL_RANGE: RangeInclusive<usize> = 2..=12;

/// Absolute tolerance of the λ bisection for t >= 2.
pub const BISECTION_TOL: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct DeConfig {
    pub t: usize,
    pub ell: usize,
    /// Average right degree λ = Kℓ/M.
    pub lambda: f64,
    pub poisson_tail_tol: f64,
    pub fixed_point_tol: f64,
    pub max_iters: usize,
    /// p* below this counts as convergence to zero.
    pub p_zero: f64,
}

impl DeConfig {
    pub fn new(t: usize, ell: usize, lambda: f64) -> Self {
        DeConfig {
            t,
            ell,
            lambda,
            poisson_tail_tol: 1e-12,
            fixed_point_tol: 1e-10,
            max_iters: 10_000,
            p_zero: 1e-6,
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        DeConfig { lambda, ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeResult {
    pub p_star: f64,
    pub iterations: usize,
    pub converged_to_zero: bool,
}

/// Poisson(λ) weights ρ_1, ρ_2, ... (ρ_i is the mass at i-1), truncated at
/// the first index where a geometric bound on the remaining tail drops
/// below `tail_tol`. Evaluated in log space.
pub fn rho_weights(lambda: f64, tail_tol: f64) -> Vec<f64> {
    assert!(lambda > 0.0, "lambda must be positive");
    let ln_lambda = lambda.ln();
    let mut weights = Vec::new();
    let mut ln_fact = 0.0; // ln((i-1)!)
    let mut j = 0usize; // j = i - 1
    loop {
        if j > 0 {
            ln_fact += (j as f64).ln();
        }
        let w = (-lambda + j as f64 * ln_lambda - ln_fact).exp();
        weights.push(w);
        // Remaining tail Σ_{k>j} P(k) <= P(j+1) / (1 - λ/(j+2)) once j+2 > λ.
        let next = w * lambda / (j + 1) as f64;
        let ratio = lambda / (j + 2) as f64;
        if ratio < 1.0 && next / (1.0 - ratio) < tail_tol {
            break;
        }
        j += 1;
    }
    weights
}

/// P[Bin(n, p) <= k].
fn binomial_cdf(n: usize, p: f64, k: usize) -> f64 {
    if k >= n || p <= 0.0 {
        return 1.0;
    }
    if p >= 1.0 {
        return 0.0;
    }
    let odds = p / (1.0 - p);
    let mut term = (n as f64 * (-p).ln_1p()).exp();
    let mut sum = term;
    for j in 0..k {
        term *= (n - j) as f64 / (j + 1) as f64 * odds;
        sum += term;
    }
    sum.min(1.0)
}

/// Density-evolution map with its Poisson weights precomputed.
#[derive(Clone, Debug)]
pub struct DensityEvolution {
    config: DeConfig,
    rho: Vec<f64>,
}

impl DensityEvolution {
    pub fn new(config: DeConfig) -> Self {
        let rho = rho_weights(config.lambda, config.poisson_tail_tol);
        DensityEvolution { config, rho }
    }

    pub fn config(&self) -> &DeConfig {
        &self.config
    }

    /// Probability that a right node resolves, given unidentified fraction p.
    pub fn resolve_probability(&self, p: f64) -> f64 {
        1.0 - self.failure_probability(p)
    }

    /// 1 - resolve_probability, summed directly so that p = 0 gives exactly
    /// zero. The truncated weights are renormalized.
    fn failure_probability(&self, p: f64) -> f64 {
        let t = self.config.t;
        let total: f64 = self.rho.iter().sum();
        let fail: f64 = self
            .rho
            .iter()
            .enumerate()
            .skip(t)
            .map(|(j, &w)| w * (1.0 - binomial_cdf(j, p, t - 1)))
            .sum();
        (fail / total).clamp(0.0, 1.0)
    }

    pub fn step(&self, p: f64) -> f64 {
        self.failure_probability(p).powi(self.config.ell as i32 - 1)
    }

    /// Iterates from p = 1 until the step size falls below the tolerance, p
    /// hits zero, or the iteration cap is reached.
    ///
    /// Panics if the trajectory ever increases beyond rounding error; the
    /// map is monotone, so that would be a bug.
    pub fn fixed_point(&self) -> DeResult {
        let cfg = &self.config;
        let mut p = 1.0f64;
        let mut iterations = 0;
        while iterations < cfg.max_iters {
            let next = self.step(p);
            iterations += 1;
            assert!(
                next <= p * (1.0 + 1e-12) + 1e-300,
                "density evolution increased: {p} -> {next} ({cfg:?})"
            );
            let delta = p - next;
            p = next;
            if p == 0.0 || delta.abs() < cfg.fixed_point_tol {
                break;
            }
        }
        DeResult {
            p_star: p,
            iterations,
            converged_to_zero: p < cfg.p_zero,
        }
    }
}

/// One density-evolution round from `p`.
pub fn de_step(p: f64, config: &DeConfig) -> f64 {
    DensityEvolution::new(config.clone()).step(p)
}

pub fn de_fixed_point(config: &DeConfig) -> DeResult {
    DensityEvolution::new(config.clone()).fixed_point()
}

/// The t = 1 threshold: inf over x in (0,1) of -ln(1 - x^(1/(ℓ-1))) / x.
fn closed_form_threshold_t1(ell: usize) -> f64 {
    let g = |x: f64| -(-x.powf(1.0 / (ell as f64 - 1.0))).ln_1p() / x;
    let (mut a, mut b) = (1e-9, 1.0 - 1e-9);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while b - a > 1e-10 {
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    g(a).min(g(b)).min(gc).min(gd)
}

/// λ_T(ℓ) using the default density-evolution tolerances.
pub fn lambda_threshold(t: usize, ell: usize) -> f64 {
    lambda_threshold_with(&DeConfig::new(t, ell, 1.0))
}

/// λ_T(ℓ) for `template.t` and `template.ell`; `template.lambda` is ignored.
///
/// t = 1 uses the closed-form infimum. t >= 2 bisects on λ with the
/// converged-to-zero indicator, starting from [0.01, 5ℓ] and doubling the
/// upper end until it no longer converges.
pub fn lambda_threshold_with(template: &DeConfig) -> f64 {
    assert!(template.ell >= 2, "left degree must be at least 2");
    if template.t == 1 {
        return closed_form_threshold_t1(template.ell);
    }
    let converges = |lambda: f64| de_fixed_point(&template.with_lambda(lambda)).converged_to_zero;
    let mut lo = 0.01;
    let mut hi = 5.0 * template.ell as f64;
    assert!(converges(lo), "density evolution fails even at lambda = {lo}");
    while converges(hi) {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if converges(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Optimal constant and left degree for separability level `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CConstant {
    pub t: usize,
    /// c(t) = ℓ* / λ_T(ℓ*).
    pub c: f64,
    pub ell_star: usize,
    /// λ_T(ℓ*).
    pub lambda_t: f64,
}

/// c(t) and ℓ* over an explicit range of left degrees; ties go to the
/// smaller ℓ.
pub fn c_of_t_over(t: usize, ells: RangeInclusive<usize>) -> CConstant {
    let ratios: Vec<(usize, f64)> = ells
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|ell| (ell, lambda_threshold(t, ell)))
        .collect();
    let mut best: Option<CConstant> = None;
    for (ell, lambda_t) in ratios {
        let c = ell as f64 / lambda_t;
        if best.is_none_or(|b| c < b.c) {
            best = Some(CConstant {
                t,
                c,
                ell_star: ell,
                lambda_t,
            });
        }
    }
    best.expect("empty left-degree range")
}

/// c(t) over ℓ in 2..=12, computed once per t and cached.
pub fn c_of_t(t: usize) -> CConstant {
    assert!((1..=MAX_T).contains(&t), "t must be in 1..=8");
    static CACHE: [OnceLock<CConstant>; MAX_T] = [const { OnceLock::new() }; MAX_T];
    *CACHE[t - 1].get_or_init(|| c_of_t_over(t, DEFAULT_ELL_RANGE))
}

/// Test count c(t)K(t log2(ℓN/(c(t)K) + 1) + 1) + 1 with ℓ = ℓ*.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestCount {
    pub t: usize,
    pub c: f64,
    pub ell: usize,
    pub value: f64,
    pub ceil: u64,
}

pub fn tests_needed(n: usize, k: usize, t: usize) -> TestCount {
    let cc = c_of_t(t);
    let value = test_count_formula(n, k, t, cc.c, cc.ell_star);
    TestCount {
        t,
        c: cc.c,
        ell: cc.ell_star,
        value,
        ceil: value.ceil() as u64,
    }
}

/// The bare formula, for explicit constants.
pub fn test_count_formula(n: usize, k: usize, t: usize, c: f64, ell: usize) -> f64 {
    let (n, k, t, ell) = (n as f64, k as f64, t as f64, ell as f64);
    c * k * (t * (ell * n / (c * k) + 1.0).log2() + 1.0) + 1.0
}

/// The t in 1..=8 minimizing [`tests_needed`].
pub fn best_t(n: usize, k: usize) -> TestCount {
    (1..=MAX_T)
        .map(|t| tests_needed(n, k, t))
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{DiscreteCDF, Poisson};

    #[test]
    fn rho_first_weight() {
        let rho = rho_weights(1.0, 1e-12);
        assert!((rho[0] - (-1.0f64).exp()).abs() < 1e-15);
        assert!((rho[0] - 0.3679).abs() < 1e-4);
    }

    #[test]
    fn rho_normalized() {
        for lambda in [0.1, 1.0, 3.35, 7.0, 25.0] {
            let s: f64 = rho_weights(lambda, 1e-12).iter().sum();
            assert!((s - 1.0).abs() <= 1e-12, "lambda={lambda}: {s}");
        }
    }

    #[test]
    fn rho_tail_against_poisson_cdf() {
        let rho = rho_weights(5.0, 1e-12);
        let pois = Poisson::new(5.0).unwrap();
        // ρ covers Poisson masses at 0..len-1.
        let tail = pois.sf(rho.len() as u64 - 1);
        assert!(tail < 1e-12, "tail {tail}");
        let shorter_tail = pois.sf(rho.len() as u64 - 3);
        assert!(shorter_tail > 1e-13);
    }

    #[test]
    fn zero_is_absorbing() {
        for t in 1..=4 {
            let cfg = DeConfig::new(t, 3, 4.0);
            assert_eq!(de_step(0.0, &cfg), 0.0);
        }
    }

    #[test]
    fn general_step_matches_t1_closed_form() {
        for &lambda in &[0.5, 1.0, 2.0, 2.45, 4.0, 9.0] {
            for ell in 2..=5 {
                let de = DensityEvolution::new(DeConfig::new(1, ell, lambda));
                for i in 0..=20 {
                    let p = i as f64 / 20.0;
                    let closed = (1.0 - (-lambda * p).exp()).powi(ell as i32 - 1);
                    assert!((de.step(p) - closed).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn p_one_t1() {
        let v = de_step(1.0, &DeConfig::new(1, 3, 2.0));
        let expected = (1.0 - (-2.0f64).exp()).powi(2);
        assert!((v - expected).abs() < 1e-12);
        assert!((v - 0.7476).abs() < 1e-4);
    }

    #[test]
    fn general_step_matches_poisson_thinning() {
        // Σ_i ρ_i P[Bin(i-1,p) <= t-1] = P[Poisson(λp) <= t-1].
        for t in 2..=6 {
            for &lambda in &[1.0, 3.3, 8.0] {
                let de = DensityEvolution::new(DeConfig::new(t, 2, lambda));
                for i in 1..=10 {
                    let p = i as f64 / 10.0;
                    let q = Poisson::new(lambda * p).unwrap().cdf(t as u64 - 1);
                    assert!((de.resolve_probability(p) - q).abs() < 1e-10, "t={t} λ={lambda} p={p}");
                }
            }
        }
    }

    #[test]
    fn fixed_points_around_t1_ell3_threshold() {
        assert!(de_fixed_point(&DeConfig::new(1, 3, 2.0)).converged_to_zero);
        assert!(!de_fixed_point(&DeConfig::new(1, 3, 3.0)).converged_to_zero);
        let tiny = de_fixed_point(&DeConfig::new(2, 2, 1e-6));
        assert!(tiny.converged_to_zero);
        assert!(tiny.p_star < 1e-10);
    }

    #[test]
    fn thresholds() {
        assert!((lambda_threshold(1, 2) - 1.0).abs() < 1e-3);
        assert!((lambda_threshold(1, 3) - 3.0 / 1.222).abs() < 2e-3);
        assert!((lambda_threshold(2, 2) - 2.0 / 0.597).abs() < 5e-3);
    }

    #[test]
    fn threshold_insensitive_to_zero_cutoff() {
        for (t, ell) in [(2, 2), (3, 2), (2, 3)] {
            let base = DeConfig::new(t, ell, 1.0);
            let halved = DeConfig {
                p_zero: base.p_zero / 2.0,
                ..base.clone()
            };
            let a = lambda_threshold_with(&base);
            let b = lambda_threshold_with(&halved);
            assert!((a - b).abs() < 1e-3, "t={t} ell={ell}: {a} vs {b}");
        }
    }

    #[test]
    fn table_spot_checks() {
        let one = c_of_t(1);
        assert_eq!(one.ell_star, 3);
        assert!((one.c - 1.222).abs() < 0.01);
        let four = c_of_t(4);
        assert_eq!(four.ell_star, 2);
        assert!((four.c - 0.294).abs() < 0.01);
        let eight = c_of_t(8);
        assert_eq!(eight.ell_star, 2);
        assert!((eight.c - 0.156).abs() < 0.01);
    }

    #[test]
    fn formula_with_table_constants() {
        let m = test_count_formula(1 << 16, 100, 2, 0.597, 2);
        assert!((m - 1387.0).abs() < 1.0, "{m}");
        let live = tests_needed(1 << 16, 100, 2);
        assert!((live.value - 1387.0).abs() < 3.0, "{}", live.value);
    }

    #[test]
    fn t2_minimizes_test_count() {
        assert_eq!(best_t(1 << 16, 100).t, 2);
    }

    #[test]
    fn doubling_n_needs_more_tests() {
        for t in 1..=3 {
            let a = tests_needed(1 << 15, 100, t).value;
            let b = tests_needed(1 << 16, 100, t).value;
            assert!(b > a);
        }
    }
}
