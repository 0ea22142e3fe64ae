//! Self-check suites comparing the library against independent oracles.

use std::fmt;

use secjam::battery::{empty_prob_large_capacity, geo_geo1_steady_state};
use secjam::beamforming::{jamming_gain, optimal_jamming_gain, optimal_weights, projection_matrix};
use secjam::linalg::{inner, norm};
use secjam::montecarlo::{
    geo_d1_empty_fraction, predict_mu_a_alice_saturated, predict_mu_a_jimmy_saturated, simulate, SimOptions,
};
use secjam::rng::{substream, Purpose};
use secjam::secrecy::{optimize_alpha, secrecy_rate_jammed_with_gain, secrecy_rate_unjammed};
use secjam::{ChannelSet64, SystemParams};
use rand::Rng;

use crate::oracles::{battery_linear_solve, dense_grid_max, secrecy_by_hand, CompetitorSampler};

/// Outcome of one suite with its measured deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "validation seed {}", self.seed)?;
        for s in &self.suites {
            let tag = if s.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {:<22} {}", s.name, s.detail)?;
        }
        let failed = self.suites.iter().filter(|s| !s.passed).count();
        write!(f, "{} suites, {failed} failed", self.suites.len())
    }
}

/// Steady-state solver under test, `(lambda, mu, cap) -> distribution`.
pub type SteadyStateFn = fn(f64, f64, u32) -> Vec<f64>;

/// Replaceable pieces of the library, so tests can check that a broken
/// implementation is caught.
#[derive(Clone, Copy)]
pub struct Hooks {
    pub steady_state: SteadyStateFn,
}

fn library_steady_state(lambda: f64, mu: f64, cap: u32) -> Vec<f64> {
    geo_geo1_steady_state(lambda, mu, cap).expect("valid grid point").steady
}

impl Default for Hooks {
    fn default() -> Self {
        Self {
            steady_state: library_steady_state,
        }
    }
}

pub fn run_validate(seed: u64) -> ValidationReport {
    run_validate_with(seed, Hooks::default())
}

pub fn run_validate_with(seed: u64, hooks: Hooks) -> ValidationReport {
    let suites = vec![
        beamformer_oracle(seed),
        projector(seed),
        markov_closed_form(&hooks),
        large_capacity(&hooks),
        clipping(seed),
        dominance(seed),
        alpha_optimizer(seed),
        geo_d1(seed),
        special_cases(seed),
        determinism(seed),
    ];
    ValidationReport { seed, suites }
}

fn report(name: &'static str, passed: bool, detail: String) -> SuiteReport {
    SuiteReport { name, passed, detail }
}

fn grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

fn beamformer_oracle(seed: u64) -> SuiteReport {
    let mut rng = substream(seed, Purpose::Generic, 100);
    // K = 2 leaves a one-dimensional null space, where every competitor
    // equals the optimum up to rounding.
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_null: f64 = 0.0;
    let mut ok = true;
    for k in 2..=6 {
        for _ in 0..20 {
            let ch = ChannelSet64::sample(&mut rng, k);
            let Ok(g) = optimal_weights(&ch.h_jb, &ch.h_je) else {
                ok = false;
                continue;
            };
            let best = jamming_gain(&g, &ch.h_je);
            let rival = CompetitorSampler::new(&ch.h_jb, &ch.h_je).max_of(&mut rng, 20_000);
            worst_excess = worst_excess.max((rival - best) / best);
            worst_null = worst_null.max(inner(g.as_slice(), &ch.h_jb).norm());
        }
    }
    let passed = ok && worst_excess <= 1e-12 && worst_null <= 1e-10;
    report(
        "beamformer_oracle",
        passed,
        format!("max relative competitor excess {worst_excess:.3e}, max |g*h_jb| {worst_null:.3e}"),
    )
}

fn projector(seed: u64) -> SuiteReport {
    let mut rng = substream(seed, Purpose::Generic, 101);
    let mut dev: f64 = 0.0;
    for k in 2..=6 {
        for _ in 0..20 {
            let ch = ChannelSet64::sample(&mut rng, k);
            let psi = projection_matrix(&ch.h_jb).expect("nonzero channel");
            dev = dev
                .max(psi.matmul(&psi).max_abs_diff(&psi))
                .max(psi.adjoint().max_abs_diff(&psi))
                .max(norm(&psi.mul_vec(&ch.h_jb)))
                .max((psi.trace().re - (k - 1) as f64).abs());
        }
    }
    report("projector", dev <= 1e-12, format!("max deviation {dev:.3e}"))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn markov_closed_form(hooks: &Hooks) -> SuiteReport {
    let mut dev: f64 = 0.0;
    for &cap in &[1u32, 2, 5, 10, 50] {
        for &l in &grid() {
            for &m in &grid() {
                dev = dev.max(max_diff(&(hooks.steady_state)(l, m, cap), &battery_linear_solve(l, m, cap)));
            }
        }
    }
    let mut eta_one: f64 = 0.0;
    for &cap in &[1u32, 10, 50] {
        for &x in &[0.15, 0.5, 0.85] {
            eta_one = eta_one.max(max_diff(&(hooks.steady_state)(x, x, cap), &battery_linear_solve(x, x, cap)));
        }
    }
    report(
        "markov_closed_form",
        dev <= 1e-10 && eta_one <= 1e-10,
        format!("grid max deviation {dev:.3e}, eta=1 max deviation {eta_one:.3e}"),
    )
}

fn large_capacity(hooks: &Hooks) -> SuiteReport {
    let mut dev: f64 = 0.0;
    for &l in &grid() {
        for &m in &grid() {
            if (l - m).abs() < 0.05 {
                continue;
            }
            let empty = (hooks.steady_state)(l, m, 1000)[0];
            dev = dev.max((empty - empty_prob_large_capacity(l, m)).abs());
        }
    }
    report("large_capacity", dev <= 1e-6, format!("max deviation {dev:.3e}"))
}

fn clipping(seed: u64) -> SuiteReport {
    let mut rng = substream(seed, Purpose::Generic, 102);
    let p = SystemParams::default();
    let mut violations = 0usize;
    let mut dev: f64 = 0.0;
    for _ in 0..10_000 {
        let ch = ChannelSet64::sample(&mut rng, 2);
        let alpha: f64 = rng.random_range(1e-3..=1.0);
        let gain: f64 = rng.random_range(0.0..20.0);
        let j = secrecy_rate_jammed_with_gain(&ch, gain, &p, alpha);
        let u = secrecy_rate_unjammed(&ch, &p, alpha);
        for r in [j, u] {
            if r.secrecy < 0.0 || r.secrecy > r.rate_ab || r.secrecy != (r.rate_ab - r.rate_ae).max(0.0) {
                violations += 1;
            }
        }
        let positive = ch.theta_ab() * (alpha + p.snr_j * gain) > ch.theta_ae() * alpha;
        if (j.secrecy > 0.0) != positive {
            violations += 1;
        }
        let hand = secrecy_by_hand(p.snr_a, p.snr_j, alpha, ch.theta_ab(), ch.theta_ae(), gain);
        dev = dev.max((j.secrecy - hand).abs());
    }
    report(
        "clipping",
        violations == 0 && dev <= 1e-12,
        format!("{violations} violations, max deviation from direct formula {dev:.3e}"),
    )
}

fn dominance(seed: u64) -> SuiteReport {
    let mut rng = substream(seed, Purpose::Generic, 103);
    let p = SystemParams::default();
    let mut violations = 0usize;
    for i in 0..10_000 {
        let ch = ChannelSet64::sample(&mut rng, 2 + i % 5);
        let gain = optimal_jamming_gain(&ch.h_jb, &ch.h_je).unwrap_or(0.0);
        let alpha = (1 + i % 100) as f64 / 100.0;
        let j = secrecy_rate_jammed_with_gain(&ch, gain, &p, alpha).secrecy;
        let u = secrecy_rate_unjammed(&ch, &p, alpha).secrecy;
        if u > j {
            violations += 1;
        }
    }
    report("dominance", violations == 0, format!("{violations} unjammed > jammed"))
}

fn alpha_optimizer(seed: u64) -> SuiteReport {
    let mut rng = substream(seed, Purpose::Generic, 104);
    let mut worst: f64 = f64::NEG_INFINITY;
    for snr_j in [0.5, 3.0, 100.0] {
        let p = SystemParams { snr_j, ..Default::default() };
        for _ in 0..20 {
            let ch = ChannelSet64::sample(&mut rng, 3);
            let gain = optimal_jamming_gain(&ch.h_jb, &ch.h_je).unwrap_or(0.0);
            let f = |a| secrecy_by_hand(p.snr_a, p.snr_j, a, ch.theta_ab(), ch.theta_ae(), gain);
            let (_, oracle) = dense_grid_max(f, 100_000);
            let (_, v) = optimize_alpha(|a| secrecy_rate_jammed_with_gain(&ch, gain, &p, a).secrecy, p.alpha_grid);
            // Shortfall of the search below the grid optimum.
            worst = worst.max(oracle - v);
        }
    }
    report(
        "alpha_optimizer",
        worst <= 1e-6,
        format!("max shortfall vs dense grid {worst:.3e}"),
    )
}

fn geo_d1(seed: u64) -> SuiteReport {
    let mut dev: f64 = 0.0;
    for lambda in [0.1, 0.35, 0.9] {
        let empty = geo_d1_empty_fraction(lambda, 1_000_000, seed);
        dev = dev.max((empty - (1.0 - lambda)).abs());
    }
    report("geo_d1_empty", dev <= 0.005, format!("max |empty - (1 - lambda)| {dev:.5}"))
}

fn special_cases(seed: u64) -> SuiteReport {
    let opts = SimOptions::with_slots(20_000);
    let mut worst: f64 = 0.0;
    let mut details = Vec::new();
    let cases = [(1.0, 0.3), (1.0, 0.7), (0.3, 1.0), (0.7, 1.0)];
    for (la, lj) in cases {
        let p = SystemParams {
            lambda_a: la,
            lambda_j: lj,
            seed,
            ..Default::default()
        };
        let r = match simulate::<f64>(&p, &opts) {
            Ok(r) => r,
            Err(e) => return report("special_cases", false, e.to_string()),
        };
        let pred = if la == 1.0 {
            predict_mu_a_alice_saturated(r.mean_rate_jammed, r.mean_rate_unjammed, lj, r.beta_hat)
        } else {
            predict_mu_a_jimmy_saturated(r.mean_rate_jammed, la, r.beta_hat)
        };
        let z = (r.mu_a - pred).abs() / r.ci_halfwidth;
        worst = worst.max(z);
        details.push(format!("({la},{lj}) {:.4}/{:.4}", r.mu_a, pred));
    }
    report(
        "special_cases",
        worst <= 1.0,
        format!("max |sim - pred| / ci {worst:.3}; {}", details.join(" ")),
    )
}

fn determinism(seed: u64) -> SuiteReport {
    let p = SystemParams {
        lambda_a: 0.6,
        lambda_j: 0.5,
        seed,
        ..Default::default()
    };
    let opts = SimOptions::with_slots(4_000);
    let a = simulate::<f64>(&p, &opts);
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map(|pool| pool.install(|| simulate::<f64>(&p, &opts)));
    let same = match (a, b) {
        (Ok(a), Ok(Ok(b))) => a == b,
        _ => false,
    };
    report(
        "determinism",
        same,
        format!("repeat run {}", if same { "bit-identical" } else { "differs" }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The closed form with the `1 / (1 - mu)` factor on the nonempty
    /// levels dropped.
    fn missing_factor(lambda: f64, mu: f64, cap: u32) -> Vec<f64> {
        let eta = lambda * (1.0 - mu) / ((1.0 - lambda) * mu);
        let w: Vec<f64> = (0..=cap).map(|n| eta.powi(n as i32)).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    }

    #[test]
    fn default_seed_passes() {
        let r = run_validate(1);
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn same_seed_same_report() {
        assert_eq!(run_validate(7).to_string(), run_validate(7).to_string());
    }

    #[test]
    fn mutated_closed_form_is_caught() {
        let r = run_validate_with(3, Hooks { steady_state: missing_factor });
        assert!(!r.suite("markov_closed_form").unwrap().passed);
        assert!(!r.all_passed());
    }
}
