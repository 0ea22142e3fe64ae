//! Per-slot link rates, secrecy rates, and the transmission-time search.
//!
//! Rates are in bits/s/Hz with noise power normalized to one. Alice spends
//! one energy packet over a fraction `alpha` of the slot, so her transmit SNR
//! during that time is `snr_a / alpha`; the same holds for Jimmy.

use crate::beamforming::{jamming_gain, BeamWeights};
use crate::channel::{ChannelSet, SystemParams};
use crate::scalar::Real;

/// Width at which the golden-section refinement stops.
pub const ALPHA_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotRates<T> {
    pub alpha: T,
    pub rate_ab: T,
    pub rate_ae: T,
    /// `max(rate_ab - rate_ae, 0)`, forced to zero when the positivity
    /// condition fails.
    pub secrecy: T,
    /// Whether Jimmy was jamming in this evaluation.
    pub jammed: bool,
}

/// `alpha * log2(1 + x / alpha)`, extended by continuity to 0 at `alpha = 0`.
fn time_scaled_capacity<T: Real>(alpha: T, x: T) -> T {
    if alpha <= T::zero() || x <= T::zero() {
        return T::zero();
    }
    alpha * (x / alpha).ln_1p() / T::LN_2()
}

/// Alice -> Bob rate `alpha log2(1 + snr_a theta_ab / alpha)`.
pub fn rate_ab<T: Real>(snr_a: T, alpha: T, theta_ab: T) -> T {
    time_scaled_capacity(alpha, snr_a * theta_ab)
}

/// Alice -> Eve rate while Jimmy jams with gain `jam_gain = |g^* h_je|^2`.
pub fn rate_ae_jammed<T: Real>(snr_a: T, snr_j: T, alpha: T, theta_ae: T, jam_gain: T) -> T {
    if alpha <= T::zero() {
        return T::zero();
    }
    // (snr_a theta / alpha) / (1 + snr_j gain / alpha), multiplied through by alpha.
    let sinr = snr_a * theta_ae / (alpha + snr_j * jam_gain);
    if sinr.is_nan() {
        // infinite jamming power
        return T::zero();
    }
    alpha * sinr.ln_1p() / T::LN_2()
}

/// Alice -> Eve rate with Jimmy silent.
pub fn rate_ae_unjammed<T: Real>(snr_a: T, alpha: T, theta_ae: T) -> T {
    time_scaled_capacity(alpha, snr_a * theta_ae)
}

/// Evaluates the secrecy rate of one slot for a given effective jamming
/// power `snr_j * jam_gain` (zero when Jimmy is silent).
fn evaluate<T: Real>(ch: &ChannelSet<T>, snr_a: T, jam_power: T, alpha: T, jammed: bool) -> SlotRates<T> {
    let (theta_ab, theta_ae) = (ch.theta_ab(), ch.theta_ae());
    let r_ab = rate_ab(snr_a, alpha, theta_ab);
    let r_ae = if jammed {
        rate_ae_jammed(snr_a, T::one(), alpha, theta_ae, jam_power)
    } else {
        rate_ae_unjammed(snr_a, alpha, theta_ae)
    };
    let secure = jammed_is_secure(theta_ab, theta_ae, T::one(), jam_power, alpha);
    let secrecy = if secure { (r_ab - r_ae).max(T::zero()) } else { T::zero() };
    SlotRates {
        alpha,
        rate_ab: r_ab,
        rate_ae: r_ae,
        secrecy,
        jammed,
    }
}

/// Whether the jammed slot supports a strictly positive secrecy rate:
/// `theta_ab > theta_ae / (1 + snr_j jam_gain / alpha)`, cleared of
/// denominators. With `jam_gain = 0` this is the unjammed condition.
pub fn jammed_is_secure<T: Real>(theta_ab: T, theta_ae: T, snr_j: T, jam_gain: T, alpha: T) -> bool {
    alpha > T::zero() && theta_ab * (alpha + snr_j * jam_gain) > theta_ae * alpha
}

/// Secrecy rate with Jimmy jamming through the weights `g`.
pub fn secrecy_rate_jammed<T: Real>(
    ch: &ChannelSet<T>,
    g: &BeamWeights<T>,
    p: &SystemParams,
    alpha: T,
) -> SlotRates<T> {
    secrecy_rate_jammed_with_gain(ch, jamming_gain(g, &ch.h_je), p, alpha)
}

/// As [`secrecy_rate_jammed`] with a precomputed jamming gain.
pub fn secrecy_rate_jammed_with_gain<T: Real>(
    ch: &ChannelSet<T>,
    jam_gain: T,
    p: &SystemParams,
    alpha: T,
) -> SlotRates<T> {
    evaluate(ch, T::of(p.snr_a), T::of(p.snr_j) * jam_gain, alpha, true)
}

/// Secrecy rate with Jimmy's battery empty.
pub fn secrecy_rate_unjammed<T: Real>(ch: &ChannelSet<T>, p: &SystemParams, alpha: T) -> SlotRates<T> {
    evaluate(ch, T::of(p.snr_a), T::zero(), alpha, false)
}

/// Maximizes `f` over `[lo, hi]` by golden-section search down to width
/// `tol`. Returns the best point visited and its value.
pub fn golden_section_max<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, tol: T) -> (T, T) {
    let inv_phi = (T::of(5.0).sqrt() - T::one()) / T::of(2.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    // Bounded: width shrinks geometrically, the cap guards against tol below
    // the representable spacing.
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximizes a per-`alpha` secrecy evaluator over `(0, 1]`.
///
/// The objective is first scanned on `grid_points` uniform points
/// `1/n, 2/n, ..., 1`; the best point's neighbouring bracket is then refined
/// by golden-section search. The result is never worse than any grid point.
/// Among equal values the smallest `alpha` is kept.
pub fn optimize_alpha<T: Real, F: Fn(T) -> T>(rate_fn: F, grid_points: usize) -> (T, T) {
    assert!(grid_points >= 2, "alpha grid needs at least two points");
    let n = T::from_usize(grid_points).unwrap();
    let mut best_i = 1;
    let mut best_v = rate_fn(T::one() / n);
    for i in 2..=grid_points {
        let v = rate_fn(T::from_usize(i).unwrap() / n);
        if v > best_v {
            best_i = i;
            best_v = v;
        }
    }
    let best_a = T::from_usize(best_i).unwrap() / n;
    let lo = T::from_usize(best_i - 1).unwrap() / n;
    let hi = (T::from_usize(best_i + 1).unwrap() / n).min(T::one());
    let (a, v) = golden_section_max(&rate_fn, lo, hi, T::of(ALPHA_TOLERANCE));
    if v > best_v || (v == best_v && a < best_a) {
        (a, v)
    } else {
        (best_a, best_v)
    }
}

fn choose_alpha<T: Real, F: Fn(T) -> T>(p: &SystemParams, f: F) -> T {
    match p.alpha_fixed {
        Some(a) => T::of(a),
        None => optimize_alpha(f, p.alpha_grid).0,
    }
}

/// Jammed slot at the best transmission time (or at `alpha_fixed`).
pub fn best_jammed<T: Real>(ch: &ChannelSet<T>, jam_gain: T, p: &SystemParams) -> SlotRates<T> {
    let alpha = choose_alpha(p, |a| secrecy_rate_jammed_with_gain(ch, jam_gain, p, a).secrecy);
    secrecy_rate_jammed_with_gain(ch, jam_gain, p, alpha)
}

/// Unjammed slot at the best transmission time (or at `alpha_fixed`).
pub fn best_unjammed<T: Real>(ch: &ChannelSet<T>, p: &SystemParams) -> SlotRates<T> {
    let alpha = choose_alpha(p, |a| secrecy_rate_unjammed(ch, p, a).secrecy);
    secrecy_rate_unjammed(ch, p, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Complex;

    fn chan(theta_ab: f64, theta_ae: f64) -> ChannelSet<f64> {
        let z = Complex::new(0.0, 0.0);
        let o = Complex::new(1.0, 0.0);
        ChannelSet::new(
            Complex::new(theta_ab.sqrt(), 0.0),
            Complex::new(0.0, theta_ae.sqrt()),
            vec![o, z],
            vec![z, o],
        )
        .unwrap()
    }

    fn params(snr_a: f64, snr_j: f64) -> SystemParams {
        SystemParams {
            snr_a,
            snr_j,
            ..Default::default()
        }
    }

    #[test]
    fn rate_ab_examples() {
        assert!((rate_ab(1.0f64, 1.0, 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(rate_ab(100.0, 0.3, 0.0), 0.0);
        assert_eq!(rate_ab(100.0, 0.0, 1.0), 0.0);
        // 0.5 * log2(201), reference value from 50-digit arithmetic.
        assert!((rate_ab(100.0f64, 0.5, 1.0) - 3.825_525_845_589_464).abs() < 1e-12);
    }

    #[test]
    fn rate_ae_examples() {
        // log2(1 + 100/101), 50-digit reference.
        assert!((rate_ae_jammed(100.0f64, 100.0, 1.0, 1.0, 1.0) - 0.992_840_208_427_133_9).abs() < 1e-12);
        for alpha in [0.1, 0.5, 1.0] {
            assert_eq!(
                rate_ae_jammed(30.0, 10.0, alpha, 0.7, 0.0),
                rate_ab(30.0, alpha, 0.7)
            );
        }
        assert!(rate_ae_jammed(30.0, 10.0, 0.5, 0.7, 1e300) < 1e-290);
        assert_eq!(rate_ae_jammed(30.0, 10.0, 0.5, 0.7, f64::INFINITY), 0.0);
    }

    #[test]
    fn jamming_helps_when_channels_tie() {
        let ch = chan(1.0, 1.0);
        let p = params(100.0, 100.0);
        assert!(secrecy_rate_jammed_with_gain(&ch, 0.5, &p, 1.0).secrecy > 0.0);
        assert_eq!(secrecy_rate_unjammed(&ch, &p, 1.0).secrecy, 0.0);
    }

    #[test]
    fn dead_legit_link_clips_to_zero() {
        let ch = chan(0.0, 0.4);
        let p = params(100.0, 100.0);
        assert_eq!(secrecy_rate_jammed_with_gain(&ch, 3.0, &p, 0.7).secrecy, 0.0);
        assert_eq!(secrecy_rate_unjammed(&ch, &p, 0.7).secrecy, 0.0);
    }

    #[test]
    fn perfectly_secure_channel() {
        let ch = chan(0.8, 0.0);
        let p = params(50.0, 1.0);
        let r = secrecy_rate_unjammed(&ch, &p, 0.6);
        assert_eq!(r.secrecy, rate_ab(50.0, 0.6, 0.8));
    }

    #[test]
    fn secrecy_through_weights_matches_gain_form() {
        let ch = chan(0.9, 1.3);
        let p = params(100.0, 100.0);
        let g = crate::beamforming::optimal_weights(&ch.h_jb, &ch.h_je).unwrap();
        let a = secrecy_rate_jammed(&ch, &g, &p, 0.4);
        let b = secrecy_rate_jammed_with_gain(&ch, 1.0, &p, 0.4);
        assert!((a.secrecy - b.secrecy).abs() < 1e-12);
        assert!(a.jammed);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, v) = golden_section_max(|x: f64| -(x - 0.3141).powi(2), 0.0, 1.0, 1e-9);
        assert!((x - 0.3141).abs() < 1e-8);
        assert!(v <= 0.0 && v > -1e-15);
    }

    #[test]
    fn optimizer_is_never_below_alpha_one_or_grid() {
        let f = |a: f64| (a * 7.0).sin() * a;
        let (a, v) = optimize_alpha(f, 10);
        assert!(v >= f(1.0));
        for i in 1..=10 {
            assert!(v >= f(i as f64 / 10.0));
        }
        assert!(a > 0.0 && a <= 1.0);
    }

    #[test]
    fn ties_pick_smallest_alpha() {
        let (a, v) = optimize_alpha(|_a: f64| 2.0, 8);
        assert_eq!(v, 2.0);
        assert!(a <= 1.0 / 8.0);
    }

    #[test]
    fn fixed_alpha_bypasses_search() {
        let ch = chan(1.0, 0.5);
        let p = SystemParams {
            alpha_fixed: Some(1.0),
            ..params(100.0, 100.0)
        };
        assert_eq!(best_jammed(&ch, 2.0, &p).alpha, 1.0);
        assert_eq!(best_unjammed(&ch, &p).alpha, 1.0);
    }
}
