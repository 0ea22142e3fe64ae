//! Energy-packet batteries as discrete-time queues.
//!
//! Slot convention: a departure (one packet spent on a transmission) happens
//! first, then the Bernoulli arrival is added and capped at capacity. An
//! arriving packet can therefore not be spent in the slot it arrives.
//!
//! Under that convention a battery with arrival probability `lambda` and
//! per-slot service probability `mu` is a birth-death chain on `0..=cap` with
//!
//! ```text
//! 0 -> 1        w.p. lambda
//! n -> n + 1    w.p. lambda (1 - mu)     (0 < n < cap)
//! n -> n - 1    w.p. mu (1 - lambda)     (n > 0)
//! ```
//!
//! whose stationary law is `nu_n = nu_0 eta^n / (1 - mu)` for `n >= 1`, with
//! `eta = lambda (1 - mu) / ((1 - lambda) mu)`.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatteryState {
    pub level: u32,
    pub cap: u32,
}

impl BatteryState {
    pub fn empty(cap: u32) -> Self {
        Self { level: 0, cap }
    }

    pub fn is_empty(&self) -> bool {
        self.level == 0
    }
}

/// Advances one slot: departure first, then the arrival (dropped when full).
pub fn step(state: BatteryState, arrival: bool, depart: bool) -> Result<BatteryState> {
    let mut level = state.level.min(state.cap);
    if depart {
        if level == 0 {
            return Err(Error::EmptyBatteryDeparture);
        }
        level -= 1;
    }
    if arrival {
        level = (level + 1).min(state.cap);
    }
    Ok(BatteryState { level, ..state })
}

/// Birth-death description of a battery plus its stationary distribution
/// over levels `0..=cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct BatteryChain<T> {
    pub lambda: T,
    pub mu: T,
    pub cap: u32,
    pub steady: Vec<T>,
}

impl<T: Real> BatteryChain<T> {
    /// `eta = lambda (1 - mu) / ((1 - lambda) mu)`; infinite when the
    /// denominator vanishes.
    pub fn eta(&self) -> T {
        eta(self.lambda, self.mu)
    }

    pub fn empty_prob(&self) -> T {
        self.steady[0]
    }

    pub fn nonempty_prob(&self) -> T {
        T::one() - self.steady[0]
    }

    /// One-slot transition probabilities `(down, up)` out of `level`.
    pub fn transition(&self, level: u32) -> (T, T) {
        let (l, m) = (self.lambda, self.mu);
        let one = T::one();
        let down = if level == 0 { T::zero() } else { m * (one - l) };
        let up = match level {
            0 => l,
            n if n >= self.cap => T::zero(),
            _ => l * (one - m),
        };
        (down, up)
    }

    /// Largest absolute violation of the global balance equations
    /// `nu_n = sum_m nu_m P(m, n)`.
    pub fn balance_residual(&self) -> T {
        let n = self.steady.len();
        let mut inflow = vec![T::zero(); n];
        for (m, &p) in self.steady.iter().enumerate() {
            let (down, up) = self.transition(m as u32);
            inflow[m] += p * (T::one() - down - up);
            if m > 0 {
                inflow[m - 1] += p * down;
            }
            if m + 1 < n {
                inflow[m + 1] += p * up;
            }
        }
        inflow
            .iter()
            .zip(&self.steady)
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs()))
    }
}

pub fn eta<T: Real>(lambda: T, mu: T) -> T {
    lambda * (T::one() - mu) / ((T::one() - lambda) * mu)
}

fn check_prob<T: Real>(name: &'static str, x: T) -> Result<()> {
    if x >= T::zero() && x <= T::one() {
        Ok(())
    } else {
        Err(Error::param(name, format!("{x} is not a probability")))
    }
}

/// `sum_{i=0}^{n-1} r^i` for `r = 1 + d`, exact in the `d -> 0` limit.
fn geometric_sum<T: Real>(d: T, n: u32) -> T {
    if d == T::zero() {
        return T::from_u32(n).unwrap();
    }
    (T::from_u32(n).unwrap() * d.ln_1p()).exp_m1() / d
}

fn point_mass<T: Real>(cap: u32, at: u32) -> Vec<T> {
    let mut v = vec![T::zero(); cap as usize + 1];
    v[at as usize] = T::one();
    v
}

/// Stationary distribution of the finite Geo/Geo/1 battery.
///
/// For `0 < mu < 1` and `0 < lambda < 1` this is the closed form
///
/// ```text
/// nu_0 = 1 / (1 + ((1 - eta^(cap+1)) / (1 - eta) - 1) / (1 - mu))
/// nu_n = nu_0 eta^n / (1 - mu)
/// ```
///
/// with the geometric sum evaluated through `expm1`/`ln_1p` so that the
/// `eta = 1` limit (`nu_0 = 1 / (1 + cap / (1 - mu))`) is continuous, and
/// with weights taken relative to the top level when `eta > 1`.
///
/// Boundary cases: `lambda = 0` keeps all mass at empty; `lambda = 1` with
/// `mu < 1`, or `mu = 0` with `lambda > 0`, fills the battery to `cap`;
/// `lambda = mu = 1` sits at level 1; `mu = 1` alone is solved by the
/// product-form recursion.
pub fn geo_geo1_steady_state<T: Real>(lambda: T, mu: T, cap: u32) -> Result<BatteryChain<T>> {
    check_prob("lambda", lambda)?;
    check_prob("mu", mu)?;
    if cap < 1 {
        return Err(Error::param("cap", "capacity must be at least 1"));
    }
    let (zero, one) = (T::zero(), T::one());
    let steady = if lambda == zero {
        point_mass(cap, 0)
    } else if mu == zero || (lambda == one && mu < one) {
        point_mass(cap, cap)
    } else if lambda == one {
        point_mass(cap, 1)
    } else if mu == one {
        product_form(lambda, mu, cap)
    } else {
        closed_form(lambda, mu, cap)
    };
    Ok(BatteryChain {
        lambda,
        mu,
        cap,
        steady,
    })
}

fn closed_form<T: Real>(lambda: T, mu: T, cap: u32) -> Vec<T> {
    let one = T::one();
    let eta = eta(lambda, mu);
    let mut nu = Vec::with_capacity(cap as usize + 1);
    if eta <= one {
        // eta - 1 = (lambda - mu) / ((1 - lambda) mu), exact near eta = 1.
        let d = (lambda - mu) / ((one - lambda) * mu);
        let tail = geometric_sum(d, cap + 1) - one;
        let nu0 = one / (one + tail / (one - mu));
        nu.push(nu0);
        let mut pow = one;
        for _ in 1..=cap {
            pow *= eta;
            nu.push(nu0 * pow / (one - mu));
        }
    } else {
        // Same law divided through by eta^cap: w_n = r^(cap - n) / (1 - mu)
        // for n >= 1, w_0 = r^cap, r = 1 / eta < 1.
        let r = one / eta;
        let d = r - one;
        let z = r.powi(cap as i32) + geometric_sum(d, cap) / (one - mu);
        nu.push(r.powi(cap as i32) / z);
        for n in 1..=cap {
            nu.push(r.powi((cap - n) as i32) / (one - mu) / z);
        }
    }
    nu
}

/// Cut-equation recursion `nu_{n+1} = nu_n up_n / down_{n+1}`; requires
/// every downward probability to be positive (`mu > 0`, `lambda < 1`).
fn product_form<T: Real>(lambda: T, mu: T, cap: u32) -> Vec<T> {
    let one = T::one();
    let down = mu * (one - lambda);
    let mut w = vec![one];
    for n in 0..cap {
        let up = if n == 0 { lambda } else { lambda * (one - mu) };
        let next = w[n as usize] * up / down;
        w.push(next);
    }
    let z = w.iter().fold(T::zero(), |a, &b| a + b);
    w.into_iter().map(|x| x / z).collect()
}

/// Empty probability of an unbounded battery, `1 - min(lambda / mu, 1)`.
/// With `mu = 0` the battery never drains (empty only if it never charges).
pub fn empty_prob_large_capacity<T: Real>(lambda: T, mu: T) -> T {
    if mu == T::zero() {
        return if lambda > T::zero() { T::zero() } else { T::one() };
    }
    T::one() - (lambda / mu).min(T::one())
}

/// Empty probability `1 - lambda` of a Geo/D/1 battery with unit service.
pub fn geo_d1_empty_prob<T: Real>(lambda: T) -> T {
    T::one() - lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn step_examples() {
        let s = |level| BatteryState { level, cap: 10 };
        assert_eq!(step(s(0), true, false).unwrap().level, 1);
        assert_eq!(step(s(10), true, false).unwrap().level, 10);
        assert_eq!(step(s(5), true, true).unwrap().level, 5);
        assert_eq!(step(s(10), true, true).unwrap().level, 10);
        assert_eq!(step(s(1), false, true).unwrap().level, 0);
        assert_eq!(step(s(0), false, true), Err(Error::EmptyBatteryDeparture));
    }

    proptest! {
        #[test]
        fn step_stays_in_range(cap in 1u32..20, level in 0u32..20, arrival: bool, depart: bool) {
            let level = level.min(cap);
            let out = step(BatteryState { level, cap }, arrival, depart);
            if depart && level == 0 {
                prop_assert!(out.is_err());
            } else {
                let out = out.unwrap();
                prop_assert!(out.level <= cap);
            }
        }

        #[test]
        fn chain_is_a_balanced_distribution(l in 0.0f64..1.0, m in 0.001f64..1.0, cap in 1u32..60) {
            let chain = geo_geo1_steady_state(l, m, cap).unwrap();
            let total: f64 = chain.steady.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(chain.steady.iter().all(|&p| p >= 0.0));
            prop_assert!(chain.balance_residual() < 1e-12);
        }
    }

    #[test]
    fn eta_one_limit() {
        for &(p, cap) in &[(0.3, 10u32), (0.5, 1), (0.9, 50)] {
            let chain = geo_geo1_steady_state(p, p, cap).unwrap();
            let want = 1.0 / (1.0 + cap as f64 / (1.0 - p));
            assert!((chain.empty_prob() - want).abs() < 1e-14, "{p} {cap}");
            assert!(chain.balance_residual() < 1e-14);
        }
        // Approaching eta = 1 from either side is continuous.
        let at = geo_geo1_steady_state(0.4, 0.4, 20).unwrap().empty_prob();
        for eps in [1e-9f64, -1e-9, 1e-13, -1e-13] {
            let near = geo_geo1_steady_state(0.4 + eps, 0.4, 20).unwrap().empty_prob();
            assert!((near - at).abs() < 1e-7);
        }
    }

    #[test]
    fn never_charged_battery_is_empty() {
        let chain = geo_geo1_steady_state(0.0, 0.6, 10).unwrap();
        assert_eq!(chain.empty_prob(), 1.0);
    }

    #[test]
    fn boundary_cases() {
        let full = geo_geo1_steady_state(1.0, 0.4, 7).unwrap();
        assert_eq!(full.empty_prob(), 0.0);
        assert_eq!(full.steady[7], 1.0);
        assert_eq!(geo_geo1_steady_state(0.3, 0.0, 4).unwrap().steady[4], 1.0);
        assert_eq!(geo_geo1_steady_state(1.0, 1.0, 4).unwrap().steady[1], 1.0);
        // mu = 1 behaves like the unit-service queue: empty w.p. 1 - lambda.
        let unit = geo_geo1_steady_state(0.35f64, 1.0, 5).unwrap();
        assert!((unit.empty_prob() - 0.65).abs() < 1e-15);
        assert!(unit.balance_residual() < 1e-15);
        assert!(geo_geo1_steady_state(1.2, 0.5, 3).is_err());
        assert!(geo_geo1_steady_state(0.2, 0.5, 0).is_err());
    }

    #[test]
    fn huge_eta_and_capacity_do_not_overflow() {
        let chain = geo_geo1_steady_state(0.9f64, 0.1, 1000).unwrap();
        assert!(chain.steady.iter().all(|p| p.is_finite()));
        assert!(chain.empty_prob() < 1e-300);
        assert!(chain.balance_residual() < 1e-12);
    }

    #[test]
    fn large_capacity_examples() {
        assert_eq!(empty_prob_large_capacity(0.9, 0.3), 0.0);
        assert!((empty_prob_large_capacity(0.2f64, 0.5) - 0.6).abs() < 1e-15);
        assert_eq!(empty_prob_large_capacity(0.2, 0.0), 0.0);
        assert_eq!(empty_prob_large_capacity(0.0, 0.0), 1.0);
        let finite = geo_geo1_steady_state(0.3f64, 0.6, 1000).unwrap().empty_prob();
        assert!((finite - empty_prob_large_capacity(0.3, 0.6)).abs() < 1e-6);
    }

    #[test]
    fn geo_d1_examples() {
        assert_eq!(geo_d1_empty_prob(1.0), 0.0);
        assert_eq!(geo_d1_empty_prob(0.0), 1.0);
        assert!((geo_d1_empty_prob(0.35f64) - 0.65).abs() < 1e-15);
    }

    #[test]
    fn empty_prob_monotone_on_grid() {
        let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        for &cap in &[1u32, 2, 5, 10, 50] {
            for &m in &grid {
                let mut prev = f64::INFINITY;
                for &l in &grid {
                    let e = geo_geo1_steady_state(l, m, cap).unwrap().empty_prob();
                    assert!(e <= prev + 1e-15, "not nonincreasing in lambda");
                    prev = e;
                }
            }
            for &l in &grid {
                let mut prev = -1.0;
                for &m in &grid {
                    let e = geo_geo1_steady_state(l, m, cap).unwrap().empty_prob();
                    assert!(e >= prev - 1e-15, "not nondecreasing in mu");
                    prev = e;
                }
            }
        }
    }

    #[test]
    fn single_precision_chain() {
        let chain = geo_geo1_steady_state(0.3f32, 0.6f32, 10).unwrap();
        let total: f32 = chain.steady.iter().sum();
        assert!((total - 1.0).abs() < 1e-5);
    }
}
