//! Slot-level simulation of the coupled Alice/Jimmy batteries and the
//! closed-form special-case predictors of the average secrecy rate.
//!
//! Each slot: draw channels; if both batteries hold energy Alice transmits
//! under jamming, if only Alice's does she transmits unprotected, otherwise
//! both stay idle. A packet is spent only when the slot's secrecy rate is
//! positive (unless [`SimOptions::deplete_on_insecure`] is set). Arrivals
//! are applied after departures.
//!
//! Randomness is split into independent sub-streams for channels and for
//! each battery's arrivals, per replica. Every slot consumes the same
//! amount of each stream whatever the battery states, so two runs with the
//! same seed but different arrival rates see identical channels and
//! identical arrival uniforms (common random numbers).

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::battery::{step, BatteryState};
use crate::beamforming::optimal_jamming_gain;
use crate::channel::{ChannelSet, SystemParams};
use crate::error::{Error, Result};
use crate::rng::{substream, Purpose};
use crate::scalar::Real;
use crate::secrecy::{best_jammed, best_unjammed, SlotRates};

#[derive(Debug, Clone, PartialEq)]
pub struct SimOptions {
    /// Measured slots, summed over replicas (warm-up excluded).
    pub n_slots: usize,
    /// Independent replicas run in parallel and merged.
    pub replicas: usize,
    /// Batch count for the batch-means confidence interval (at least 30).
    pub batches: usize,
    /// Spend packets on slots whose secrecy condition fails too.
    pub deplete_on_insecure: bool,
    /// Overrides the default warm-up `max(10 cap_a, 10 cap_j, 1000)`.
    pub warmup: Option<usize>,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            n_slots: 40_000,
            replicas: 4,
            batches: 40,
            deplete_on_insecure: false,
            warmup: None,
        }
    }
}

impl SimOptions {
    pub fn with_slots(n_slots: usize) -> Self {
        Self {
            n_slots,
            ..Default::default()
        }
    }
}

/// Time-averaged statistics of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Average securely delivered bits/s/Hz per slot.
    pub mu_a: f64,
    /// Pr{B_A > 0, B_J > 0}.
    pub p_joint_on: f64,
    /// Pr{B_A > 0, B_J = 0}.
    pub p_a_on_j_off: f64,
    pub p_a_on: f64,
    pub p_j_on: f64,
    /// Packets spent by Alice per slot in which her battery was nonempty.
    pub mu_b_a: f64,
    /// Packets spent by Jimmy per slot in which his battery was nonempty.
    pub mu_b_j: f64,
    /// Mean optimized jammed secrecy rate over all simulated channels.
    pub mean_rate_jammed: f64,
    /// Mean optimized unjammed secrecy rate over all simulated channels.
    pub mean_rate_unjammed: f64,
    /// Fraction of slots whose jammed secrecy rate is positive.
    pub beta_hat: f64,
    pub n_slots: usize,
    /// 95% batch-means half-width on `mu_a`.
    pub ci_halfwidth: f64,
    /// Per-batch averages of the delivered secrecy rate.
    pub batch_means: Vec<f64>,
}

#[derive(Debug, Default, Clone)]
struct Tally {
    slots: u64,
    rate: f64,
    joint_on: u64,
    a_only: u64,
    a_on: u64,
    j_on: u64,
    dep_a: u64,
    dep_j: u64,
    jammed_sum: f64,
    unjammed_sum: f64,
    secure_jammed: u64,
    batches: Vec<f64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.slots += other.slots;
        self.rate += other.rate;
        self.joint_on += other.joint_on;
        self.a_only += other.a_only;
        self.a_on += other.a_on;
        self.j_on += other.j_on;
        self.dep_a += other.dep_a;
        self.dep_j += other.dep_j;
        self.jammed_sum += other.jammed_sum;
        self.unjammed_sum += other.unjammed_sum;
        self.secure_jammed += other.secure_jammed;
        self.batches.extend(other.batches);
        self
    }
}

/// Secrecy rates for both jammer regimes of one channel draw.
#[derive(Debug, Clone, Copy)]
pub struct SlotOutcome<T> {
    pub jammed: SlotRates<T>,
    pub unjammed: SlotRates<T>,
}

/// Draws one slot's channels (all `N` antennas, jammer uses `1..=K`) and
/// evaluates both regimes at their best transmission time.
pub fn draw_slot<T: Real, R: Rng + ?Sized>(rng: &mut R, p: &SystemParams) -> SlotOutcome<T>
where
    StandardNormal: Distribution<T>,
{
    let ch = ChannelSet::<T>::sample(rng, p.n_antennas).restrict(p.k_active);
    // Zero-norm or aligned vectors only occur with probability zero; both
    // degrade to no jamming gain.
    let jam_gain = optimal_jamming_gain(&ch.h_jb, &ch.h_je).unwrap_or(T::zero());
    SlotOutcome {
        jammed: best_jammed(&ch, jam_gain, p),
        unjammed: best_unjammed(&ch, p),
    }
}

fn default_warmup(p: &SystemParams) -> usize {
    (10 * p.cap_a as usize).max(10 * p.cap_j as usize).max(1000)
}

fn run_replica<T: Real>(p: &SystemParams, opts: &SimOptions, replica: usize, slots: usize, n_batches: usize) -> Tally
where
    StandardNormal: Distribution<T>,
{
    let mut ch_rng = substream(p.seed, Purpose::Channel, replica as u64);
    let mut a_rng = substream(p.seed, Purpose::ArrivalAlice, replica as u64);
    let mut j_rng = substream(p.seed, Purpose::ArrivalJimmy, replica as u64);
    let mut alice = BatteryState::empty(p.cap_a);
    let mut jimmy = BatteryState::empty(p.cap_j);
    let warmup = opts.warmup.unwrap_or_else(|| default_warmup(p));
    let n_batches = n_batches.min(slots).max(1);

    let mut t = Tally::default();
    let mut batch_sum = 0.0;
    let mut batch_len = 0usize;
    let mut batch_idx = 0usize;
    for slot in 0..warmup + slots {
        let out = draw_slot::<T, _>(&mut ch_rng, p);
        let arrive_a = a_rng.random::<f64>() < p.lambda_a;
        let arrive_j = j_rng.random::<f64>() < p.lambda_j;
        let (a_on, j_on) = (!alice.is_empty(), !jimmy.is_empty());

        let rate = match (a_on, j_on) {
            (true, true) => out.jammed.secrecy.as_f64(),
            (true, false) => out.unjammed.secrecy.as_f64(),
            _ => 0.0,
        };
        let transmit = a_on && (rate > 0.0 || opts.deplete_on_insecure);
        let dep_a = transmit;
        let dep_j = transmit && j_on;
        alice = step(alice, arrive_a, dep_a).expect("departure only from nonempty battery");
        jimmy = step(jimmy, arrive_j, dep_j).expect("departure only from nonempty battery");

        if slot < warmup {
            continue;
        }
        t.slots += 1;
        t.rate += rate;
        t.joint_on += (a_on && j_on) as u64;
        t.a_only += (a_on && !j_on) as u64;
        t.a_on += a_on as u64;
        t.j_on += j_on as u64;
        t.dep_a += dep_a as u64;
        t.dep_j += dep_j as u64;
        t.jammed_sum += out.jammed.secrecy.as_f64();
        t.unjammed_sum += out.unjammed.secrecy.as_f64();
        t.secure_jammed += (out.jammed.secrecy > T::zero()) as u64;

        batch_sum += rate;
        batch_len += 1;
        let measured = slot + 1 - warmup;
        if measured == (batch_idx + 1) * slots / n_batches {
            t.batches.push(batch_sum / batch_len as f64);
            batch_sum = 0.0;
            batch_len = 0;
            batch_idx += 1;
        }
    }
    t
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// 95% Student-t half-width of the mean of `samples`.
pub fn ci_halfwidth(samples: &[f64]) -> f64 {
    let n = samples.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("valid degrees of freedom")
        .inverse_cdf(0.975);
    t * (var / n as f64).sqrt()
}

/// Runs the slot simulation. Results are bit-identical for a fixed
/// `(seed, replicas, n_slots, batches)` regardless of thread count.
pub fn simulate<T: Real>(p: &SystemParams, opts: &SimOptions) -> Result<SimResult>
where
    StandardNormal: Distribution<T>,
{
    p.validate()?;
    if opts.n_slots < 1 {
        return Err(Error::param("n_slots", "need at least one slot"));
    }
    if opts.replicas < 1 {
        return Err(Error::param("replicas", "need at least one replica"));
    }
    let replicas = opts.replicas.min(opts.n_slots);
    let per_replica_batches = opts.batches.div_ceil(replicas).max(1);
    let tallies: Vec<Tally> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let slots = opts.n_slots / replicas + usize::from(r < opts.n_slots % replicas);
            run_replica::<T>(p, opts, r, slots, per_replica_batches)
        })
        .collect();
    let t = tallies.into_iter().reduce(Tally::merge).unwrap();
    let n = t.slots as f64;
    Ok(SimResult {
        mu_a: t.rate / n,
        p_joint_on: t.joint_on as f64 / n,
        p_a_on_j_off: t.a_only as f64 / n,
        p_a_on: t.a_on as f64 / n,
        p_j_on: t.j_on as f64 / n,
        mu_b_a: ratio(t.dep_a, t.a_on),
        mu_b_j: ratio(t.dep_j, t.j_on),
        mean_rate_jammed: t.jammed_sum / n,
        mean_rate_unjammed: t.unjammed_sum / n,
        beta_hat: t.secure_jammed as f64 / n,
        n_slots: t.slots as usize,
        ci_halfwidth: ci_halfwidth(&t.batches),
        batch_means: t.batches,
    })
}

/// Mean and 95% half-width of `a.mu_a - b.mu_a` from paired batch means.
/// Meaningful when both runs share seed and options (common random numbers).
pub fn paired_difference(a: &SimResult, b: &SimResult) -> (f64, f64) {
    assert_eq!(a.batch_means.len(), b.batch_means.len(), "runs are not paired");
    let d: Vec<f64> = a.batch_means.iter().zip(&b.batch_means).map(|(x, y)| x - y).collect();
    (a.mu_a - b.mu_a, ci_halfwidth(&d))
}

/// Full-battery regime averages estimated from i.i.d. channel draws.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeEstimate {
    pub mean_jammed: f64,
    pub mean_unjammed: f64,
    /// Probability that the jammed slot is secure.
    pub beta: f64,
    /// Probability that the unjammed slot is secure (`theta_ab > theta_ae`).
    pub p_secure_unjammed: f64,
    pub se_jammed: f64,
    pub se_unjammed: f64,
    pub se_beta: f64,
    pub n_draws: usize,
}

const DRAW_CHUNK: usize = 4096;

#[derive(Default, Clone, Copy)]
struct Moments {
    jam: f64,
    jam2: f64,
    unj: f64,
    unj2: f64,
    secure: u64,
    secure_unj: u64,
}

/// Monte Carlo estimate of the per-regime mean secrecy rates and of beta,
/// each evaluated at the draw's chosen transmission time.
pub fn estimate_regime_means_and_beta<T: Real>(p: &SystemParams, n_draws: usize) -> Result<RegimeEstimate>
where
    StandardNormal: Distribution<T>,
{
    p.validate()?;
    if n_draws < 1 {
        return Err(Error::param("n_draws", "need at least one draw"));
    }
    let chunks = n_draws.div_ceil(DRAW_CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(p.seed, Purpose::RegimeDraws, c as u64);
            let len = DRAW_CHUNK.min(n_draws - c * DRAW_CHUNK);
            let mut m = Moments::default();
            for _ in 0..len {
                let out = draw_slot::<T, _>(&mut rng, p);
                let (j, u) = (out.jammed.secrecy.as_f64(), out.unjammed.secrecy.as_f64());
                m.jam += j;
                m.jam2 += j * j;
                m.unj += u;
                m.unj2 += u * u;
                m.secure += (j > 0.0) as u64;
                m.secure_unj += (u > 0.0) as u64;
            }
            m
        })
        .collect();
    let m = parts.into_iter().fold(Moments::default(), |a, b| Moments {
        jam: a.jam + b.jam,
        jam2: a.jam2 + b.jam2,
        unj: a.unj + b.unj,
        unj2: a.unj2 + b.unj2,
        secure: a.secure + b.secure,
        secure_unj: a.secure_unj + b.secure_unj,
    });
    let n = n_draws as f64;
    let se = |s: f64, s2: f64| {
        let mean = s / n;
        ((s2 / n - mean * mean).max(0.0) / n).sqrt()
    };
    let beta = m.secure as f64 / n;
    Ok(RegimeEstimate {
        mean_jammed: m.jam / n,
        mean_unjammed: m.unj / n,
        beta,
        p_secure_unjammed: m.secure_unj as f64 / n,
        se_jammed: se(m.jam, m.jam2),
        se_unjammed: se(m.unj, m.unj2),
        se_beta: (beta * (1.0 - beta) / n).sqrt(),
        n_draws,
    })
}

fn saturating_ratio(lambda: f64, beta: f64) -> f64 {
    if beta <= 0.0 {
        1.0
    } else {
        (lambda / beta).min(1.0)
    }
}

/// Average secrecy rate when Alice always has energy and Jimmy's large
/// battery is a Geo/Geo/1 queue served with probability `beta`.
pub fn predict_mu_a_alice_saturated(mean_jammed: f64, mean_unjammed: f64, lambda_j: f64, beta: f64) -> f64 {
    let on = saturating_ratio(lambda_j, beta);
    mean_jammed * on + mean_unjammed * (1.0 - on)
}

/// Average secrecy rate when Jimmy always has energy and Alice's large
/// battery is served with probability `beta`.
pub fn predict_mu_a_jimmy_saturated(mean_jammed: f64, lambda_a: f64, beta: f64) -> f64 {
    saturating_ratio(lambda_a, beta) * mean_jammed
}

/// Average secrecy rate when both batteries behave as unit-service Geo/D/1
/// queues (nonempty with probability equal to their arrival rate).
pub fn predict_mu_a_geo_d1(mean_jammed: f64, mean_unjammed: f64, lambda_a: f64, lambda_j: f64) -> f64 {
    lambda_a * (mean_jammed * lambda_j + mean_unjammed * (1.0 - lambda_j))
}

/// Simulated empty-slot fraction of a unit-service battery with Bernoulli
/// arrivals: every nonempty slot spends one packet.
pub fn geo_d1_empty_fraction(lambda: f64, n_slots: usize, seed: u64) -> f64 {
    let mut rng = substream(seed, Purpose::Generic, 0);
    let mut b = BatteryState::empty(1);
    let mut empty = 0usize;
    for _ in 0..n_slots {
        let on = !b.is_empty();
        empty += usize::from(!on);
        let arrive = rng.random::<f64>() < lambda;
        b = step(b, arrive, on).expect("departure only from nonempty battery");
    }
    empty as f64 / n_slots as f64
}
