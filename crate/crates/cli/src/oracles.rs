//! Reference computations that share no code path with the library
//! routines they check.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use secjam::C64;

/// Orthonormal basis of the complement of `span{h}` from the trailing
/// columns of a Householder QR of `[h | e_2 .. e_K]`.
pub fn null_space_basis(h: &[C64]) -> Vec<Vec<C64>> {
    let k = h.len();
    let mut m = DMatrix::<C64>::identity(k, k);
    m.set_column(0, &DVector::from_column_slice(h));
    let q = m.qr().q();
    (1..k).map(|j| q.column(j).iter().copied().collect()).collect()
}

/// Draws random feasible jammer directions `g = sum_i w_i b_i` with
/// Gaussian `w` over a null-space basis and reports their jamming gains.
pub struct CompetitorSampler {
    /// `b_i^* h_je` for each basis vector.
    proj: Vec<C64>,
}

impl CompetitorSampler {
    pub fn new(h_jb: &[C64], h_je: &[C64]) -> Self {
        let proj = null_space_basis(h_jb)
            .iter()
            .map(|b| b.iter().zip(h_je).map(|(x, y)| x.conj() * y).sum())
            .collect();
        Self { proj }
    }

    /// `|g^* h_je|^2 / |g|^2` for one random `g`; the basis is orthonormal
    /// so `|g|^2 = |w|^2`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let mut dot = C64::new(0.0, 0.0);
        let mut w2 = 0.0;
        for c in &self.proj {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            dot += C64::new(re, -im) * c;
            w2 += re * re + im * im;
        }
        dot.norm_sqr() / w2
    }

    pub fn max_of<R: Rng>(&self, rng: &mut R, n: usize) -> f64 {
        (0..n).fold(0.0, |m, _| m.max(self.sample(rng)))
    }
}

/// Stationary law of the battery chain by a dense linear solve of
/// `pi P = pi, sum pi = 1`. `P` is assembled from the slot rule: spend a
/// packet w.p. `mu` when nonempty, then add one w.p. `lambda` up to `cap`.
pub fn battery_linear_solve(lambda: f64, mu: f64, cap: u32) -> Vec<f64> {
    let n = cap as usize + 1;
    let mut p = DMatrix::<f64>::zeros(n, n);
    for from in 0..n {
        let serve = if from > 0 { mu } else { 0.0 };
        for (spent, ps) in [(1, serve), (0, 1.0 - serve)] {
            for (added, pa) in [(1, lambda), (0, 1.0 - lambda)] {
                if ps * pa == 0.0 {
                    continue;
                }
                let to = (from - spent + added).min(n - 1);
                p[(from, to)] += ps * pa;
            }
        }
    }
    let mut a = (p - DMatrix::identity(n, n)).transpose();
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    a.lu().solve(&b).expect("irreducible chain").iter().copied().collect()
}

/// Maximizer of `f` over the grid `i / n`, `i = 1..=n`.
pub fn dense_grid_max(f: impl Fn(f64) -> f64, n: usize) -> (f64, f64) {
    (1..=n)
        .map(|i| {
            let a = i as f64 / n as f64;
            (a, f(a))
        })
        .fold((0.0, f64::NEG_INFINITY), |best, x| if x.1 > best.1 { x } else { best })
}

/// Secrecy rate written out directly from the link capacities.
pub fn secrecy_by_hand(snr_a: f64, snr_j: f64, alpha: f64, theta_ab: f64, theta_ae: f64, jam_gain: f64) -> f64 {
    if alpha <= 0.0 {
        return 0.0;
    }
    let bob = alpha * (1.0 + snr_a * theta_ab / alpha).log2();
    let sinr = (snr_a * theta_ae / alpha) / (1.0 + snr_j * jam_gain / alpha);
    let eve = alpha * (1.0 + sinr).log2();
    (bob - eve).max(0.0)
}
