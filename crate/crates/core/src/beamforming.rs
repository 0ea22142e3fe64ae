//! Null-steering jammer beamforming.
//!
//! With Eve's CSI known, Jimmy sends artificial noise along the unit vector
//! that maximizes `|g^* h_je|^2` subject to `g^* h_jb = 0`. The maximizer is
//! the normalized orthogonal projection of `h_je` onto the complement of
//! `span{h_jb}`. Without Eve's CSI, noise is spread over an orthonormal basis
//! of that complement instead.
//!
//! Nothing here depends on Alice's transmission-time fraction.

use crate::error::{Error, Result};
use crate::linalg::{inner, norm, norm_sqr, CMatrix};
use crate::scalar::{Complex, Real};

/// Unit-norm jammer weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamWeights<T> {
    g: Vec<Complex<T>>,
}

impl<T: Real> BeamWeights<T> {
    /// Normalizes `g`; fails on a zero vector.
    pub fn new(g: Vec<Complex<T>>) -> Result<Self> {
        let n = norm(&g);
        if !(n > T::zero() && n.is_finite()) {
            return Err(Error::param("g", "weight vector must have finite nonzero norm"));
        }
        Ok(Self {
            g: g.into_iter().map(|z| z / n).collect(),
        })
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.g
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }
}

/// AN precoder: `K x (K-1)` matrix with orthonormal columns orthogonal to `h_jb`.
#[derive(Debug, Clone, PartialEq)]
pub struct Precoder<T> {
    pub g: CMatrix<T>,
}

impl<T: Real> Precoder<T> {
    /// Artificial-noise vector `G w` for the stream amplitudes `w`.
    pub fn noise(&self, w: &[Complex<T>]) -> Vec<Complex<T>> {
        self.g.mul_vec(w)
    }
}

fn check_nonzero<T: Real>(h_jb: &[Complex<T>]) -> Result<T> {
    let n2 = norm_sqr(h_jb);
    if n2 > T::zero() && n2.is_finite() {
        Ok(n2)
    } else {
        Err(Error::DegenerateChannel)
    }
}

/// `v - h (h^* v) / |h|^2`, i.e. `Psi v` without forming `Psi`.
fn project_out<T: Real>(h: &[Complex<T>], h_norm_sqr: T, v: &[Complex<T>]) -> Vec<Complex<T>> {
    let c = inner(h, v) / h_norm_sqr;
    v.iter().zip(h).map(|(vi, hi)| vi - hi * c).collect()
}

/// `Psi = I - h_jb h_jb^* / |h_jb|^2`.
pub fn projection_matrix<T: Real>(h_jb: &[Complex<T>]) -> Result<CMatrix<T>> {
    let n2 = check_nonzero(h_jb)?;
    let k = h_jb.len();
    let mut psi = CMatrix::identity(k);
    for i in 0..k {
        for j in 0..k {
            psi[(i, j)] -= h_jb[i] * h_jb[j].conj() / n2;
        }
    }
    Ok(psi)
}

/// Optimal null-steering weights `Psi h_je / |Psi h_je|`.
///
/// Returns [`Error::DegenerateAlignment`] when `|Psi h_je| <= 1e-12`
/// (scaled up for single precision), i.e. `h_je` is parallel to `h_jb`.
pub fn optimal_weights<T: Real>(h_jb: &[Complex<T>], h_je: &[Complex<T>]) -> Result<BeamWeights<T>> {
    assert_eq!(h_jb.len(), h_je.len(), "channel vectors differ in length");
    let n2 = check_nonzero(h_jb)?;
    let p = project_out(h_jb, n2, h_je);
    let tol = T::of(1e-12).max(T::epsilon() * T::of(16.0) * norm(h_je));
    if norm(&p) <= tol {
        return Err(Error::DegenerateAlignment);
    }
    // A second pass removes the rounding residue along h_jb.
    let p = project_out(h_jb, n2, &p);
    BeamWeights::new(p)
}

/// Jamming gain `|g^* h_je|^2`.
pub fn jamming_gain<T: Real>(g: &BeamWeights<T>, h_je: &[Complex<T>]) -> T {
    inner(g.as_slice(), h_je).norm_sqr()
}

/// Jamming gain achieved by the optimal weights, with the degenerate
/// alignment case mapped to zero.
pub fn optimal_jamming_gain<T: Real>(h_jb: &[Complex<T>], h_je: &[Complex<T>]) -> Result<T> {
    match optimal_weights(h_jb, h_je) {
        Ok(g) => Ok(jamming_gain(&g, h_je)),
        Err(Error::DegenerateAlignment) => Ok(T::zero()),
        Err(e) => Err(e),
    }
}

/// Orthonormal basis of the orthogonal complement of `span{h_jb}`.
///
/// Modified Gram-Schmidt with one re-orthogonalization pass, seeded by the
/// unit vectors minus the one most aligned with `h_jb`.
pub fn null_space_precoder<T: Real>(h_jb: &[Complex<T>]) -> Result<Precoder<T>> {
    let k = h_jb.len();
    if k < 2 {
        return Err(Error::param("h_jb", "need at least two antennas"));
    }
    let n2 = check_nonzero(h_jb)?;
    let q0: Vec<Complex<T>> = h_jb.iter().map(|z| z / n2.sqrt()).collect();
    let skip = (0..k)
        .max_by(|&a, &b| h_jb[a].norm_sqr().partial_cmp(&h_jb[b].norm_sqr()).unwrap())
        .unwrap();

    let zero = Complex::new(T::zero(), T::zero());
    let mut basis: Vec<Vec<Complex<T>>> = vec![q0];
    for i in (0..k).filter(|&i| i != skip) {
        let mut v = vec![zero; k];
        v[i] = Complex::new(T::one(), T::zero());
        for _ in 0..2 {
            for q in &basis {
                let c = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= qi * c;
                }
            }
        }
        let n = norm(&v);
        basis.push(v.into_iter().map(|z| z / n).collect());
    }
    basis.remove(0);
    Ok(Precoder {
        g: CMatrix::from_columns(&basis),
    })
}
