//! Flat-fading channel realizations and the scenario parameters.
//!
//! All coefficients are circularly-symmetric complex Gaussian with unit
//! total variance (1/2 per component), so every channel gain `|h|^2` is
//! Exponential(1). Channels are i.i.d. across slots.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

/// Channel gain `|h|^2`.
#[inline]
pub fn gain<T: Real>(h: Complex<T>) -> T {
    h.norm_sqr()
}

/// One slot's channel realization, restricted to the `K` active jammer antennas.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet<T> {
    /// Alice -> Bob.
    pub h_ab: Complex<T>,
    /// Alice -> Eve.
    pub h_ae: Complex<T>,
    /// Jimmy antennas 1..K -> Bob.
    pub h_jb: Vec<Complex<T>>,
    /// Jimmy antennas 1..K -> Eve.
    pub h_je: Vec<Complex<T>>,
}

fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T>
where
    StandardNormal: Distribution<T>,
{
    let scale = T::FRAC_1_SQRT_2();
    let re: T = StandardNormal.sample(rng);
    let im: T = StandardNormal.sample(rng);
    Complex::new(re * scale, im * scale)
}

impl<T: Real> ChannelSet<T> {
    pub fn new(
        h_ab: Complex<T>,
        h_ae: Complex<T>,
        h_jb: Vec<Complex<T>>,
        h_je: Vec<Complex<T>>,
    ) -> Result<Self> {
        if h_jb.len() != h_je.len() || h_jb.len() < 2 {
            return Err(Error::ChannelShape {
                jb: h_jb.len(),
                je: h_je.len(),
            });
        }
        let finite = |z: &Complex<T>| z.re.is_finite() && z.im.is_finite();
        if ![h_ab, h_ae].iter().chain(&h_jb).chain(&h_je).all(finite) {
            return Err(Error::NonFiniteChannel);
        }
        Ok(Self {
            h_ab,
            h_ae,
            h_jb,
            h_je,
        })
    }

    /// Draws a fresh realization for `k` jammer antennas.
    ///
    /// Draw order is fixed (`h_ab`, `h_ae`, `h_jb[..]`, `h_je[..]`), so the
    /// stream is a pure function of the generator state.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Self
    where
        StandardNormal: Distribution<T>,
    {
        assert!(k >= 2, "at least two jammer antennas are required");
        let h_ab = complex_normal(rng);
        let h_ae = complex_normal(rng);
        let h_jb = (0..k).map(|_| complex_normal(rng)).collect();
        let h_je = (0..k).map(|_| complex_normal(rng)).collect();
        Self {
            h_ab,
            h_ae,
            h_jb,
            h_je,
        }
    }

    /// Keeps only antennas `1..=k`.
    pub fn restrict(mut self, k: usize) -> Self {
        assert!(
            (2..=self.k()).contains(&k),
            "cannot restrict {} antennas to {k}",
            self.k()
        );
        self.h_jb.truncate(k);
        self.h_je.truncate(k);
        self
    }

    pub fn k(&self) -> usize {
        self.h_jb.len()
    }

    pub fn theta_ab(&self) -> T {
        gain(self.h_ab)
    }

    pub fn theta_ae(&self) -> T {
        gain(self.h_ae)
    }
}

/// Free-function form of [`ChannelSet::sample`].
pub fn sample_channels<T: Real, R: Rng + ?Sized>(rng: &mut R, k_active: usize) -> ChannelSet<T>
where
    StandardNormal: Distribution<T>,
{
    ChannelSet::sample(rng, k_active)
}

/// Converts decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Scenario constants. Noise power is normalized to one, so `snr_a` and
/// `snr_j` are the per-slot transmit SNRs of one energy packet.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub n_antennas: usize,
    pub k_active: usize,
    pub snr_a: f64,
    pub snr_j: f64,
    pub lambda_a: f64,
    pub lambda_j: f64,
    pub cap_a: u32,
    pub cap_j: u32,
    /// When set, Alice always transmits for this fraction of the slot.
    pub alpha_fixed: Option<f64>,
    /// Number of coarse grid points in the transmission-time search.
    pub alpha_grid: usize,
    pub seed: u64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            n_antennas: 6,
            k_active: 6,
            snr_a: 100.0,
            snr_j: 100.0,
            lambda_a: 1.0,
            lambda_j: 1.0,
            cap_a: 10,
            cap_j: 10,
            alpha_fixed: None,
            alpha_grid: 50,
            seed: 1,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let prob = |name, x: f64| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(Error::param(name, format!("{x} is not a probability")))
            }
        };
        prob("lambda_a", self.lambda_a)?;
        prob("lambda_j", self.lambda_j)?;
        if self.k_active < 2 {
            return Err(Error::param(
                "k_active",
                "null steering needs at least two active antennas",
            ));
        }
        if self.k_active > self.n_antennas {
            return Err(Error::param(
                "k_active",
                format!("{} exceeds n_antennas = {}", self.k_active, self.n_antennas),
            ));
        }
        for (name, snr) in [("snr_a", self.snr_a), ("snr_j", self.snr_j)] {
            if !(snr > 0.0 && snr.is_finite()) {
                return Err(Error::param(name, format!("{snr} must be positive and finite")));
            }
        }
        if self.cap_a < 1 {
            return Err(Error::param("cap_a", "capacity must be at least 1"));
        }
        if self.cap_j < 1 {
            return Err(Error::param("cap_j", "capacity must be at least 1"));
        }
        if let Some(a) = self.alpha_fixed {
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::param("alpha_fixed", format!("{a} is outside (0, 1]")));
            }
        }
        if self.alpha_grid < 2 {
            return Err(Error::param("alpha_grid", "need at least two grid points"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Purpose};

    #[test]
    fn gain_examples() {
        assert_eq!(gain(Complex::new(3.0, 4.0)), 25.0);
        assert_eq!(gain(Complex::new(0.0f64, 0.0)), 0.0);
        for phi in [0.0, 0.3, 1.7, -2.9, 3.14159] {
            let h = Complex::from_polar(1.0f64, phi);
            assert!((gain(h) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn same_seed_same_channels() {
        let a: ChannelSet<f64> = sample_channels(&mut substream(42, Purpose::Generic, 0), 4);
        let b: ChannelSet<f64> = sample_channels(&mut substream(42, Purpose::Generic, 0), 4);
        assert_eq!(a, b);
        assert_eq!(a.k(), 4);
    }

    #[test]
    fn first_moments_match_unit_complex_gaussian() {
        let mut rng = substream(7, Purpose::Generic, 0);
        let n = 100_000;
        let (mut g, mut re, mut im) = (0.0, 0.0, 0.0);
        for _ in 0..n {
            let ch: ChannelSet<f64> = ChannelSet::sample(&mut rng, 2);
            g += ch.theta_ab();
            re += ch.h_ab.re;
            im += ch.h_ab.im;
        }
        let n = n as f64;
        assert!((g / n - 1.0).abs() < 0.02, "mean gain {}", g / n);
        assert!((re / n).abs() < 0.02);
        assert!((im / n).abs() < 0.02);
    }

    #[test]
    fn restrict_keeps_leading_antennas() {
        let ch: ChannelSet<f64> = ChannelSet::sample(&mut substream(1, Purpose::Generic, 0), 6);
        let small = ch.clone().restrict(4);
        assert_eq!(small.h_jb[..], ch.h_jb[..4]);
        assert_eq!(small.h_je[..], ch.h_je[..4]);
        assert_eq!(small.h_ab, ch.h_ab);
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        let z = Complex::new(1.0, 0.0);
        assert!(matches!(
            ChannelSet::new(z, z, vec![z], vec![z]),
            Err(Error::ChannelShape { .. })
        ));
        assert!(matches!(
            ChannelSet::new(z, z, vec![z, z], vec![z, Complex::new(f64::NAN, 0.0)]),
            Err(Error::NonFiniteChannel)
        ));
        assert!(ChannelSet::new(z, z, vec![z, z], vec![z, z]).is_ok());
    }

    #[test]
    fn params_validation() {
        assert!(SystemParams::default().validate().is_ok());
        let bad = [
            SystemParams { k_active: 1, ..Default::default() },
            SystemParams { k_active: 7, ..Default::default() },
            SystemParams { lambda_a: 1.2, ..Default::default() },
            SystemParams { lambda_j: -0.1, ..Default::default() },
            SystemParams { snr_j: 0.0, ..Default::default() },
            SystemParams { cap_a: 0, ..Default::default() },
            SystemParams { alpha_fixed: Some(0.0), ..Default::default() },
            SystemParams { alpha_grid: 1, ..Default::default() },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    #[test]
    fn db_conversion() {
        assert!((db_to_linear(20.0) - 100.0).abs() < 1e-12);
        assert!((db_to_linear(0.0) - 1.0).abs() < 1e-15);
    }
}
