use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;
use secjam::beamforming::{jamming_gain, null_space_precoder, optimal_weights, projection_matrix};
use secjam::linalg::{inner, norm_sqr};
use secjam::rng::{substream, Purpose};
use secjam::ChannelSet64;

fn cn<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Projector onto the complement of span{h}, built from the trailing
/// columns of a Householder QR of [h | e_2 .. e_K].
fn qr_complement_projector(h: &[Complex64]) -> DMatrix<Complex64> {
    let k = h.len();
    let mut m = DMatrix::<Complex64>::identity(k, k);
    m.set_column(0, &DVector::from_column_slice(h));
    let q = m.qr().q();
    let mut p = DMatrix::<Complex64>::zeros(k, k);
    for j in 1..k {
        let c = q.column(j);
        p += &c * c.adjoint();
    }
    p
}

/// Non-orthogonal spanning set of the null space: u_i has
/// u_i[0] = -conj(h_i), u_i[i] = conj(h_0).
fn sampled_feasible_gain<R: Rng>(rng: &mut R, hb: &[Complex64], he: &[Complex64]) -> f64 {
    let k = hb.len();
    let mut v = vec![Complex64::new(0.0, 0.0); k];
    for i in 1..k {
        let w = cn(rng);
        v[0] += -hb[i].conj() * w;
        v[i] += hb[0].conj() * w;
    }
    let n2 = norm_sqr(&v);
    inner(&v, he).norm_sqr() / n2
}

#[test]
fn projector_matches_qr_oracle() {
    let mut rng = substream(2024, Purpose::Generic, 0);
    for _ in 0..20 {
        let ch = ChannelSet64::sample(&mut rng, 3);
        let psi = projection_matrix(&ch.h_jb).unwrap();
        let oracle = qr_complement_projector(&ch.h_jb);
        for i in 0..3 {
            for j in 0..3 {
                assert!((psi[(i, j)] - oracle[(i, j)]).norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn optimal_weights_beat_sampled_null_space_vectors() {
    let mut rng = substream(77, Purpose::Generic, 0);
    let ch = ChannelSet64::sample(&mut rng, 4);
    let g = optimal_weights(&ch.h_jb, &ch.h_je).unwrap();
    let best = jamming_gain(&g, &ch.h_je);
    let mut sample_rng = substream(77, Purpose::Generic, 1);
    let mut max_seen: f64 = 0.0;
    for _ in 0..1_000_000 {
        max_seen = max_seen.max(sampled_feasible_gain(&mut sample_rng, &ch.h_jb, &ch.h_je));
    }
    assert!(best >= max_seen, "{best} < {max_seen}");
    // The sampler gets close, so the comparison is not vacuous.
    assert!(max_seen > 0.99 * best);
}

#[test]
fn optimality_over_many_instances() {
    let mut rng = substream(5, Purpose::Generic, 0);
    for k in 2..=6 {
        for _ in 0..100 {
            let ch = ChannelSet64::sample(&mut rng, k);
            let g = optimal_weights(&ch.h_jb, &ch.h_je).unwrap();
            let best = jamming_gain(&g, &ch.h_je);
            assert!(inner(g.as_slice(), &ch.h_jb).norm() <= 1e-10);
            for _ in 0..2_000 {
                assert!(best >= sampled_feasible_gain(&mut rng, &ch.h_jb, &ch.h_je) - 1e-12);
            }
        }
    }
}

#[test]
fn precoder_gram_matrix_is_identity() {
    let mut rng = substream(9, Purpose::Generic, 0);
    for _ in 0..20 {
        let ch = ChannelSet64::sample(&mut rng, 5);
        let p = null_space_precoder(&ch.h_jb).unwrap();
        let cols: Vec<_> = (0..4).map(|j| p.g.column(j)).collect();
        for a in 0..4 {
            for b in 0..4 {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((inner(&cols[a], &cols[b]) - Complex64::new(want, 0.0)).norm() <= 1e-12);
            }
            assert!(inner(&ch.h_jb, &cols[a]).norm() <= 1e-10);
        }
    }
}

proptest! {
    #[test]
    fn jamming_gain_is_phase_invariant(seed in 0u64..10_000, k in 2usize..=6, phi in -3.2f64..3.2) {
        let ch = ChannelSet64::sample(&mut substream(seed, Purpose::Generic, 0), k);
        let rotated: Vec<_> = ch.h_je.iter().map(|z| z * Complex64::from_polar(1.0, phi)).collect();
        let a = jamming_gain(&optimal_weights(&ch.h_jb, &ch.h_je).unwrap(), &ch.h_je);
        let b = jamming_gain(&optimal_weights(&ch.h_jb, &rotated).unwrap(), &rotated);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }
}
