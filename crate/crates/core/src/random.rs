//! Seedable randomness: ChaCha streams, Haar unitaries and random states.
//!
//! Every stochastic routine takes an explicit seed. Independent sub-streams
//! of one seed are obtained with [`stream`], so parallel or repeated runs stay
//! reproducible regardless of evaluation order.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, UnitaryMatrix, C64};

pub type SimRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Sub-stream `id` of `seed`.
pub fn stream(seed: u64, id: u64) -> SimRng {
    let mut r = SimRng::seed_from_u64(seed);
    r.set_stream(id);
    r
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// `d×d` matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_dmatrix(DMatrix::from_fn(d, d, |_, _| gaussian(rng)))
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
/// `diag(R)` pushed back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> UnitaryMatrix {
    let g = gaussian_matrix(d, rng);
    let qr = g.as_dmatrix().clone().qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::new_unchecked(ComplexMatrix::from_dmatrix(q))
}

/// Uniformly random unit vector in `C^d`.
pub fn state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(d, rng);
    let m = g.as_dmatrix();
    ComplexMatrix::from_dmatrix((m + m.adjoint()) * C64::new(0.5, 0.0))
}

/// Uniform angle in `[0, 2π)`.
pub fn angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.0..std::f64::consts::TAU)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_samples_are_unitary_and_seeded() {
        let a = haar_unitary(6, &mut rng(42));
        let b = haar_unitary(6, &mut rng(42));
        assert!(a.unitarity_deviation() < 1e-12);
        assert_eq!(a, b);
        let c = haar_unitary(6, &mut stream(42, 1));
        assert_ne!(a, c);
    }

    #[test]
    fn random_state_is_normalized() {
        let s = state(7, &mut rng(1));
        let n: f64 = s.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-12);
    }
}
