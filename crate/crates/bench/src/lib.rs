//! Fixed inputs for the benchmarks, so every run measures the same work.

use unidisc_core::random;
use unidisc_core::UnitaryMatrix;

/// Dimensions swept by the spectral benchmarks.
pub const DIMS: [usize; 4] = [2, 8, 16, 64];

const SEED: u64 = 0x5eed;

/// A Haar-random pair in dimension `d`.
pub fn haar_pair(d: usize) -> (UnitaryMatrix, UnitaryMatrix) {
    let mut rng = random::stream(SEED, d as u64);
    (random::haar_unitary(d, &mut rng), random::haar_unitary(d, &mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_reproducible() {
        let (a, _) = haar_pair(4);
        let (b, _) = haar_pair(4);
        assert_eq!(a.matrix().max_abs_diff(b.matrix()), 0.0);
    }
}
