use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{UnitaryMatrix, C64};
use crate::tol;

/// Pure state on a tensor product of registers, first register most
/// significant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Statevector {
    dims: Vec<usize>,
    #[serde(serialize_with = "serialize_amplitudes")]
    amps: Vec<C64>,
}

fn serialize_amplitudes<S: serde::Serializer>(amps: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(amps.iter().map(|z| [z.re, z.im]))
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!("invalid register dims {dims:?}")));
    }
    Ok(dims.iter().product())
}

impl Statevector {
    pub fn new(dims: &[usize], amps: Vec<C64>) -> Result<Self> {
        let dim = check_dims(dims)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for registers {dims:?}",
                amps.len()
            )));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensity("non-finite amplitude".into()));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { dims: dims.to_vec(), amps })
    }

    /// Single-register state.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let d = amps.len();
        Self::new(&[d], amps)
    }

    /// `|0…0⟩`.
    pub fn zero(dims: &[usize]) -> Result<Self> {
        Self::basis(dims, 0)
    }

    pub fn basis(dims: &[usize], index: usize) -> Result<Self> {
        let dim = check_dims(dims)?;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { dims: dims.to_vec(), amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim(), other.dim())));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self ⊗ other`, registers concatenated.
    pub fn tensor(&self, other: &Statevector) -> Statevector {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        Statevector { dims, amps }
    }

    fn stride_after(&self, register: usize) -> usize {
        self.dims[register + 1..].iter().product()
    }

    fn digit(&self, index: usize, register: usize) -> usize {
        (index / self.stride_after(register)) % self.dims[register]
    }

    /// Applies `u` to the contiguous registers in `targets`.
    pub fn apply(&self, u: &UnitaryMatrix, targets: Range<usize>) -> Result<Self> {
        self.apply_inner(u, targets, None)
    }

    /// Applies `u` to `targets` on the branch where register `control` is 1.
    pub fn apply_controlled(&self, control: usize, u: &UnitaryMatrix, targets: Range<usize>) -> Result<Self> {
        if control >= self.dims.len() {
            return Err(Error::IndexOutOfRange { index: control, len: self.dims.len() });
        }
        if targets.contains(&control) {
            return Err(Error::DimensionMismatch("control register overlaps targets".into()));
        }
        self.apply_inner(u, targets, Some(control))
    }

    fn apply_inner(&self, u: &UnitaryMatrix, targets: Range<usize>, control: Option<usize>) -> Result<Self> {
        if targets.is_empty() || targets.end > self.dims.len() {
            return Err(Error::IndexOutOfRange {
                index: targets.end,
                len: self.dims.len(),
            });
        }
        let block: usize = self.dims[targets.clone()].iter().product();
        if block != u.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}-dim unitary on {block}-dim registers",
                u.dim()
            )));
        }
        let inner = self.stride_after(targets.end - 1);
        let outer = self.dim() / (block * inner);
        let m = u.as_dmatrix();
        let mut out = self.amps.clone();
        let mut v = vec![C64::new(0.0, 0.0); block];
        for hi in 0..outer {
            for lo in 0..inner {
                let base = hi * block * inner + lo;
                if control.is_some_and(|c| self.digit(base, c) != 1) {
                    continue;
                }
                for (k, slot) in v.iter_mut().enumerate() {
                    *slot = self.amps[base + k * inner];
                }
                for r in 0..block {
                    out[base + r * inner] = (0..block).map(|k| m[(r, k)] * v[k]).sum();
                }
            }
        }
        Ok(Self { dims: self.dims.clone(), amps: out })
    }

    /// Born probability of reading `outcome` on `register`.
    pub fn measure_prob(&self, register: usize, outcome: usize) -> Result<f64> {
        if register >= self.dims.len() {
            return Err(Error::IndexOutOfRange { index: register, len: self.dims.len() });
        }
        if outcome >= self.dims[register] {
            return Err(Error::IndexOutOfRange { index: outcome, len: self.dims[register] });
        }
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| self.digit(*i, register) == outcome)
            .map(|(_, z)| z.norm_sqr())
            .sum())
    }

    /// Normalized post-measurement state on the remaining registers, or
    /// `None` when the outcome has probability zero.
    pub fn postselect(&self, register: usize, outcome: usize) -> Result<Option<Statevector>> {
        let p = self.measure_prob(register, outcome)?;
        if self.dims.len() == 1 {
            return Err(Error::DimensionMismatch("cannot discard the only register".into()));
        }
        if p <= f64::EPSILON {
            return Ok(None);
        }
        let scale = 1.0 / p.sqrt();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| self.digit(*i, register) == outcome)
            .map(|(_, z)| z * scale)
            .collect();
        let mut dims = self.dims.clone();
        dims.remove(register);
        Ok(Some(Statevector { dims, amps }))
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::random;

    fn pauli_x() -> UnitaryMatrix {
        UnitaryMatrix::new(ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()).unwrap()
    }

    #[test]
    fn apply_examples() {
        let zero = Statevector::zero(&[2]).unwrap();
        assert_eq!(zero.apply(&UnitaryMatrix::identity(2), 0..1).unwrap(), zero);
        let one = zero.apply(&pauli_x(), 0..1).unwrap();
        assert_eq!(one, Statevector::basis(&[2], 1).unwrap());

        let mut rng = random::rng(3);
        let psi = Statevector::from_amplitudes(random::state(6, &mut rng)).unwrap();
        let u = random::haar_unitary(3, &mut rng);
        let split = Statevector::new(&[2, 3], psi.amplitudes().to_vec()).unwrap();
        let back = split.apply(&u, 1..2).unwrap().apply(&u.adjoint(), 1..2).unwrap();
        for (a, b) in back.amplitudes().iter().zip(split.amplitudes()) {
            assert!((a - b).norm() < 1e-9);
        }
        assert!((split.apply(&u, 1..2).unwrap().norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn apply_matches_kronecker() {
        let mut rng = random::rng(5);
        let psi = Statevector::new(&[2, 3, 2], random::state(12, &mut rng)).unwrap();
        let u = random::haar_unitary(3, &mut rng);
        let full = crate::linalg::tensor(
            &crate::linalg::tensor(&ComplexMatrix::identity(2), &u),
            &ComplexMatrix::identity(2),
        );
        let want = full.apply(psi.amplitudes());
        let got = psi.apply(&u, 1..2).unwrap();
        for (a, b) in got.amplitudes().iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn controlled_matches_block_form() {
        let mut rng = random::rng(6);
        let psi = Statevector::new(&[2, 3], random::state(6, &mut rng)).unwrap();
        let u = random::haar_unitary(3, &mut rng);
        let want = crate::linalg::controlled(&u).apply(psi.amplitudes());
        let got = psi.apply_controlled(0, &u, 1..2).unwrap();
        for (a, b) in got.amplitudes().iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn measure_examples() {
        let zero = Statevector::zero(&[2]).unwrap();
        assert_eq!(zero.measure_prob(0, 0).unwrap(), 1.0);
        let plus = Statevector::from_amplitudes(vec![C64::new(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        assert!((plus.measure_prob(0, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(zero.measure_prob(1, 0), Err(Error::IndexOutOfRange { .. })));

        let mut rng = random::rng(8);
        let psi = Statevector::new(&[2, 2, 2], random::state(8, &mut rng)).unwrap();
        for r in 0..3 {
            let total = psi.measure_prob(r, 0).unwrap() + psi.measure_prob(r, 1).unwrap();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Statevector::from_amplitudes(vec![C64::new(1.0, 0.0); 2]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(Statevector::new(&[2, 2], vec![C64::new(1.0, 0.0)]).is_err());
        let s = Statevector::zero(&[2, 2]).unwrap();
        assert!(matches!(s.apply(&UnitaryMatrix::identity(3), 0..1), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn postselect_drops_register() {
        let bell = Statevector::new(
            &[2, 2],
            vec![
                C64::new(FRAC_1_SQRT_2, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(FRAC_1_SQRT_2, 0.0),
            ],
        )
        .unwrap();
        let rest = bell.postselect(0, 1).unwrap().unwrap();
        assert_eq!(rest, Statevector::basis(&[2], 1).unwrap());
        let zero = Statevector::zero(&[2, 2]).unwrap();
        assert!(zero.postselect(0, 1).unwrap().is_none());
    }
}
