use std::ops::{Add, Deref, Mul, Sub};

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex<f64>;

/// Dense complex matrix. Every entry is finite.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix shape {rows}x{cols} must be positive"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(k) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self {
            data: DMatrix::from_row_slice(rows, cols, &entries),
        })
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    /// Real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            data: DMatrix::zeros(rows, cols),
        }
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self {
            data: DMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) }),
        }
    }

    pub fn real_diagonal(diag: &[f64]) -> Self {
        Self::diagonal(&diag.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self {
            data: DMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj()),
        }
    }

    pub(crate) fn from_dmatrix(data: DMatrix<C64>) -> Self {
        debug_assert!(data.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self { data }
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[(row, col)]
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        self.data.transpose().iter().copied().collect()
    }

    pub fn trace(&self) -> C64 {
        self.data.diagonal().iter().sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::from_dmatrix(&self.data * factor)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols(), v.len(), "matrix-vector dimension mismatch");
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.data[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entry-wise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.data.shape() != other.data.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry-wise modulus of `self - self†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&Self::from_dmatrix(self.data.adjoint()))
    }

    /// Largest entry-wise modulus of `self†·self - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = Self::from_dmatrix(self.data.adjoint() * &self.data);
        gram.max_abs_diff(&Self::identity(self.rows()))
    }

    fn check_same_shape(&self, other: &Self, op: &str) {
        assert_eq!(
            self.data.shape(),
            other.data.shape(),
            "shape mismatch in matrix {op}"
        );
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols(), rhs.rows(), "shape mismatch in matrix product");
        ComplexMatrix::from_dmatrix(&self.data * &rhs.data)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_shape(rhs, "sum");
        ComplexMatrix::from_dmatrix(&self.data + &rhs.data)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_shape(rhs, "difference");
        ComplexMatrix::from_dmatrix(&self.data - &rhs.data)
    }
}

/// Square matrix with `max |U†U - I| ≤ 1e-9`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    matrix: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.unitarity_deviation();
        if deviation > tol::UNITARITY {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix known to be unitary up to rounding (products of
    /// unitaries, closed-form constructions).
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.unitarity_deviation() < 1e-7);
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    /// `diag(e^{iθ₀}, e^{iθ₁}, …)`.
    pub fn from_phases(phases: &[f64]) -> Self {
        let diag: Vec<C64> = phases.iter().map(|&t| C64::from_polar(1.0, t)).collect();
        Self {
            matrix: ComplexMatrix::diagonal(&diag),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: super::dagger(&self.matrix),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &UnitaryMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}-dim and {}-dim unitaries",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Self::new_unchecked(&self.matrix * &other.matrix))
    }

    /// `e^{iθ} · self`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        Self {
            matrix: self.matrix.scale(C64::from_polar(1.0, theta)),
        }
    }

    /// `self^k` for `k ≥ 0`.
    pub fn power(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..k {
            out = Self::new_unchecked(&out.matrix * &self.matrix);
        }
        out
    }
}

impl Deref for UnitaryMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix (all within 1e-9).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("density matrix must be square".into()));
        }
        let herm = matrix.hermiticity_deviation();
        if herm > tol::DENSITY {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol::DENSITY || tr.im.abs() > tol::DENSITY {
            return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
        }
        let min_eig = super::eigh(&matrix)?
            .values
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -tol::DENSITY {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// `|ψ⟩⟨ψ|` for a unit vector `ψ`.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            matrix: ComplexMatrix::outer(psi, psi),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        self.matrix.as_dmatrix().iter().map(|z| z.norm_sqr()).sum()
    }
}

impl Deref for DensityMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_entry_count() {
        let err = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = ComplexMatrix::from_real(2, 2, &[1.0, f64::NAN, 0.0, 1.0]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
    }

    #[test]
    fn row_major_round_trip() {
        let m = ComplexMatrix::from_real(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(m.get(1, 0), C64::new(4.0, 0.0));
        assert_eq!(
            m.to_row_major(),
            [1.0, 2.0, 3.0, 4.0, 5.0, 6.0].map(|x| C64::new(x, 0.0))
        );
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        let m = ComplexMatrix::real_diagonal(&[1.0, 0.5]);
        assert!(matches!(UnitaryMatrix::new(m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn density_checks() {
        assert!(DensityMatrix::new(ComplexMatrix::real_diagonal(&[0.5, 0.5])).is_ok());
        assert!(DensityMatrix::new(ComplexMatrix::real_diagonal(&[0.7, 0.5])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::real_diagonal(&[1.5, -0.5])).is_err());
        let purity = DensityMatrix::maximally_mixed(2).purity();
        assert!((purity - 0.5).abs() < 1e-15);
    }
}
