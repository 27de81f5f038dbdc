//! Dense complex linear algebra for small dimensions.

mod decomp;
mod io;
mod matrix;

use nalgebra::DMatrix;

pub use decomp::{
    canonical_phase, eig_unitary, eigh, expm_hermitian, singular_values, svd, EigenPair,
    HermitianEigen, Sign, Svd,
};
pub use io::MatrixFile;
pub use matrix::{ComplexMatrix, DensityMatrix, UnitaryMatrix, C64};

use crate::error::{Error, Result};

/// Conjugate transpose.
pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_dmatrix(m.as_dmatrix().adjoint())
}

/// Kronecker product `A ⊗ B`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_dmatrix(a.as_dmatrix().kronecker(b.as_dmatrix()))
}

/// Kronecker product of two unitaries.
pub fn tensor_unitary(a: &UnitaryMatrix, b: &UnitaryMatrix) -> UnitaryMatrix {
    UnitaryMatrix::new_unchecked(tensor(a, b))
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U`.
pub fn controlled(u: &UnitaryMatrix) -> UnitaryMatrix {
    let d = u.dim();
    let m = u.as_dmatrix();
    let out = DMatrix::from_fn(2 * d, 2 * d, |i, j| match (i < d, j < d) {
        (true, true) if i == j => C64::new(1.0, 0.0),
        (false, false) => m[(i - d, j - d)],
        _ => C64::new(0.0, 0.0),
    });
    UnitaryMatrix::new_unchecked(ComplexMatrix::from_dmatrix(out))
}

/// Largest singular value.
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Which tensor factor a partial trace keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Reduced density matrix on one factor of `C^{d_A} ⊗ C^{d_B}`.
pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: Keep) -> Result<DensityMatrix> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}-dim state cannot split as {da}x{db}",
            rho.dim()
        )));
    }
    let m = rho.as_dmatrix();
    let out = match keep {
        Keep::A => DMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Keep::B => DMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        }),
    };
    Ok(DensityMatrix::new_unchecked(ComplexMatrix::from_dmatrix(out)))
}

/// Rényi-2 entropy `-ln tr[ρ²]`.
pub fn renyi2_entropy(rho: &DensityMatrix) -> f64 {
    (-rho.purity().ln()).max(0.0)
}
