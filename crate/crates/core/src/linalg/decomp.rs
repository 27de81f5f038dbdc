//! Eigen- and singular-value decompositions, backed by nalgebra's Schur,
//! symmetric-eigen and SVD routines.

use std::f64::consts::TAU;

use nalgebra::linalg::{Schur, SymmetricEigen, SVD};
use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, UnitaryMatrix, C64};
use crate::error::{Error, Result};
use crate::tol;

const MAX_ITERATIONS: usize = 10_000;

/// One eigenvalue `e^{iθ}` of a unitary together with a unit eigenvector.
#[derive(Clone, Debug)]
pub struct EigenPair {
    /// θ in `[0, 2π)`.
    pub phase: f64,
    pub vector: Vec<C64>,
}

/// Maps an angle to `[0, 2π)`, snapping values just below 2π to 0.
pub fn canonical_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(TAU);
    if TAU - t < tol::PHASE_SNAP {
        t = 0.0;
    }
    t
}

fn residual_of(m: &DMatrix<C64>, phase: f64, vector: &[C64]) -> f64 {
    let on_circle = C64::from_polar(1.0, phase);
    let v = DMatrix::from_column_slice(vector.len(), 1, vector);
    (m * &v)
        .iter()
        .zip(vector)
        .map(|(a, b)| (a - on_circle * b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn checked(m: &DMatrix<C64>, mut pairs: Vec<EigenPair>) -> Result<Vec<EigenPair>> {
    let worst = pairs
        .iter()
        .map(|p| residual_of(m, p.phase, &p.vector))
        .fold(0.0, f64::max);
    if worst > tol::DECOMPOSITION {
        return Err(Error::ConvergenceFailure { residual: worst });
    }
    pairs.sort_by(|a, b| a.phase.total_cmp(&b.phase));
    Ok(pairs)
}

fn eig_schur(m: &DMatrix<C64>) -> Result<Vec<EigenPair>> {
    // Converging inputs need a few sweeps per eigenvalue; stalled ones go to the fallback.
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 50 * m.nrows().max(4))
        .ok_or(Error::ConvergenceFailure { residual: f64::INFINITY })?;
    let (q, t) = schur.unpack();
    let pairs = (0..m.nrows())
        .map(|j| {
            let lambda = t[(j, j)];
            EigenPair {
                phase: canonical_phase(lambda.im.atan2(lambda.re)),
                vector: q.column(j).iter().copied().collect(),
            }
        })
        .collect();
    checked(m, pairs)
}

/// Rotation applied before splitting into Hermitian parts, so eigenphases
/// symmetric about the real axis land in different clusters.
const SPLIT_ANGLE: f64 = 0.577_215_664_901_532_9;
const CLUSTER_GAP: f64 = 1e-6;

/// Diagonalizes the commuting Hermitian parts of `e^{-iα}U`: first the
/// cosine part, then the sine part inside each near-degenerate cluster.
fn eig_commuting_parts(m: &DMatrix<C64>) -> Result<Vec<EigenPair>> {
    let d = m.nrows();
    let rotated = m * C64::from_polar(1.0, -SPLIT_ANGLE);
    let half = C64::new(0.5, 0.0);
    let cos_part = (&rotated + rotated.adjoint()) * half;
    let sin_part = (&rotated - rotated.adjoint()) * C64::new(0.0, -0.5);
    let outer = eigh(&ComplexMatrix::from_dmatrix(cos_part))?;
    let v = outer.vectors.as_dmatrix();

    let mut pairs = Vec::with_capacity(d);
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && outer.values[end] - outer.values[end - 1] <= CLUSTER_GAP {
            end += 1;
        }
        let block = v.columns(start, end - start).into_owned();
        let restricted = block.adjoint() * &sin_part * &block;
        let inner = eigh(&ComplexMatrix::from_dmatrix(restricted))?;
        let vectors = &block * inner.vectors.as_dmatrix();
        for j in 0..vectors.ncols() {
            let col: Vec<C64> = vectors.column(j).iter().copied().collect();
            let cv = DMatrix::from_column_slice(d, 1, &col);
            let lambda = (cv.adjoint() * m * &cv)[(0, 0)];
            pairs.push(EigenPair {
                phase: canonical_phase(lambda.im.atan2(lambda.re)),
                vector: col,
            });
        }
        start = end;
    }
    checked(m, pairs)
}

/// Eigendecomposition of a unitary. Pairs are returned in ascending phase order.
///
/// Complex Schur first; if it stalls (large degenerate spectra such as
/// reflections), the matrix is split into commuting Hermitian parts instead.
pub fn eig_unitary(u: &UnitaryMatrix) -> Result<Vec<EigenPair>> {
    let m = u.as_dmatrix();
    eig_schur(m).or_else(|_| eig_commuting_parts(m))
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Real eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered like `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V f(Λ) V†` for a real function of the eigenvalues.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = self.vectors.as_dmatrix();
        let diag: Vec<C64> = self.values.iter().map(|&x| f(x)).collect();
        let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * diag[j]);
        ComplexMatrix::from_dmatrix(scaled * v.adjoint())
    }
}

/// Eigendecomposition of a Hermitian matrix (within 1e-9).
pub fn eigh(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let deviation = h.hermiticity_deviation();
    if deviation > tol::HERMITICITY {
        return Err(Error::NotHermitian { deviation });
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    let m = h.as_dmatrix();
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, MAX_ITERATIONS)
        .ok_or(Error::ConvergenceFailure { residual: f64::INFINITY })?;

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = m.nrows();
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix::from_dmatrix(vectors),
    })
}

/// `M = R Σ V†` with Σ nonincreasing.
#[derive(Clone, Debug)]
pub struct Svd {
    pub r: UnitaryMatrix,
    pub sigma: Vec<f64>,
    pub v: UnitaryMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let sigma = ComplexMatrix::real_diagonal(&self.sigma);
        &(self.r.matrix() * &sigma) * self.v.adjoint().matrix()
    }
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "svd expects a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let dec = SVD::try_new(m.as_dmatrix().clone(), true, true, f64::EPSILON, MAX_ITERATIONS)
        .ok_or(Error::ConvergenceFailure { residual: f64::INFINITY })?;
    let (u, v_t) = match (dec.u, dec.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::ConvergenceFailure { residual: f64::INFINITY }),
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    let sigma: Vec<f64> = order.iter().map(|&k| dec.singular_values[k]).collect();
    let r = DMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    let v = DMatrix::from_fn(n, n, |i, j| v_t[(order[j], i)].conj());

    let as_unitary = |x: DMatrix<C64>| {
        UnitaryMatrix::new(ComplexMatrix::from_dmatrix(x)).map_err(|e| match e {
            Error::NotUnitary { deviation } => Error::ConvergenceFailure { residual: deviation },
            other => other,
        })
    };
    let out = Svd {
        r: as_unitary(r)?,
        sigma,
        v: as_unitary(v)?,
    };
    let residual = super::op_norm(&(&out.reconstruct() - m));
    if residual > tol::DECOMPOSITION {
        return Err(Error::ConvergenceFailure { residual });
    }
    Ok(out)
}

/// Singular values in nonincreasing order (any shape).
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.as_dmatrix().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Sign of the exponent in `e^{∓itH}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    /// `e^{-itH}`, forward time evolution.
    Minus,
    /// `e^{+itH}`.
    Plus,
}

/// `e^{-itH}` (`Sign::Minus`) or `e^{+itH}` (`Sign::Plus`) for Hermitian `H`.
pub fn expm_hermitian(h: &ComplexMatrix, t: f64, sign: Sign) -> Result<UnitaryMatrix> {
    let eig = eigh(h)?;
    let s = match sign {
        Sign::Minus => -1.0,
        Sign::Plus => 1.0,
    };
    Ok(UnitaryMatrix::new_unchecked(
        eig.map_spectrum(|x| C64::from_polar(1.0, s * t * x)),
    ))
}
