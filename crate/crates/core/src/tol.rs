//! Numerical tolerances shared across the crate.

/// Max-entry deviation of `U†U` from the identity accepted as unitary.
pub const UNITARITY: f64 = 1e-9;

/// Max-entry deviation of `H - H†` accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-9;

/// Trace and eigenvalue slack for density matrices.
pub const DENSITY: f64 = 1e-9;

/// Residual bound for eigenvectors and SVD reconstruction.
pub const DECOMPOSITION: f64 = 1e-8;

/// Phases within this distance of 2π are snapped to 0.
pub const PHASE_SNAP: f64 = 1e-12;

/// Arc-lengths within this distance below π count as containing the origin.
pub const HULL_BOUNDARY: f64 = 1e-10;

/// Agreement required between the analytic and searched phase-minimised norm.
pub const MIN_PHASE_AGREEMENT: f64 = 1e-8;

/// Norm slack for statevectors.
pub const STATE_NORM: f64 = 1e-9;
