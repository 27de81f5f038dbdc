//! Distinguishability of unitary quantum channels from eigenphase geometry.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] dense complex linear algebra for small dimensions (d ≤ 64),
//! * [`discrimination`] spectral arc-length, hull distance, diamond distance
//!   and the query lower bound that follows from them,
//! * [`constructions`] the concrete unitary pairs behind each lower bound,
//! * [`simulator`] statevector simulation of the protocols that realise or
//!   probe those bounds,
//! * [`report`] the machine-readable report shared with the CLI.

pub mod constructions;
pub mod discrimination;
pub mod error;
pub mod linalg;
pub mod random;
pub mod report;
pub mod simulator;
pub mod tol;



pub use constructions::{CaseName, ConstructionCase, Hamiltonian, Prediction, PredictionKind};
pub use discrimination::{EigenphaseSet, SpectralReport};
pub use simulator::{ExperimentResult, Statevector};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, UnitaryMatrix, C64};

