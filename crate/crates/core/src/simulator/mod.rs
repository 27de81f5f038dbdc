//! Dense statevector simulation of the discrimination protocols.
//!
//! Probabilities are computed exactly from amplitudes; [`ExperimentResult`]
//! adds seeded Bernoulli sampling on top when finite-shot statistics are
//! wanted.

mod experiment;
mod oracle;
mod protocols;
mod state;
mod sweep;

pub use experiment::ExperimentResult;
pub use oracle::brute_force_distinguishability;
pub use protocols::{
    controlled_power_qpe, copy_from_reflection, eigen_residual, entropy_estimate, hadamard,
    hadamard_basis_advantage, hamsim_discriminator, one_bit_qpe, qpe_advantage_curve,
    qpe_outcome_curve, reflection_state, swap_gate, swap_test, CopyOutcome, EntropyEstimate,
    ENTROPY_CONFIDENCE_DELTA,
};
pub use state::Statevector;
pub use sweep::{heisenberg_sweep, SweepRow, MAX_SCALING_RATIO};
