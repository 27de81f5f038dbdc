use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not unitary (max |U†U - I| entry {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not Hermitian (max |H - H†| entry {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("not a density matrix: {0}")]
    InvalidDensity(String),

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("eigensolver failed to converge (residual {residual:.3e})")]
    ConvergenceFailure { residual: f64 },

    #[error("origin lies in the convex hull of the eigenvalues")]
    OriginInHull,

    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(f64),

    #[error("parameter `{name}` out of range: {reason}")]
    ParamOutOfRange { name: &'static str, reason: String },

    #[error("singular value {value} exceeds 1")]
    SingularValueTooLarge { value: f64 },

    #[error("block encoding is not unitary (deviation {deviation:.3e})")]
    NotUnitaryAfterConstruction { deviation: f64 },

    #[error("index {index} out of range for {len} registers")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("state is not an eigenstate (residual {residual:.3e})")]
    NotAnEigenstate { residual: f64 },

    #[error("unitary is not a reflection (max |U² - I| entry {deviation:.3e})")]
    NotAReflection { deviation: f64 },

    #[error("expected a `{expected}` construction, got `{found}`")]
    WrongCase { expected: &'static str, found: String },

    #[error("numerical self-check failed: {0}")]
    SelfCheckFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::ParamOutOfRange {
            name,
            reason: reason.into(),
        }
    }
}
