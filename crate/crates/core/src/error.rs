use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum VqeError {
    #[error("qubit count {found} is below the minimum of {min}")]
    TooFewQubits { found: usize, min: usize },
    #[error("qubit count {found} exceeds the dense-simulation limit of {max}")]
    TooManyQubits { found: usize, max: usize },
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parameter vector has length {found}, circuit expects {expected}")]
    ParameterLength { expected: usize, found: usize },
    #[error("parameter index {index} out of range for {len} parameters")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("training set must contain at least one entry")]
    EmptyTrainingSet,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("objective does not provide gradients")]
    GradientUnavailable,
    #[error("non-finite gradient at iteration {iteration}")]
    Diverged { iteration: usize },
    #[error("matrix invariant violated: {0}")]
    MatrixInvariant(String),
}

pub type Result<T, E = VqeError> = std::result::Result<T, E>;
