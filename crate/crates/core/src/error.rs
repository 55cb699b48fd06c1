use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spin magnitude {0} is not a non-negative half-integer")]
    InvalidSpin(f64),

    #[error("inconsistent quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coupling parameter lambda = {0} outside [0, 2]")]
    LambdaOutOfRange(f64),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("zero vector cannot be turned into a state")]
    ZeroVector,

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("damping matrix is not symmetric (max asymmetry {0:e})")]
    NonSymmetric(f64),

    #[error("damping matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("damping matrix couples axis pair {0} outside the model's axis set")]
    OffAxisCoupling(String),

    #[error("operator is not Hermitian (max |A - A^H| = {0:e})")]
    NotHermitian(f64),

    #[error("model and ensemble description do not match: {0}")]
    ModelMismatch(String),

    #[error("integrator aborted at t = {last_good_time}: {reason}")]
    IntegratorAbort { last_good_time: f64, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
