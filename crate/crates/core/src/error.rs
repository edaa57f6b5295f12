use thiserror::Error;

#[derive(Debug, Error)]
pub enum RecoveryError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparameters(String),

    #[error("invalid solver config: {0}")]
    InvalidConfig(String),

    #[error("invalid instance specification: {0}")]
    InvalidSpec(String),

    #[error("system matrix is numerically singular (condition estimate {condition:.3e})")]
    SingularSystem { condition: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("non-finite value in iterate {iteration}")]
    NonFinite { iteration: usize },

    #[error("empty outcome set")]
    EmptySet,

    #[error("malformed matrix file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, RecoveryError>;
