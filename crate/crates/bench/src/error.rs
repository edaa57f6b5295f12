use std::path::PathBuf;

use mmv_core::RecoveryError;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl BenchError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io { path: path.into(), source }
    }

    /// Process exit code: 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Io { .. } | BenchError::Recovery(RecoveryError::Io(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
