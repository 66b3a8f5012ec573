use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fourier_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 verification failure, 2 usage error, 3 budget exceeded.
    pub fn exit_code(&self) -> u8 {
        use fourier_core::Error as E;
        match self {
            CliError::Budget(_) => 3,
            CliError::Core(E::BudgetExceeded { .. } | E::CapExceeded { .. }) => 3,
            CliError::Core(E::Internal(_)) => 1,
            CliError::Core(_) | CliError::Usage(_) | CliError::Io { .. } => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
