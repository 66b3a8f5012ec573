use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("conductor {from} does not divide {to}")]
    ConductorMismatch { from: u64, to: u64 },
    #[error("zero has no multiplicative order")]
    ZeroOrder,
    #[error("cannot embed into a common field: {0}")]
    NoCommonField(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid integral Fourier matrix: {0}")]
    InvalidFourier(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded after {nodes} search nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("order cap of {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
