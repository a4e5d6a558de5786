use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("not a deal: source and target allocations are identical")]
    NotADeal,

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: u32, found: u32 },

    #[error("invalid snake: {0}")]
    InvalidSnake(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("search failed: {0}")]
    SearchFailure(String),

    #[error("node cap of {0} exceeded")]
    CapExceeded(usize),

    #[error("malformed path: {0}")]
    MalformedPath(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
