use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("truncation cap of {cap} total dimension reached with tail mass {tail:.3e}")]
    TruncationCap { cap: usize, tail: f64 },
    #[error("shape mismatch: expected dimension {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("operator is not hermitian (max entry deviation {0:.3e})")]
    NonHermitian(f64),
    #[error("degree {degree} exceeds the supported bound {bound}")]
    Overflow { degree: u64, bound: u64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
