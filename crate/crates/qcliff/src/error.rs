use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("element does not lie in the requested span: {0}")]
    NotInSpan(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("operator does not act as a scalar: {0}")]
    NonScalarAction(String),
    #[error("not a simultaneous eigenvector: {0}")]
    NotEigenvector(String),
    #[error("not a spin element: {0}")]
    NotSpin(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
