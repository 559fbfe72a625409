use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChessError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid grade pattern: {0}")]
    InvalidGrade(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("incomplete jet: {0}")]
    IncompleteJet(String),
}

pub type Result<T> = std::result::Result<T, ChessError>;
