use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("symbolic parameter not supported here: {0}")]
    Symbolic(String),
    #[error("label {0} is not in the admissible label set")]
    BadLabel(String),
    #[error("rank too small: {0}")]
    RankTooSmall(String),
    #[error("audit failure: {0}")]
    Audit(String),
    #[error("basis not closed under the requested moves: {0}")]
    NotClosed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
