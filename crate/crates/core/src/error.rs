use thiserror::Error;

/// Errors raised by the algebra layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("axiom violation: {0}")]
    Axiom(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by malformed textual or JSON input.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}
