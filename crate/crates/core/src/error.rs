use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PotError {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),
    /// An operation was called outside its precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A size guard refused the request.
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("deadline exceeded")]
    Timeout,
}

pub type Result<T> = std::result::Result<T, PotError>;
