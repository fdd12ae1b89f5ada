use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("machine fault: {0}")]
    MachineFault(String),
    #[error("insufficient prefix: the branch must be determined through tree level {level}")]
    InsufficientPrefix { level: usize },
    #[error("kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
