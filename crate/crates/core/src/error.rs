use thiserror::Error;

/// Errors raised by input parsing and precondition checks.
///
/// Search exhaustion is not an error; see [`crate::search::SearchFailure`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse rational `{0}`")]
    ParseRational(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
