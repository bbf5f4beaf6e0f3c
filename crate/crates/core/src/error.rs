use thiserror::Error;

/// Errors raised by the library.
///
/// `InvalidInput` covers violated preconditions; `Inconsistency` is reserved
/// for states that valid input can never reach (a failed exact square root in
/// a decomposition, a recovered triple that does not round-trip, ...).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
