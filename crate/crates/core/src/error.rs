use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Lengths, shapes or indices that do not fit the object they address.
    #[error("input shape error: {0}")]
    InputShape(String),
    /// Arguments outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested computation exceeds a simulation guard.
    #[error("capability error: {0}")]
    Capability(String),
    /// Invalid run or protocol configuration.
    #[error("configuration error: {0}")]
    Config(String),
    /// A generator matrix maps a nonzero message to the zero codeword.
    #[error("injectivity violation: message {0} encodes to the zero codeword")]
    NotInjective(String),
    /// An internal consistency check between two computation routes failed.
    #[error("verification failed: {0}")]
    Verification(String),
    /// Serialization or parsing failure.
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}
