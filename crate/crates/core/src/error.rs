use thiserror::Error;

/// Unified error type for the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    /// Input text/bytes did not match the expected layout.
    #[error("parse error: {0}")]
    Parse(String),

    /// Inputs were well-formed but violate a contract (missing column,
    /// empty corpus, out-of-window event, ...).
    #[error("data error: {0}")]
    Data(String),

    /// HTTP fetch failed; `retryable` distinguishes transient failures
    /// from hard ones such as cache corruption.
    #[error("fetch failed after {attempts} attempt(s): {message}")]
    Fetch {
        attempts: u32,
        message: String,
        retryable: bool,
    },

    #[error("cache corrupted: {0}")]
    Cache(String),

    /// Solver or estimator failed numerically (non-finite inputs,
    /// rank deficiency, non-convergence).
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
