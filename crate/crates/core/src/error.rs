use thiserror::Error;

/// Errors produced by parsing, encoding and serialization.
///
/// The three variants map onto process exit codes for the CLI: validation
/// failures exit with 1, format and I/O failures with 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed or unrepresentable data: bad magic bytes, truncated record
    /// regions, syntax errors, out-of-domain field values.
    #[error("{0}")]
    Format(String),

    /// A domain invariant was violated: non-monotonic timestamps, coordinates
    /// outside the sensor, invalid configuration.
    #[error("{0}")]
    Validation(String),
}

impl Error {
    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// Exit code the CLI uses for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Format(_) => 2,
            Error::Validation(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
