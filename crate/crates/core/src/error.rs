use thiserror::Error;

/// Errors reported by word construction, analysis and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation was called outside its domain (for example `alpha <= 2`).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A length or intermediate value does not fit the configured budget or
    /// the integer width used to represent it.
    #[error("size error: {0}")]
    Size(String),

    /// A word or rational could not be parsed.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn size(msg: impl Into<String>) -> Self {
        Error::Size(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
