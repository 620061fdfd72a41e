use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A computation would exceed a configured size cap.
    #[error("capacity exceeded: {what} is {value}, cap is {cap}")]
    Capacity {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    /// An internal consistency check failed. Indicates an arithmetic bug.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// Malformed text input (sequence files, cache files, polynomial hex).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}
