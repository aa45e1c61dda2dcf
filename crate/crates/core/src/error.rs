use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit class
/// through [`Error::kind`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity {0} is out of range (must be >= 1)")]
    ArityOutOfRange(usize),

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("table length mismatch: expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{0}")]
    Domain(String),

    #[error("function is not bent")]
    NotBent,

    #[error("matrix is singular over F_2")]
    SingularMatrix,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("resource cap exceeded: {what} (cap {cap})")]
    Resource { what: String, cap: usize },
}

/// Coarse classification of an [`Error`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Domain,
    Resource,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) | Error::Input(_) => ErrorKind::Usage,
            Error::Resource { .. } => ErrorKind::Resource,
            _ => ErrorKind::Domain,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, cap: usize) -> Self {
        Error::Resource {
            what: what.into(),
            cap,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
