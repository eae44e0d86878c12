use thiserror::Error;

use crate::funcspace::FuncError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A configured size guard was exceeded; the message names the cost.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error("polytope is unbounded")]
    Unbounded,
    /// Interpolation verification failed, so the sampled function is not a
    /// single polynomial on `[a, b]`.
    #[error("breakpoint inside interval [{a}, {b}]")]
    BreakpointInside { a: String, b: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
