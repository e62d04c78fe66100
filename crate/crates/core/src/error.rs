use thiserror::Error;

/// Errors produced by the pebbling toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("graph is not a tree")]
    NotATree,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// The search exceeded its node budget. `lo` is a proven lower bound on the
    /// requested quantity and `hi`, when known, a proven upper bound.
    #[error("resource limit exceeded (bounds: [{lo}, {}])", hi.map(|h| h.to_string()).unwrap_or_else(|| "?".into()))]
    ResourceLimit { lo: u64, hi: Option<u64> },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
