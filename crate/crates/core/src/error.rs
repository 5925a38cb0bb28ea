use thiserror::Error;

/// Errors raised by the solver, simulator and asymptotic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request is too large for an exhaustive computation.
    #[error("size error: n = {n} exceeds the enumeration limit {max}")]
    Size { n: usize, max: usize },

    /// A numerical procedure failed to produce a result.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
