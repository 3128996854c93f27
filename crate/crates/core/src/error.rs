use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested configuration is not supported (e.g. no sampler, not normalizable).
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A required constant or capability is missing.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An iterative procedure did not converge.
    #[error("convergence failure: {0}")]
    Convergence(String),
    /// A factorization or other numerical kernel failed.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// A block sampler failed inside a Gibbs sweep.
    #[error("block {block} failed at iteration {iteration}: {source}")]
    Block {
        block: usize,
        iteration: usize,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
