use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied argument is outside its domain.
    #[error("{0}")]
    Argument(String),

    /// A matrix failed one of the density-matrix invariants.
    #[error("{invariant} invariant violated: {detail}")]
    InvalidDensity {
        invariant: &'static str,
        detail: String,
    },

    /// Two computational routes that must agree did not.
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}
