use thiserror::Error;

/// Errors raised by state construction and the correlation measures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("density-matrix invariant violated: {0}")]
    InvariantViolation(String),

    #[error("state is not permutation invariant ({0}); use general mode instead")]
    NotSymmetric(String),

    /// Dense storage or brute-force search refused for this many qubits.
    #[error("{what} supports at most {cap} qubits, got {n}")]
    SizeCap {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("state has rank {rank}, the purification route needs rank <= 2")]
    RankTooHigh { rank: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
