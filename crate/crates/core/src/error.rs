use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape has total size 0; counting needs d >= 1")]
    EmptyShape,

    #[error("{what} {value} is outside {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("invalid shape {0:?}: expected comma-separated nonnegative integers")]
    InvalidShape(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("resource error: {0}")]
    Resource(String),

    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
