use thiserror::Error;

/// Errors raised by the algebraic constructions in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("undefined gcd direction: the input vector is zero")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("infinite quotient: lattice has rank {rank} in ambient rank {ambient}")]
    InfiniteQuotient { rank: usize, ambient: usize },
    #[error("invalid root system {0}")]
    InvalidRootSystem(String),
    #[error("weight is not dominant: {0}")]
    NotDominant(String),
    #[error("not a root: {0}")]
    NotARoot(String),
    #[error("non-integrable weight: pairing {0} is not an integer")]
    NonIntegrable(String),
    #[error("level 0 highest weight: use LoopModule")]
    LevelZero,
    #[error("depth exceeded: requested depth {requested}, module truncated at {limit}")]
    DepthExceeded { requested: i64, limit: i64 },
    #[error("extend truncation: {0}")]
    WindowExceeded(String),
    #[error("unsupported type for structure constants: {0}")]
    UnsupportedType(String),
    #[error("imaginary root has no coroot")]
    ImaginaryRoot,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("box too small: {0}")]
    BoxTooSmall(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
