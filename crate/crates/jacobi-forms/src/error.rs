use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported weight k = {0} (need even k >= 4)")]
    UnsupportedWeight(i64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported lattice: {0}")]
    UnsupportedLattice(String),
    #[error("frame mismatch: {0}")]
    FrameMismatch(String),
    #[error("index mismatch: {0} vs {1}")]
    IndexMismatch(String, String),
    #[error("declared holomorphic form violates 2nt - (l,l) >= 0 at n24={n24}, w={w:?}")]
    NotHolomorphic { n24: i64, w: Vec<i64> },
    #[error("non-integral abelian key: {0}")]
    NonIntegralKey(String),
    #[error("insufficient precision: need N24 >= {need}, have {have}")]
    Precision { need: i64, have: i64 },
    #[error("series is zero within precision N24 = {0}")]
    ZeroSeries(i64),
    #[error("inconsistent theta decomposition: {0}")]
    Inconsistent(String),
    #[error("not a lattice vector: {0}")]
    NotInLattice(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("decode error: {0}")]
    Decode(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn pre<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
