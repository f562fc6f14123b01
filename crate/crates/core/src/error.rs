use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parts are not weakly decreasing: {0:?}")]
    NotDecreasing(Vec<i64>),

    #[error("diagram {diagram} does not fit in a {w}x{h} box")]
    OutOfBox { diagram: String, w: usize, h: usize },

    #[error("bit word of length {found} does not match box length {expected}")]
    WordLength { expected: usize, found: usize },

    #[error("bit word must contain exactly {expected} ones, found {found}")]
    OnesCount { expected: usize, found: usize },

    #[error("diagram {diagram} does not have maximal width {w}")]
    NotMaximalWidth { diagram: String, w: usize },

    #[error("negative part in {0}")]
    NegativePart(String),

    #[error("weight {weight} does not fit rank {rank}")]
    RankOverflow { weight: String, rank: usize },

    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("{inner} is not contained in {outer}")]
    NotContained { inner: String, outer: String },

    #[error("block sizes {found:?} do not match expected {expected:?}")]
    BlockSize { expected: Vec<usize>, found: Vec<usize> },

    #[error("invalid Grassmannian Gr({k},{n}): need 0 < k < n")]
    InvalidContext { k: i64, n: i64 },

    #[error("point {0} lies outside the rectangle")]
    PointOutside(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("expected {expected} classes, got {found}")]
    CountMismatch { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// A computed object contradicts a statement that must hold on valid input.
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_) | Error::Overflow(_))
    }
}
