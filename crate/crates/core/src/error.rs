use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("invalid rank {0}")]
    InvalidRank(usize),
    #[error("cannot parse word {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("group ring base mismatch: {0}")]
    BaseMismatch(String),
    #[error("derived-series oracle exceeded its budget of {budget} steps")]
    BudgetExceeded { budget: u64 },
    #[error("invalid Seifert matrix: {0}")]
    InvalidSeifert(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point {0} is not on the unit circle")]
    OffCircle(String),
    #[error("the Alexander polynomial vanishes at {0}; the signature is undefined there")]
    AtJump(String),
    #[error("independence is only decided over abelian targets: {0}")]
    NonAbelianTarget(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("precision limit reached: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
