use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants fall into three families: rejected input, exceeded resource caps,
/// and internal consistency failures (which indicate a bug, not bad input).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("group order exceeds cap of {cap} elements")]
    OrderCapExceeded { cap: usize },

    #[error("tuple space {degree}^{arity} exceeds cap of {cap} tuples")]
    TupleCapExceeded { degree: usize, arity: usize, cap: usize },

    #[error("subgroup count exceeds cap of {cap}")]
    SubgroupCapExceeded { cap: usize },

    #[error("search bound exceeded: {0}")]
    SearchBoundExceeded(String),

    #[error("time budget of {seconds}s exhausted")]
    BudgetExceeded { seconds: u64 },

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("group is not nilpotent")]
    NotNilpotent,

    #[error("group is not abelian")]
    NotAbelian,

    #[error("partition is not invariant: generator {generator} maps block {block} outside every block")]
    NotInvariant { generator: usize, block: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Cap and budget failures: the input was fine, the bounds were not.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::OrderCapExceeded { .. }
                | Error::TupleCapExceeded { .. }
                | Error::SubgroupCapExceeded { .. }
                | Error::SearchBoundExceeded(_)
                | Error::BudgetExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
