use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("weight vector has no positive mass")]
    AllZero,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("target density is NaN or +inf at the current state")]
    NonFiniteDensity,
    #[error("full conditional of coordinate {coord} has zero mass")]
    ZeroSlice { coord: usize },
    #[error("{0} requires kernels with a Metropolis-Hastings factorization")]
    KernelTagMismatch(&'static str),
    #[error("probability parameter {name} = {value} outside its valid range")]
    BadProbability { name: &'static str, value: f64 },
    #[error("state space of {states} states exceeds the cap of {cap}")]
    SpaceTooLarge { states: usize, cap: usize },
    #[error("row {row} of the transition matrix sums to {sum}")]
    NotStochastic { row: usize, sum: f64 },
    #[error("kernel moves mass from state {from} outside the target support")]
    LeavesSupport { from: usize },
    #[error("linear system is singular")]
    SingularSystem,
    #[error("target set is not reachable from state {0}")]
    Unreachable(usize),
    #[error("chain did not reach tolerance within {horizon} iterations")]
    NoConvergence { horizon: usize },
    #[error("coupled chains did not meet within {max_t} iterations")]
    Timeout { max_t: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("need at least {needed} replicates, got {got}")]
    TooFewReplicates { needed: usize, got: usize },
    #[error("sample contains duplicate points, nearest-neighbour distance is zero")]
    DuplicatePoints,
    #[error("empty sample")]
    EmptySample,
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
