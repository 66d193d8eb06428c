use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("expected a positive integer, got {0}")]
    NotPositive(String),

    #[error("expected an odd integer, got {0}")]
    NotOdd(String),

    #[error("{name} must be at least {min}, got {got}")]
    TooSmall {
        name: &'static str,
        min: String,
        got: String,
    },

    #[error("{name} is too large for this operation (limit {limit}, got {got})")]
    TooLarge {
        name: &'static str,
        limit: String,
        got: String,
    },

    #[error("empty range: lower bound {lower} exceeds upper bound {upper}")]
    EmptyRange { lower: u64, upper: u64 },

    #[error("chain product of an empty trajectory is undefined")]
    EmptyTrajectory,

    #[error("steps do not chain: step {index} starts at {found}, expected {expected}")]
    BrokenChain {
        index: usize,
        expected: String,
        found: String,
    },

    #[error("multiples of three have no odd predecessors")]
    MultipleOfThree,

    #[error("inexact division in {0}")]
    InexactDivision(&'static str),

    #[error("invalid number {0:?}")]
    Parse(String),
}
