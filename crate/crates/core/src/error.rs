use thiserror::Error;

use crate::site::SiteError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Site(#[from] SiteError),
    #[error("depth {q} exceeds truncation depth {depth}")]
    DepthExceeded { q: usize, depth: usize },
    #[error("invalid sequence {0}")]
    InvalidSequence(String),
    #[error("sieve does not cover {0}")]
    NotACover(String),
    #[error("predicate is not monotone: holds at {holds} but not at {fails}")]
    NotMonotone { holds: String, fails: String },
    #[error("predicate is not inductive at {0}")]
    NotInductive(String),
    #[error("{point} is not a point: condition {condition} fails ({witness})")]
    NotAPoint {
        point: String,
        condition: u8,
        witness: String,
    },
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error("empty covering sieve at {0}")]
    EmptyCoverPresent(String),
    #[error("{0} and {1} overlap")]
    NotDisjoint(String, String),
    #[error("family does not cover {0}")]
    NotCovering(String),
    #[error("no disjoint refinement found at {0}")]
    NoRefinementFound(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("sort error: {0}")]
    Sort(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("premise not forced: {0}")]
    PremiseNotForced(String),
    #[error("not forced: {0}")]
    NotForced(String),
    #[error("two distinct forced sections: {0} and {1}")]
    NotUnique(String, String),
    #[error("no modulus of continuity: {0}")]
    NoModulus(String),
    #[error("value {value} exceeds the ceiling {ceiling}")]
    ValueCeiling { value: u64, ceiling: u64 },
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
