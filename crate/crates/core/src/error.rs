use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what} index {index} out of range (have {len})")]
    InvalidIndex {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("could not place a pyramid apex beyond facet {0}")]
    ApexPlacement(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("rule not applicable: {0}")]
    RuleNotApplicable(String),
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
