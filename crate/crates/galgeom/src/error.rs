//! Library-wide error type.  Size guards are hard errors by design: the engine
//! refuses out-of-scope parameters instead of silently sampling.

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("size guard exceeded: {what} = {count} (limit {limit})")]
    SizeGuard { what: String, count: u128, limit: u128 },
    #[error("mismatched fields/ambients: {0}")]
    Mismatch(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("hypotheses not satisfied: {0}")]
    Hypothesis(String),
    #[error("construction self-check failed: {0}")]
    Verification(String),
    #[error("falsified claim: {0}")]
    Falsified(String),
    #[error("exact division failed (implementation error): {0}")]
    ExactDivision(String),
    #[error("bad serialized data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
