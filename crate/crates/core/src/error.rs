use thiserror::Error;

use crate::zd::ZdVector;

/// Errors produced by the library.
///
/// `NotRealizable` and `NonUniqueState` are legal verdicts rather than
/// faults; callers that can continue should match on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected (d={expected_d}, n={expected_n}), found (d={found_d}, n={found_n})")]
    DimensionMismatch {
        expected_d: u32,
        expected_n: usize,
        found_d: u32,
        found_n: usize,
    },

    #[error("resource limit exceeded for {what}: need {required}, limit {limit}")]
    ResourceLimit {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("syndrome {0} is outside the syndrome lattice; no word operator realizes it")]
    NotRealizable(ZdVector),

    #[error("generator set does not stabilize a unique state (projector trace {trace})")]
    NonUniqueState { trace: f64 },

    #[error("transformed generating set does not generate the original group")]
    GroupNotPreserved,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_limit(what: &'static str, required: u128, limit: u128) -> Result<()> {
    if required > limit {
        Err(Error::ResourceLimit {
            what,
            required,
            limit,
        })
    } else {
        Ok(())
    }
}
