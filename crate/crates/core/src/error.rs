use thiserror::Error;

/// Errors produced by the election model and the solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid ballot {index}: {reason}")]
    InvalidBallot { index: usize, reason: String },

    #[error("infeasible approval demands: {0}")]
    InfeasibleDemand(String),

    #[error("unsupported evaluation variant: {0}")]
    UnsupportedVariant(String),

    #[error("invalid tie-breaking perspective: {0}")]
    InvalidPerspective(String),

    #[error("invalid integer program: {0}")]
    InvalidProgram(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    /// A solver produced a certificate that does not re-simulate to its
    /// claimed outcome.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
