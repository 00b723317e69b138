use thiserror::Error;

use crate::belief::BetaBelief;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BeliefError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The concentration search hit its iteration bound; `best` is the
    /// lowest-error candidate it saw.
    #[error("fit did not converge (best candidate Beta({}, {}))", best.alpha(), best.beta())]
    FitFailure { best: BetaBelief },
    #[error("root finding failed: {0}")]
    RootFinding(String),
    #[error("non-finite result: {0}")]
    NonFinite(String),
}

pub type Result<T, E = BeliefError> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(BeliefError::InvalidInput(msg.into()))
}
