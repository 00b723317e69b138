use belief_core::BeliefError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("fit did not converge (largest split R-hat {max_r_hat:.3})")]
    NotConverged { max_r_hat: f64 },
    #[error("only {found} elicited priors; at least {required} are needed for a stable common prior")]
    TooFewPriors { found: usize, required: usize },
    #[error(transparent)]
    Belief(#[from] BeliefError),
}

pub type Result<T, E = AnalysisError> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(AnalysisError::InvalidInput(msg.into()))
}
