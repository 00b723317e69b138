use belief_core::BeliefError;
use thiserror::Error;

use crate::protocol::StepKind;

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("unknown participant {0:?}")]
    UnknownParticipant(String),
    #[error("participant {0:?} already has a session")]
    Duplicate(String),
    #[error("expected step {expected:?}, got {got:?}")]
    OrderViolation { expected: Option<StepKind>, got: StepKind },
    #[error("{0}")]
    NotAvailable(String),
    #[error("session for {0:?} timed out")]
    Expired(String),
    #[error("malformed payload: {0}")]
    Malformed(String),
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error("storage: {0}")]
    Storage(String),
}

impl StudyError {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            StudyError::UnknownParticipant(_) => "unknown_participant",
            StudyError::Duplicate(_) => "duplicate_participant",
            StudyError::OrderViolation { .. } => "order_violation",
            StudyError::NotAvailable(_) => "not_available",
            StudyError::Expired(_) => "expired",
            StudyError::Malformed(_) => "malformed",
            StudyError::Belief(_) => "invalid_input",
            StudyError::Storage(_) => "storage",
        }
    }
}

impl From<std::io::Error> for StudyError {
    fn from(e: std::io::Error) -> Self {
        StudyError::Storage(e.to_string())
    }
}

pub type Result<T, E = StudyError> = std::result::Result<T, E>;
