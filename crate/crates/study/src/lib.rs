//! Runs belief-updating study sessions: balanced assignment, the ordered
//! step protocol, an append-only event log and CSV export.

pub mod assign;
pub mod error;
pub mod http;
pub mod protocol;
pub mod service;
pub mod session;
pub mod store;

pub use error::{Result, StudyError};
pub use protocol::{Step, StepKind};
pub use service::{
    elicit_begin, elicit_drag, Assignment, AssistancePayload, Clock, DragRequest, ElicitView, SliderValues,
    StepAck, StimulusSpec, StudyConfig, StudyService,
};
