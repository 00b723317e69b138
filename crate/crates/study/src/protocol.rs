//! Screens a participant submits, in order.

use belief_core::{Condition, ElicitedInterval, ExclusionAnswer};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Intro,
    Prior,
    Stimulus,
    Assistance,
    Posterior,
    PostTask,
}

/// One submitted screen. Serialised with a `step` tag, e.g.
/// `{"step": "prior", "point_estimate": 0.3, "lower": 0.2, "upper": 0.45}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case", deny_unknown_fields)]
pub enum Step {
    Intro {},
    Prior {
        point_estimate: f64,
        lower: f64,
        upper: f64,
    },
    Stimulus {},
    Assistance {},
    Posterior {
        point_estimate: f64,
        lower: f64,
        upper: f64,
    },
    PostTask {
        trust_rating: u8,
        #[serde(default)]
        gender: String,
        #[serde(default)]
        education: String,
        #[serde(default)]
        age_band: String,
        exclusion_answer: ExclusionAnswer,
    },
}

impl Step {
    pub fn kind(&self) -> StepKind {
        match self {
            Step::Intro {} => StepKind::Intro,
            Step::Prior { .. } => StepKind::Prior,
            Step::Stimulus {} => StepKind::Stimulus,
            Step::Assistance {} => StepKind::Assistance,
            Step::Posterior { .. } => StepKind::Posterior,
            Step::PostTask { .. } => StepKind::PostTask,
        }
    }

    /// The elicited interval carried by a prior or posterior screen.
    pub fn interval(&self) -> Option<belief_core::Result<ElicitedInterval>> {
        match *self {
            Step::Prior { point_estimate, lower, upper } | Step::Posterior { point_estimate, lower, upper } => {
                Some(ElicitedInterval::new(point_estimate, lower, upper))
            }
            _ => None,
        }
    }
}

/// Mandatory screens for a condition.
pub fn steps_for(condition: Condition) -> Vec<StepKind> {
    let mut steps = vec![StepKind::Intro];
    if condition.elicits_prior() {
        steps.push(StepKind::Prior);
    }
    steps.push(StepKind::Stimulus);
    if condition.has_assistance() {
        steps.push(StepKind::Assistance);
    }
    steps.extend([StepKind::Posterior, StepKind::PostTask]);
    steps
}
