use belief_core::record::{Demographics, Timestamps};
use belief_core::{fit_beta, Condition, Dataset, ElicitedBelief, TrialRecord};
use serde::{Deserialize, Serialize};

use crate::error::{Result, StudyError};
use crate::protocol::{steps_for, Step, StepKind};

/// Incomplete sessions older than this accept no further steps.
pub const SESSION_TIMEOUT_MS: i64 = 60 * 60 * 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Submitted {
    pub step: Step,
    pub at_ms: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub participant_id: String,
    pub condition: Condition,
    pub dataset: Dataset,
    pub created_ms: i64,
    pub steps: Vec<Submitted>,
}

impl Session {
    pub fn new(participant_id: String, condition: Condition, dataset: Dataset, created_ms: i64) -> Self {
        Self {
            participant_id,
            condition,
            dataset,
            created_ms,
            steps: Vec::new(),
        }
    }

    pub fn protocol(&self) -> Vec<StepKind> {
        steps_for(self.condition)
    }

    pub fn next_step(&self) -> Option<StepKind> {
        self.protocol().get(self.steps.len()).copied()
    }

    pub fn is_complete(&self) -> bool {
        self.next_step().is_none()
    }

    pub fn has_completed(&self, kind: StepKind) -> bool {
        self.steps.iter().any(|s| s.step.kind() == kind)
    }

    pub fn is_expired(&self, now_ms: i64) -> bool {
        !self.is_complete() && now_ms - self.created_ms > SESSION_TIMEOUT_MS
    }

    /// Check a step against the protocol and its own invariants without
    /// storing it.
    pub fn check(&self, step: &Step, now_ms: i64) -> Result<()> {
        if self.is_expired(now_ms) {
            return Err(StudyError::Expired(self.participant_id.clone()));
        }
        let expected = self.next_step();
        if expected != Some(step.kind()) {
            return Err(StudyError::OrderViolation { expected, got: step.kind() });
        }
        if let Some(interval) = step.interval() {
            fit_beta(&interval?)?;
        }
        if let Step::PostTask { trust_rating, .. } = step {
            if !(1..=5).contains(trust_rating) {
                return Err(StudyError::Malformed(format!("trust rating {trust_rating} outside 1-5")));
            }
        }
        Ok(())
    }

    /// Append a step that already passed `check`.
    pub fn push(&mut self, step: Step, at_ms: i64) {
        self.steps.push(Submitted { step, at_ms });
    }

    pub fn prior(&self) -> Result<Option<ElicitedBelief>> {
        self.elicited(StepKind::Prior)
    }

    fn elicited(&self, kind: StepKind) -> Result<Option<ElicitedBelief>> {
        match self.steps.iter().find(|s| s.step.kind() == kind).and_then(|s| s.step.interval()) {
            Some(interval) => {
                let interval = interval?;
                Ok(Some(ElicitedBelief { interval, fitted: fit_beta(&interval)? }))
            }
            None => Ok(None),
        }
    }

    fn time_of(&self, kind: StepKind) -> Option<i64> {
        self.steps.iter().find(|s| s.step.kind() == kind).map(|s| s.at_ms)
    }

    /// The finished record; `None` until every mandatory step is in.
    pub fn to_record(&self) -> Result<Option<TrialRecord>> {
        if !self.is_complete() {
            return Ok(None);
        }
        let posterior = self.elicited(StepKind::Posterior)?.expect("complete sessions have a posterior");
        let Some(Step::PostTask { trust_rating, gender, education, age_band, exclusion_answer }) =
            self.steps.iter().map(|s| &s.step).find(|s| s.kind() == StepKind::PostTask).cloned()
        else {
            unreachable!("complete sessions have a post-task step")
        };
        let record = TrialRecord {
            participant_id: self.participant_id.clone(),
            condition: self.condition,
            dataset: self.dataset,
            prior: self.prior()?,
            posterior,
            trust_rating,
            demographics: Demographics { gender, education, age_band },
            exclusion_answer,
            timestamps: Timestamps {
                intro: self.time_of(StepKind::Intro),
                prior: self.time_of(StepKind::Prior),
                stimulus: self.time_of(StepKind::Stimulus),
                assistance: self.time_of(StepKind::Assistance),
                posterior: self.time_of(StepKind::Posterior),
                post_task: self.time_of(StepKind::PostTask),
            },
        };
        record.validate()?;
        Ok(Some(record))
    }
}
