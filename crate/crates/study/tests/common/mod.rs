#![allow(dead_code)]

use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::Arc;

use belief_core::{Condition, ExclusionAnswer};
use belief_study::{Clock, Step, StepKind, StudyConfig, StudyService};

#[derive(Clone, Default)]
pub struct ManualClock(pub Arc<AtomicI64>);

impl ManualClock {
    pub fn advance(&self, ms: i64) {
        self.0.fetch_add(ms, Ordering::SeqCst);
    }
}

impl Clock for ManualClock {
    fn now_ms(&self) -> i64 {
        self.0.load(Ordering::SeqCst)
    }
}

pub fn service_with_clock(seed: u64) -> (StudyService, ManualClock) {
    let clock = ManualClock::default();
    clock.advance(1_700_000_000_000);
    let service = StudyService::with_clock(&StudyConfig { seed, data_dir: None }, Box::new(clock.clone())).unwrap();
    (service, clock)
}

pub fn step_for(kind: StepKind, answer: ExclusionAnswer) -> Step {
    match kind {
        StepKind::Intro => Step::Intro {},
        StepKind::Prior => Step::Prior { point_estimate: 0.3, lower: 0.18, upper: 0.45 },
        StepKind::Stimulus => Step::Stimulus {},
        StepKind::Assistance => Step::Assistance {},
        StepKind::Posterior => Step::Posterior { point_estimate: 0.4, lower: 0.34, upper: 0.47 },
        StepKind::PostTask => Step::PostTask {
            trust_rating: 4,
            gender: "woman".into(),
            education: "master".into(),
            age_band: "35-44".into(),
            exclusion_answer: answer,
        },
    }
}

/// Run a participant through every mandatory step.
pub fn complete(service: &StudyService, id: &str, answer: ExclusionAnswer) -> Condition {
    let assignment = service.create_session(id).unwrap();
    for kind in assignment.steps {
        service.record_step(id, step_for(kind, answer)).unwrap();
    }
    assignment.condition
}
