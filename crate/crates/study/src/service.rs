use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use belief_core::density::{focused_polyline, DensityPoint};
use belief_core::elicitation::quantize;
use belief_core::record::write_records;
use belief_core::{
    begin, drag_handle, hdi, likelihood_belief, make_analogy, make_posterior_vis, Analogy, Condition, Dataset,
    ElicitationState, Handle, PosteriorVisPayload, TrialRecord, ELICITED_MASS,
};
use serde::{Deserialize, Serialize};

use crate::assign::Balancer;
use crate::error::{Result, StudyError};
use crate::protocol::{Step, StepKind};
use crate::session::Session;
use crate::store::{Event, EventLog};

pub trait Clock: Send + Sync {
    fn now_ms(&self) -> i64;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now_ms(&self) -> i64 {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as i64)
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Default)]
pub struct StudyConfig {
    pub seed: u64,
    /// Directory for the event log; `None` keeps everything in memory.
    pub data_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub participant_id: String,
    pub condition: Condition,
    pub dataset: Dataset,
    pub steps: Vec<StepKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepAck {
    pub participant_id: String,
    pub accepted: StepKind,
    pub next: Option<StepKind>,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodPayload {
    pub density_points: Vec<DensityPoint>,
    pub interval_95: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointPayload {
    pub point: f64,
    pub sample_size_text: String,
}

/// What the data screen shows for a dataset in a condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StimulusSpec {
    pub dataset: Dataset,
    pub proportion: f64,
    pub successes: u64,
    pub sample_size: u64,
    pub description_text: String,
    pub likelihood_payload: Option<LikelihoodPayload>,
    pub point_payload: Option<PointPayload>,
}

impl StimulusSpec {
    pub fn new(dataset: Dataset, condition: Condition) -> Result<Self> {
        let data = dataset.observed();
        let (likelihood_payload, point_payload) = if condition.shows_interval() {
            let lik = likelihood_belief(&data);
            let interval = hdi(&lik, ELICITED_MASS)?;
            let payload = LikelihoodPayload {
                density_points: focused_polyline(&lik),
                interval_95: (interval.lower, interval.upper),
            };
            (Some(payload), None)
        } else {
            let payload = PointPayload {
                point: data.proportion(),
                sample_size_text: format!("based on a sample of {} people", data.sample_size()),
            };
            (None, Some(payload))
        };
        Ok(Self {
            dataset,
            proportion: dataset.proportion(),
            successes: data.successes(),
            sample_size: data.sample_size(),
            description_text: dataset.description().to_string(),
            likelihood_payload,
            point_payload,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AssistancePayload {
    Analogy(Analogy),
    PosteriorVis(PosteriorVisPayload),
}

/// Elicitation state as sent to the slider, with its density curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElicitView {
    #[serde(flatten)]
    pub state: ElicitationState,
    pub density_points: Vec<DensityPoint>,
}

impl From<ElicitationState> for ElicitView {
    fn from(state: ElicitationState) -> Self {
        Self {
            density_points: state.density(),
            state,
        }
    }
}

/// The slider values a client echoes back with each drag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliderValues {
    pub point_estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DragRequest {
    pub state: SliderValues,
    pub handle: Handle,
    pub value: f64,
}

pub fn elicit_begin(point_estimate: f64) -> Result<ElicitView> {
    Ok(begin(point_estimate)?.into())
}

/// One slider drag. The raw position is snapped to the 0.1 pp grid before
/// the concentration is solved.
pub fn elicit_drag(request: &DragRequest) -> Result<ElicitView> {
    let s = request.state;
    let state = ElicitationState::restore(s.point_estimate, s.lower, s.upper, s.kappa)?;
    if !request.value.is_finite() {
        return Err(StudyError::Malformed(format!("handle position {} is not finite", request.value)));
    }
    Ok(drag_handle(&state, request.handle, quantize(request.value))?.into())
}

struct State {
    sessions: BTreeMap<String, Session>,
    balancer: Balancer,
    log: EventLog,
}

pub struct StudyService {
    state: Mutex<State>,
    clock: Box<dyn Clock>,
}

impl StudyService {
    pub fn open(config: &StudyConfig) -> Result<Self> {
        Self::with_clock(config, Box::new(SystemClock))
    }

    pub fn in_memory(seed: u64) -> Self {
        Self::with_clock(&StudyConfig { seed, data_dir: None }, Box::new(SystemClock)).expect("no storage to open")
    }

    pub fn with_clock(config: &StudyConfig, clock: Box<dyn Clock>) -> Result<Self> {
        let mut state = State {
            sessions: BTreeMap::new(),
            balancer: Balancer::new(config.seed),
            log: EventLog::in_memory(),
        };
        if let Some(dir) = &config.data_dir {
            let (log, events) = EventLog::open(dir)?;
            for event in events {
                replay(&mut state, event)?;
            }
            state.log = log;
        }
        Ok(Self { state: Mutex::new(state), clock })
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, State> {
        self.state.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    pub fn create_session(&self, participant_id: &str) -> Result<Assignment> {
        if participant_id.trim().is_empty() || participant_id.len() > 128 {
            return Err(StudyError::Malformed("participant id must be 1-128 characters".into()));
        }
        let mut state = self.lock();
        if state.sessions.contains_key(participant_id) {
            return Err(StudyError::Duplicate(participant_id.into()));
        }
        let at_ms = self.clock.now_ms();
        let (condition, dataset) = state.balancer.assign();
        state.log.append(&Event::Assigned {
            participant_id: participant_id.into(),
            condition,
            dataset,
            at_ms,
        })?;
        let session = Session::new(participant_id.into(), condition, dataset, at_ms);
        let steps = session.protocol();
        state.sessions.insert(participant_id.into(), session);
        tracing::debug!(participant_id, ?condition, ?dataset, "assigned");
        Ok(Assignment {
            participant_id: participant_id.into(),
            condition,
            dataset,
            steps,
        })
    }

    pub fn record_step(&self, participant_id: &str, step: Step) -> Result<StepAck> {
        let mut state = self.lock();
        let at_ms = self.clock.now_ms();
        let session = state
            .sessions
            .get(participant_id)
            .ok_or_else(|| StudyError::UnknownParticipant(participant_id.into()))?;
        session.check(&step, at_ms)?;
        let kind = step.kind();
        state.log.append(&Event::Step {
            participant_id: participant_id.into(),
            at_ms,
            payload: step.clone(),
        })?;
        let session = state.sessions.get_mut(participant_id).expect("checked above");
        session.push(step, at_ms);
        Ok(StepAck {
            participant_id: participant_id.into(),
            accepted: kind,
            next: session.next_step(),
            complete: session.is_complete(),
        })
    }

    pub fn session(&self, participant_id: &str) -> Result<Session> {
        self.lock()
            .sessions
            .get(participant_id)
            .cloned()
            .ok_or_else(|| StudyError::UnknownParticipant(participant_id.into()))
    }

    pub fn stimulus(&self, participant_id: &str) -> Result<StimulusSpec> {
        let session = self.session(participant_id)?;
        StimulusSpec::new(session.dataset, session.condition)
    }

    /// Analogy or posterior visualisation for assistance conditions, once
    /// the prior is in.
    pub fn assistance(&self, participant_id: &str) -> Result<AssistancePayload> {
        let session = self.session(participant_id)?;
        if !session.condition.has_assistance() {
            return Err(StudyError::NotAvailable(format!(
                "condition {} has no assistance",
                session.condition.as_str()
            )));
        }
        let prior = session
            .prior()?
            .ok_or_else(|| StudyError::NotAvailable("assistance needs the prior first".into()))?;
        let data = session.dataset.observed();
        Ok(match session.condition {
            Condition::Analogy => AssistancePayload::Analogy(make_analogy(&prior.fitted, &data)?),
            _ => AssistancePayload::PosteriorVis(make_posterior_vis(&prior.fitted, &data)?),
        })
    }

    /// Completed records in participant-id order.
    pub fn records(&self, include_excluded: bool) -> Result<Vec<TrialRecord>> {
        let state = self.lock();
        let mut out = Vec::new();
        for session in state.sessions.values() {
            if let Some(record) = session.to_record()? {
                if include_excluded || !record.excluded() {
                    out.push(record);
                }
            }
        }
        Ok(out)
    }

    pub fn export_csv(&self, include_excluded: bool) -> Result<String> {
        let records = self.records(include_excluded)?;
        let mut buf = Vec::new();
        write_records(&mut buf, &records)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn assignment_spread(&self) -> usize {
        self.lock().balancer.spread()
    }
}

fn replay(state: &mut State, event: Event) -> Result<()> {
    match event {
        Event::Assigned { participant_id, condition, dataset, at_ms } => {
            state.balancer.record((condition, dataset));
            state
                .sessions
                .insert(participant_id.clone(), Session::new(participant_id, condition, dataset, at_ms));
        }
        Event::Step { participant_id, at_ms, payload } => {
            let session = state
                .sessions
                .get_mut(&participant_id)
                .ok_or_else(|| StudyError::Storage(format!("step for unassigned participant {participant_id:?}")))?;
            session.push(payload, at_ms);
        }
    }
    Ok(())
}
