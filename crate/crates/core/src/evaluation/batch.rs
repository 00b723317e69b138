//! Scoring a batch of trial records against their normative posteriors.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::classify::{classify_location, classify_variance_ratio, LocationType, VarianceType};
use super::kld::deviation;
use super::summary::{summarize_values, LogKldSummary};
use crate::belief::{likelihood_belief, posterior_update, BetaBelief};
use crate::error::{invalid, BeliefError, Result};
use crate::record::{Condition, Dataset, TrialRecord};

/// Which prior the normative posterior was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorSource {
    Own,
    Common,
}

#[derive(Debug, Clone, Default)]
pub struct EvaluationOptions {
    /// Normative posteriors keyed by participant id. When present these
    /// replace the conjugate update for that participant.
    pub normative: HashMap<String, BetaBelief>,
    /// Prior used for participants who were not asked for one.
    pub common_prior: Option<BetaBelief>,
    pub include_excluded: bool,
}

/// One row of the scores table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub participant_id: String,
    pub condition: Condition,
    pub dataset: Dataset,
    pub excluded: bool,
    pub prior_source: PriorSource,
    pub prior_alpha: f64,
    pub prior_beta: f64,
    pub normative_alpha: f64,
    pub normative_beta: f64,
    pub elicited_alpha: f64,
    pub elicited_beta: f64,
    pub kld: f64,
    pub log_kld: f64,
    pub variance_ratio: f64,
    pub location_type: LocationType,
    pub variance_type: VarianceType,
}

impl ScoreRow {
    pub fn normative(&self) -> Result<BetaBelief> {
        BetaBelief::new(self.normative_alpha, self.normative_beta)
    }

    pub fn elicited(&self) -> Result<BetaBelief> {
        BetaBelief::new(self.elicited_alpha, self.elicited_beta)
    }
}

/// Score one record. Returns `Ok(None)` when the record carries no prior
/// and no common prior was supplied.
pub fn score_record(record: &TrialRecord, options: &EvaluationOptions) -> Result<Option<ScoreRow>> {
    let (prior, prior_source) = match (&record.prior, options.common_prior) {
        (Some(p), _) => (p.fitted, PriorSource::Own),
        (None, Some(common)) => (common, PriorSource::Common),
        (None, None) => return Ok(None),
    };
    let data = record.observed();
    let likelihood = likelihood_belief(&data);
    let normative = match options.normative.get(&record.participant_id) {
        Some(n) => *n,
        None => posterior_update(&prior, &data),
    };
    let elicited = record.posterior.fitted;
    let score = deviation(&normative, &elicited)?;
    let ratio = elicited.variance() / normative.variance();
    Ok(Some(ScoreRow {
        participant_id: record.participant_id.clone(),
        condition: record.condition,
        dataset: record.dataset,
        excluded: record.excluded(),
        prior_source,
        prior_alpha: prior.alpha(),
        prior_beta: prior.beta(),
        normative_alpha: normative.alpha(),
        normative_beta: normative.beta(),
        elicited_alpha: elicited.alpha(),
        elicited_beta: elicited.beta(),
        kld: score.kld,
        log_kld: score.log_kld,
        variance_ratio: ratio,
        location_type: classify_location(&prior, &likelihood, &elicited, &normative),
        variance_type: classify_variance_ratio(ratio),
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub scored: usize,
    /// Participants left out for lack of a prior.
    pub skipped: Vec<String>,
    pub overall: Option<LogKldSummary>,
    pub by_condition: BTreeMap<String, LogKldSummary>,
    pub by_dataset: BTreeMap<String, LogKldSummary>,
    pub location_counts: BTreeMap<String, usize>,
    pub variance_counts: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub rows: Vec<ScoreRow>,
    pub summary: EvaluationSummary,
}

pub fn evaluate_records(records: &[TrialRecord], options: &EvaluationOptions) -> Result<Evaluation> {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for record in records {
        if record.excluded() && !options.include_excluded {
            continue;
        }
        match score_record(record, options)? {
            Some(row) => rows.push(row),
            None => skipped.push(record.participant_id.clone()),
        }
    }
    let summary = summarize_rows(&rows, skipped)?;
    Ok(Evaluation { rows, summary })
}

fn summarize_groups<K: Ord + ToString>(
    rows: &[ScoreRow],
    key: impl Fn(&ScoreRow) -> K,
) -> Result<BTreeMap<String, LogKldSummary>> {
    let mut groups: BTreeMap<K, Vec<f64>> = BTreeMap::new();
    for row in rows {
        groups.entry(key(row)).or_default().push(row.log_kld);
    }
    groups
        .into_iter()
        .map(|(k, v)| Ok((k.to_string(), summarize_values(&v)?)))
        .collect()
}

pub fn summarize_rows(rows: &[ScoreRow], skipped: Vec<String>) -> Result<EvaluationSummary> {
    let logs: Vec<f64> = rows.iter().map(|r| r.log_kld).collect();
    let mut location_counts: BTreeMap<String, usize> =
        LocationType::ALL.iter().map(|t| (t.as_str().to_string(), 0)).collect();
    let mut variance_counts: BTreeMap<String, usize> =
        VarianceType::ALL.iter().map(|t| (t.as_str().to_string(), 0)).collect();
    for row in rows {
        *location_counts.entry(row.location_type.as_str().into()).or_default() += 1;
        *variance_counts.entry(row.variance_type.as_str().into()).or_default() += 1;
    }
    Ok(EvaluationSummary {
        scored: rows.len(),
        skipped,
        overall: if logs.is_empty() { None } else { Some(summarize_values(&logs)?) },
        by_condition: summarize_groups(rows, |r| r.condition.as_str())?,
        by_dataset: summarize_groups(rows, |r| r.dataset.as_str())?,
        location_counts,
        variance_counts,
    })
}

fn csv_error(e: csv::Error) -> BeliefError {
    BeliefError::InvalidInput(format!("csv: {e}"))
}

pub fn write_scores<W: Write>(out: W, rows: &[ScoreRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    if rows.is_empty() {
        // serde only emits the header alongside the first row.
        w.write_record(SCORE_COLUMNS).map_err(csv_error)?;
    }
    w.flush().map_err(|e| BeliefError::InvalidInput(format!("write: {e}")))
}

pub fn read_scores<R: Read>(input: R) -> Result<Vec<ScoreRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers().map_err(csv_error)?.clone();
    if header.iter().ne(SCORE_COLUMNS.iter().copied()) {
        return invalid("scores header does not match");
    }
    reader.deserialize().map(|r| r.map_err(csv_error)).collect()
}

pub const SCORE_COLUMNS: [&str; 16] = [
    "participant_id",
    "condition",
    "dataset",
    "excluded",
    "prior_source",
    "prior_alpha",
    "prior_beta",
    "normative_alpha",
    "normative_beta",
    "elicited_alpha",
    "elicited_beta",
    "kld",
    "log_kld",
    "variance_ratio",
    "location_type",
    "variance_type",
];
