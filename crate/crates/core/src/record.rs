//! Study sessions as exported records, and their CSV schema.
//!
//! The file begins with a `#schema=1` comment line, then a header row and
//! one row per participant. Proportions are decimals in [0, 1]; fields that
//! do not apply (no prior in non-elicitation conditions, screens not shown)
//! are left empty.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::belief::{BetaBelief, ElicitedInterval, ObservedData};
use crate::error::{invalid, BeliefError, Result};

pub const SCHEMA_LINE: &str = "#schema=1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    NoElicitPoint,
    NoElicitUncertainty,
    PointEstimate,
    UncertaintyVis,
    Analogy,
    PosteriorVis,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::NoElicitPoint,
        Condition::NoElicitUncertainty,
        Condition::PointEstimate,
        Condition::UncertaintyVis,
        Condition::Analogy,
        Condition::PosteriorVis,
    ];

    pub const ELICITATION: [Condition; 4] = [
        Condition::PointEstimate,
        Condition::UncertaintyVis,
        Condition::Analogy,
        Condition::PosteriorVis,
    ];

    /// Participant states a prior before seeing data.
    pub fn elicits_prior(self) -> bool {
        !matches!(self, Condition::NoElicitPoint | Condition::NoElicitUncertainty)
    }

    /// Data shown as a shaded interval rather than a point with sample size.
    pub fn shows_interval(self) -> bool {
        !matches!(self, Condition::NoElicitPoint | Condition::PointEstimate)
    }

    pub fn has_assistance(self) -> bool {
        matches!(self, Condition::Analogy | Condition::PosteriorVis)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Condition::NoElicitPoint => "no_elicit_point",
            Condition::NoElicitUncertainty => "no_elicit_uncertainty",
            Condition::PointEstimate => "point_estimate",
            Condition::UncertaintyVis => "uncertainty_vis",
            Condition::Analogy => "analogy",
            Condition::PosteriorVis => "posterior_vis",
        }
    }
}

impl std::str::FromStr for Condition {
    type Err = BeliefError;

    fn from_str(s: &str) -> Result<Self> {
        Condition::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| BeliefError::InvalidInput(format!("unknown condition {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dataset {
    DementiaSmall,
    DementiaLarge,
    AbortionSmall,
    AbortionLarge,
}

pub const SMALL_SAMPLE: u64 = 158;
pub const LARGE_SAMPLE: u64 = 5208;

impl Dataset {
    pub const ALL: [Dataset; 4] = [
        Dataset::DementiaSmall,
        Dataset::DementiaLarge,
        Dataset::AbortionSmall,
        Dataset::AbortionLarge,
    ];

    pub fn proportion(self) -> f64 {
        match self {
            Dataset::DementiaSmall | Dataset::DementiaLarge => 0.42,
            Dataset::AbortionSmall | Dataset::AbortionLarge => 0.37,
        }
    }

    pub fn sample_size(self) -> u64 {
        match self {
            Dataset::DementiaSmall | Dataset::AbortionSmall => SMALL_SAMPLE,
            Dataset::DementiaLarge | Dataset::AbortionLarge => LARGE_SAMPLE,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Dataset::DementiaSmall => "dementia_small",
            Dataset::DementiaLarge => "dementia_large",
            Dataset::AbortionSmall => "abortion_small",
            Dataset::AbortionLarge => "abortion_large",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Dataset::DementiaSmall | Dataset::DementiaLarge => {
                "Proportion of residents of assisted living centers who have Alzheimer's disease or other dementias."
            }
            Dataset::AbortionSmall | Dataset::AbortionLarge => {
                "Proportion of Americans who think abortion should be legal in the second trimester of pregnancy."
            }
        }
    }

    /// The stimulus: successes are the rounded-half-up share of the sample.
    pub fn observed(self) -> ObservedData {
        ObservedData::from_proportion(self.proportion(), self.sample_size())
            .expect("built-in datasets are valid")
            .with_label(self.as_str(), self.description())
    }
}

impl std::str::FromStr for Dataset {
    type Err = BeliefError;

    fn from_str(s: &str) -> Result<Self> {
        Dataset::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| BeliefError::InvalidInput(format!("unknown dataset {s:?}")))
    }
}

/// Answer to the attention check asking which range the shown data fell in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExclusionAnswer {
    #[serde(rename = "below_30")]
    Below30,
    #[serde(rename = "between_30_60")]
    Between30And60,
    #[serde(rename = "above_60")]
    Above60,
}

impl ExclusionAnswer {
    /// Both stimuli (37% and 42%) fall between 30% and 60%.
    pub fn is_correct(self) -> bool {
        self == ExclusionAnswer::Between30And60
    }
}

/// An elicited interval together with the Beta fitted to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElicitedBelief {
    pub interval: ElicitedInterval,
    pub fitted: BetaBelief,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demographics {
    pub gender: String,
    pub education: String,
    pub age_band: String,
}

/// Unix milliseconds at which each screen was submitted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timestamps {
    pub intro: Option<i64>,
    pub prior: Option<i64>,
    pub stimulus: Option<i64>,
    pub assistance: Option<i64>,
    pub posterior: Option<i64>,
    pub post_task: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub participant_id: String,
    pub condition: Condition,
    pub dataset: Dataset,
    pub prior: Option<ElicitedBelief>,
    pub posterior: ElicitedBelief,
    pub trust_rating: u8,
    pub demographics: Demographics,
    pub exclusion_answer: ExclusionAnswer,
    pub timestamps: Timestamps,
}

impl TrialRecord {
    pub fn validate(&self) -> Result<()> {
        if self.participant_id.is_empty() {
            return invalid("participant id must not be empty");
        }
        if self.condition.elicits_prior() != self.prior.is_some() {
            return invalid(format!(
                "{}: condition {} {} a prior",
                self.participant_id,
                self.condition.as_str(),
                if self.condition.elicits_prior() { "requires" } else { "must not carry" }
            ));
        }
        if !(1..=5).contains(&self.trust_rating) {
            return invalid(format!("{}: trust rating {} outside 1-5", self.participant_id, self.trust_rating));
        }
        Ok(())
    }

    pub fn excluded(&self) -> bool {
        !self.exclusion_answer.is_correct()
    }

    pub fn observed(&self) -> ObservedData {
        self.dataset.observed()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    participant_id: String,
    condition: Condition,
    dataset: Dataset,
    successes: u64,
    sample_size: u64,
    prior_point: Option<f64>,
    prior_lower: Option<f64>,
    prior_upper: Option<f64>,
    prior_alpha: Option<f64>,
    prior_beta: Option<f64>,
    posterior_point: f64,
    posterior_lower: f64,
    posterior_upper: f64,
    posterior_alpha: f64,
    posterior_beta: f64,
    trust_rating: u8,
    gender: String,
    education: String,
    age_band: String,
    exclusion_answer: ExclusionAnswer,
    excluded: bool,
    t_intro: Option<i64>,
    t_prior: Option<i64>,
    t_stimulus: Option<i64>,
    t_assistance: Option<i64>,
    t_posterior: Option<i64>,
    t_post_task: Option<i64>,
}

/// Column names, in order.
pub const COLUMNS: [&str; 27] = [
    "participant_id",
    "condition",
    "dataset",
    "successes",
    "sample_size",
    "prior_point",
    "prior_lower",
    "prior_upper",
    "prior_alpha",
    "prior_beta",
    "posterior_point",
    "posterior_lower",
    "posterior_upper",
    "posterior_alpha",
    "posterior_beta",
    "trust_rating",
    "gender",
    "education",
    "age_band",
    "exclusion_answer",
    "excluded",
    "t_intro",
    "t_prior",
    "t_stimulus",
    "t_assistance",
    "t_posterior",
    "t_post_task",
];

impl From<&TrialRecord> for Row {
    fn from(r: &TrialRecord) -> Self {
        let data = r.observed();
        let p = r.prior.as_ref();
        Row {
            participant_id: r.participant_id.clone(),
            condition: r.condition,
            dataset: r.dataset,
            successes: data.successes(),
            sample_size: data.sample_size(),
            prior_point: p.map(|p| p.interval.point_estimate),
            prior_lower: p.map(|p| p.interval.lower),
            prior_upper: p.map(|p| p.interval.upper),
            prior_alpha: p.map(|p| p.fitted.alpha()),
            prior_beta: p.map(|p| p.fitted.beta()),
            posterior_point: r.posterior.interval.point_estimate,
            posterior_lower: r.posterior.interval.lower,
            posterior_upper: r.posterior.interval.upper,
            posterior_alpha: r.posterior.fitted.alpha(),
            posterior_beta: r.posterior.fitted.beta(),
            trust_rating: r.trust_rating,
            gender: r.demographics.gender.clone(),
            education: r.demographics.education.clone(),
            age_band: r.demographics.age_band.clone(),
            exclusion_answer: r.exclusion_answer,
            excluded: r.excluded(),
            t_intro: r.timestamps.intro,
            t_prior: r.timestamps.prior,
            t_stimulus: r.timestamps.stimulus,
            t_assistance: r.timestamps.assistance,
            t_posterior: r.timestamps.posterior,
            t_post_task: r.timestamps.post_task,
        }
    }
}

impl TryFrom<Row> for TrialRecord {
    type Error = BeliefError;

    fn try_from(row: Row) -> Result<Self> {
        let data = row.dataset.observed();
        if data.successes() != row.successes || data.sample_size() != row.sample_size {
            return invalid(format!(
                "{}: counts {}/{} do not match dataset {}",
                row.participant_id,
                row.successes,
                row.sample_size,
                row.dataset.as_str()
            ));
        }
        let prior = match (row.prior_point, row.prior_lower, row.prior_upper, row.prior_alpha, row.prior_beta) {
            (None, None, None, None, None) => None,
            (Some(pt), Some(lo), Some(hi), Some(a), Some(b)) => Some(ElicitedBelief {
                interval: ElicitedInterval::new(pt, lo, hi)?,
                fitted: BetaBelief::new(a, b)?,
            }),
            _ => return invalid(format!("{}: prior columns are partially filled", row.participant_id)),
        };
        let record = TrialRecord {
            participant_id: row.participant_id,
            condition: row.condition,
            dataset: row.dataset,
            prior,
            posterior: ElicitedBelief {
                interval: ElicitedInterval::new(row.posterior_point, row.posterior_lower, row.posterior_upper)?,
                fitted: BetaBelief::new(row.posterior_alpha, row.posterior_beta)?,
            },
            trust_rating: row.trust_rating,
            demographics: Demographics {
                gender: row.gender,
                education: row.education,
                age_band: row.age_band,
            },
            exclusion_answer: row.exclusion_answer,
            timestamps: Timestamps {
                intro: row.t_intro,
                prior: row.t_prior,
                stimulus: row.t_stimulus,
                assistance: row.t_assistance,
                posterior: row.t_posterior,
                post_task: row.t_post_task,
            },
        };
        if record.excluded() != row.excluded {
            return invalid(format!("{}: excluded flag disagrees with the attention check", record.participant_id));
        }
        record.validate()?;
        Ok(record)
    }
}

fn csv_error(e: csv::Error) -> BeliefError {
    BeliefError::InvalidInput(format!("csv: {e}"))
}

/// Write records (schema line, header, rows). The header is written even
/// when there are no records.
pub fn write_records<W: Write>(mut out: W, records: &[TrialRecord]) -> Result<()> {
    writeln!(out, "{SCHEMA_LINE}").map_err(|e| BeliefError::InvalidInput(format!("write: {e}")))?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(COLUMNS).map_err(csv_error)?;
    for r in records {
        w.serialize(Row::from(r)).map_err(csv_error)?;
    }
    w.flush().map_err(|e| BeliefError::InvalidInput(format!("write: {e}")))?;
    Ok(())
}

pub fn records_to_string(records: &[TrialRecord]) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn read_records<R: Read>(mut input: R) -> Result<Vec<TrialRecord>> {
    let mut text = String::new();
    input
        .read_to_string(&mut text)
        .map_err(|e| BeliefError::InvalidInput(format!("read: {e}")))?;
    let body = match text.split_once('\n') {
        Some((first, rest)) if first.trim_end() == SCHEMA_LINE => rest,
        _ => return invalid(format!("missing {SCHEMA_LINE} line")),
    };
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let header = reader.headers().map_err(csv_error)?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return invalid("header does not match schema 1");
    }
    reader
        .deserialize::<Row>()
        .map(|row| TrialRecord::try_from(row.map_err(csv_error)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit_beta;

    fn belief(p: f64, l: f64, u: f64) -> ElicitedBelief {
        let interval = ElicitedInterval::new(p, l, u).unwrap();
        ElicitedBelief {
            interval,
            fitted: fit_beta(&interval).unwrap(),
        }
    }

    pub(crate) fn record(id: &str, condition: Condition, answer: ExclusionAnswer) -> TrialRecord {
        TrialRecord {
            participant_id: id.into(),
            condition,
            dataset: Dataset::DementiaSmall,
            prior: condition.elicits_prior().then(|| belief(0.3, 0.1, 0.6)),
            posterior: belief(0.4, 0.33, 0.47),
            trust_rating: 4,
            demographics: Demographics {
                gender: "woman".into(),
                education: "bachelor".into(),
                age_band: "25-34".into(),
            },
            exclusion_answer: answer,
            timestamps: Timestamps {
                intro: Some(1),
                prior: condition.elicits_prior().then_some(2),
                stimulus: Some(3),
                assistance: None,
                posterior: Some(5),
                post_task: Some(6),
            },
        }
    }

    #[test]
    fn stimuli_counts() {
        assert_eq!(Dataset::DementiaSmall.observed().successes(), 66);
        assert_eq!(Dataset::DementiaLarge.observed().successes(), 2187);
        assert_eq!(Dataset::AbortionSmall.observed().successes(), 58);
        assert_eq!(Dataset::AbortionLarge.observed().successes(), 1927);
    }

    #[test]
    fn exclusion_flag() {
        assert!(record("a", Condition::Analogy, ExclusionAnswer::Above60).excluded());
        assert!(record("a", Condition::Analogy, ExclusionAnswer::Below30).excluded());
        assert!(!record("a", Condition::Analogy, ExclusionAnswer::Between30And60).excluded());
    }

    #[test]
    fn prior_presence_matches_condition() {
        let mut r = record("a", Condition::NoElicitPoint, ExclusionAnswer::Between30And60);
        assert!(r.validate().is_ok());
        r.prior = Some(belief(0.3, 0.1, 0.6));
        assert!(r.validate().is_err());
        let mut r = record("b", Condition::PosteriorVis, ExclusionAnswer::Between30And60);
        r.prior = None;
        assert!(r.validate().is_err());
    }

    #[test]
    fn empty_export_is_header_only() {
        let s = records_to_string(&[]);
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines, vec![SCHEMA_LINE, &COLUMNS.join(",")]);
        assert!(read_records(s.as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn round_trip_is_exact() {
        let records: Vec<_> = Condition::ALL
            .iter()
            .enumerate()
            .map(|(i, c)| record(&format!("p{i}"), *c, ExclusionAnswer::Between30And60))
            .collect();
        let s = records_to_string(&records);
        assert_eq!(read_records(s.as_bytes()).unwrap(), records);
        assert!(s.contains(",0.3,0.1,0.6,"), "proportions are decimals: {s}");
    }

    #[test]
    fn rejects_bad_files() {
        assert!(read_records("participant_id\n".as_bytes()).is_err());
        let good = records_to_string(&[record("a", Condition::Analogy, ExclusionAnswer::Between30And60)]);
        let tampered = good.replace(",66,158,", ",67,158,");
        assert!(read_records(tampered.as_bytes()).is_err());
        let flipped = good.replace(",between_30_60,false,", ",between_30_60,true,");
        assert!(read_records(flipped.as_bytes()).is_err());
    }
}
