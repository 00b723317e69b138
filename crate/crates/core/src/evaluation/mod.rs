//! Deviation of elicited posteriors from normative ones.

pub mod batch;
pub mod classify;
pub mod kld;
pub mod summary;

pub use batch::{evaluate_records, read_scores, write_scores, Evaluation, EvaluationOptions, ScoreRow};
pub use classify::{
    classify_location, classify_location_means, classify_variance, LocationType, UpdateClassification, VarianceType,
};
pub use kld::{deviation, kl_divergence, DeviationScore};
pub use summary::{summarize_log_kld, LogKldSummary};
