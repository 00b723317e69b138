//! Statistical analyses over scored trials.

pub mod aggregate;
pub mod diagnostics;
pub mod effect;
pub mod error;
pub mod lognormal;
pub mod sampler;
pub mod simulate;

pub use aggregate::{aggregate_elicitation_analysis, common_prior, AggregateReport, GroupReport};
pub use effect::{cles_from_d, effect_size, EffectSize};
pub use error::{AnalysisError, Result};
pub use lognormal::{fit_lognormal_model, ConditionCode, RegressionFit, COEFFICIENTS};
pub use sampler::SamplerConfig;
pub use simulate::{apply_rule, simulate_population, Reporting, SimulationConfig, UpdateRule};
