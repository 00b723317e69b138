//! Bayesian belief updating for proportions.
//!
//! Elicited beliefs are fitted to Beta distributions, updated against
//! Binomial data by conjugacy, turned into assistance payloads, and compared
//! with the normative posterior.

pub mod assistance;
pub mod belief;
pub mod density;
pub mod elicitation;
pub mod error;
pub mod evaluation;
pub mod fit;
pub mod hdi;
pub mod optimize;
pub mod record;
pub mod special;
pub mod text;

pub use belief::{
    likelihood_belief, normal_posterior_update, posterior_update, BetaBelief, ElicitedInterval, NormalPosterior,
    ObservedData, ELICITED_MASS,
};
pub use error::{BeliefError, Result};
pub use fit::fit_beta;
pub use hdi::{hdi, Interval, IntervalMethod};
pub use elicitation::{begin, drag_handle, ElicitationState, Handle};
pub use assistance::{make_analogy, make_posterior_vis, Analogy, AnalogyReference, PosteriorVisPayload};
pub use record::{Condition, Dataset, ElicitedBelief, ExclusionAnswer, TrialRecord};
