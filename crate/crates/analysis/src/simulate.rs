//! Synthetic participants following named update rules.

use std::fmt;
use std::str::FromStr;

use belief_core::elicitation::quantize;
use belief_core::record::{Demographics, Timestamps};
use belief_core::{
    fit_beta, hdi, likelihood_belief, posterior_update, BetaBelief, Condition, Dataset, ElicitedBelief,
    ElicitedInterval, ExclusionAnswer, ObservedData, TrialRecord, ELICITED_MASS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, AnalysisError, Result};

/// Range of the latent prior mode.
pub const PRIOR_MODE_RANGE: (f64, f64) = (0.05, 0.95);
/// Range of the latent prior concentration (drawn log-uniformly).
pub const PRIOR_KAPPA_RANGE: (f64, f64) = (4.0, 400.0);
// Keeps an overshooting mean inside the unit interval.
const MEAN_LIMIT: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateRule {
    /// Exact conjugate update.
    Bayesian,
    /// Reports the likelihood.
    IgnorePrior,
    /// Reports the prior unchanged.
    IgnoreData,
    /// Moves past the data: mean = m_lik + gamma (m_lik - m_prior), with
    /// the normative concentration.
    Overshoot(f64),
    /// Normative mean with variance multiplied by rho.
    VarianceInflate(f64),
}

impl fmt::Display for UpdateRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpdateRule::Bayesian => write!(f, "bayesian"),
            UpdateRule::IgnorePrior => write!(f, "ignore_prior"),
            UpdateRule::IgnoreData => write!(f, "ignore_data"),
            UpdateRule::Overshoot(g) => write!(f, "overshoot:{g}"),
            UpdateRule::VarianceInflate(r) => write!(f, "variance_inflate:{r}"),
        }
    }
}

impl FromStr for UpdateRule {
    type Err = AnalysisError;

    /// Accepts `name`, `name:value` or `name(value)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once([':', '(']) {
            Some((n, rest)) => (n, Some(rest.trim_end_matches(')'))),
            None => (s, None),
        };
        let value = |default: Option<f64>| -> Result<f64> {
            match arg {
                Some(a) => a
                    .parse::<f64>()
                    .map_err(|_| AnalysisError::InvalidInput(format!("bad rule parameter {a:?}"))),
                None => default.ok_or_else(|| AnalysisError::InvalidInput(format!("rule {name} needs a parameter"))),
            }
        };
        let rule = match name {
            "bayesian" => UpdateRule::Bayesian,
            "ignore_prior" => UpdateRule::IgnorePrior,
            "ignore_data" => UpdateRule::IgnoreData,
            "overshoot" => UpdateRule::Overshoot(value(Some(0.5))?),
            "variance_inflate" => UpdateRule::VarianceInflate(value(Some(2.0))?),
            other => return invalid(format!("unknown update rule {other:?}")),
        };
        if arg.is_some() && matches!(rule, UpdateRule::Bayesian | UpdateRule::IgnorePrior | UpdateRule::IgnoreData) {
            return invalid(format!("rule {name} takes no parameter"));
        }
        match rule {
            UpdateRule::Overshoot(g) if !(g.is_finite() && g >= 0.0) => invalid("overshoot gamma must be >= 0"),
            UpdateRule::VarianceInflate(r) if !(r.is_finite() && r > 0.0) => invalid("variance_inflate rho must be > 0"),
            _ => Ok(rule),
        }
    }
}

/// The posterior a participant following `rule` would report.
pub fn apply_rule(rule: UpdateRule, prior: &BetaBelief, data: &ObservedData) -> Result<BetaBelief> {
    let normative = posterior_update(prior, data);
    let likelihood = likelihood_belief(data);
    Ok(match rule {
        UpdateRule::Bayesian => normative,
        UpdateRule::IgnorePrior => likelihood,
        UpdateRule::IgnoreData => *prior,
        UpdateRule::Overshoot(gamma) => {
            let m = likelihood.mean() + gamma * (likelihood.mean() - prior.mean());
            let m = m.clamp(MEAN_LIMIT, 1.0 - MEAN_LIMIT);
            let k = normative.concentration();
            BetaBelief::new(m * k, (1.0 - m) * k)?
        }
        UpdateRule::VarianceInflate(rho) => {
            // Beta variance is m (1 - m) / (k + 1).
            let k = (normative.concentration() + 1.0) / rho - 1.0;
            if k <= 0.0 {
                return invalid(format!("variance_inflate:{rho} exceeds what a Beta with this mean can hold"));
            }
            let m = normative.mean();
            BetaBelief::new(m * k, (1.0 - m) * k)?
        }
    })
}

/// How a simulated participant's beliefs end up in the record.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reporting {
    /// The stored fitted Beta is the participant's belief itself.
    #[default]
    Exact,
    /// The participant sets the slider (0.1 pp resolution) to the HDI of
    /// their belief and the record stores the refit of that interval.
    Slider,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub rule: UpdateRule,
    pub n: usize,
    /// Fixed stimulus; otherwise datasets rotate.
    pub dataset: Option<Dataset>,
    /// Conditions assigned in rotation.
    pub conditions: Vec<Condition>,
    pub reporting: Reporting,
    /// Range of the latent prior mode.
    pub prior_mode: (f64, f64),
    /// Range of the latent prior concentration, sampled log-uniformly.
    pub prior_kappa: (f64, f64),
    pub seed: u64,
}

impl SimulationConfig {
    pub fn new(rule: UpdateRule, n: usize, seed: u64) -> Self {
        Self {
            rule,
            n,
            dataset: None,
            conditions: Condition::ELICITATION.to_vec(),
            reporting: Reporting::Exact,
            prior_mode: PRIOR_MODE_RANGE,
            prior_kappa: PRIOR_KAPPA_RANGE,
            seed,
        }
    }
}

fn report(belief: BetaBelief, reporting: Reporting) -> Result<ElicitedBelief> {
    let point = if belief.is_unimodal() { belief.mode()? } else { belief.mean() };
    let h = hdi(&belief, ELICITED_MASS)?;
    match reporting {
        Reporting::Exact => Ok(ElicitedBelief {
            interval: ElicitedInterval::new(point, h.lower.min(point), h.upper.max(point))?,
            fitted: belief,
        }),
        Reporting::Slider => {
            let point = quantize(point);
            let interval = ElicitedInterval::new(point, quantize(h.lower).min(point), quantize(h.upper).max(point))?;
            Ok(ElicitedBelief { interval, fitted: fit_beta(&interval)? })
        }
    }
}

fn latent_prior(config: &SimulationConfig, rng: &mut ChaCha20Rng) -> Result<BetaBelief> {
    let mode = rng.random_range(config.prior_mode.0..=config.prior_mode.1);
    let log_kappa = rng.random_range(config.prior_kappa.0.ln()..=config.prior_kappa.1.ln());
    Ok(BetaBelief::from_mode_concentration(mode, log_kappa.exp())?)
}

/// Generate `config.n` complete, non-excluded trial records.
///
/// The rule is applied to the prior as recorded, so a Bayesian population
/// reports exactly the normative posterior that evaluation recomputes.
pub fn simulate_population(config: &SimulationConfig) -> Result<Vec<TrialRecord>> {
    if config.conditions.is_empty() {
        return invalid("at least one condition is required");
    }
    let (m0, m1) = config.prior_mode;
    let (k0, k1) = config.prior_kappa;
    if !(0.0 <= m0 && m0 <= m1 && m1 <= 1.0) || !(2.0 <= k0 && k0 <= k1 && k1 <= 1e6) {
        return invalid("prior mode range must lie in [0, 1] and concentration range in [2, 1e6]");
    }
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let per_dataset = config.conditions.len();
    (0..config.n)
        .map(|i| {
            let condition = config.conditions[i % per_dataset];
            let dataset = config.dataset.unwrap_or(Dataset::ALL[(i / per_dataset) % Dataset::ALL.len()]);
            let data = dataset.observed();
            let stated = report(latent_prior(config, &mut rng)?, config.reporting)?;
            let posterior = report(apply_rule(config.rule, &stated.fitted, &data)?, config.reporting)?;
            let start = 1_700_000_000_000 + i as i64 * 3_600_000;
            let elicits = condition.elicits_prior();
            let record = TrialRecord {
                participant_id: format!("sim-{i:05}"),
                condition,
                dataset,
                prior: elicits.then_some(stated),
                posterior,
                trust_rating: 3,
                demographics: Demographics::default(),
                exclusion_answer: ExclusionAnswer::Between30And60,
                timestamps: Timestamps {
                    intro: Some(start),
                    prior: elicits.then_some(start + 60_000),
                    stimulus: Some(start + 120_000),
                    assistance: condition.has_assistance().then_some(start + 150_000),
                    posterior: Some(start + 180_000),
                    post_task: Some(start + 240_000),
                },
            };
            record.validate()?;
            Ok(record)
        })
        .collect()
}
