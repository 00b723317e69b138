//! Elicited versus non-elicited comparison of log KLD.

use belief_core::evaluation::{deviation, summary::quantile_sorted};
use belief_core::{posterior_update, BetaBelief, ObservedData, TrialRecord};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, AnalysisError, Result};

/// Fewest elicited priors from which a common prior is built.
pub const MIN_ELICITED_PRIORS: usize = 30;
pub const DEFAULT_RESAMPLES: usize = 10_000;

/// Single Beta matching the mean and variance of the equal-weight mixture
/// of `priors`.
pub fn common_prior(priors: &[BetaBelief]) -> Result<BetaBelief> {
    if priors.is_empty() {
        return invalid("no priors to combine");
    }
    let n = priors.len() as f64;
    let mean = priors.iter().map(BetaBelief::mean).sum::<f64>() / n;
    let second = priors.iter().map(|p| p.variance() + p.mean().powi(2)).sum::<f64>() / n;
    let variance = second - mean * mean;
    if variance <= 0.0 {
        // Only possible through rounding with near-degenerate components.
        return invalid("mixture variance is not positive");
    }
    let kappa = mean * (1.0 - mean) / variance - 1.0;
    Ok(BetaBelief::new(mean * kappa, (1.0 - mean) * kappa)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub n: usize,
    pub mean_log_kld: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub common_prior: BetaBelief,
    pub elicited: GroupReport,
    pub non_elicited: GroupReport,
    /// Non-elicited minus elicited mean log KLD; positive when elicitation
    /// helped.
    pub difference: GroupReport,
    pub resamples: usize,
    pub seed: u64,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn resample_mean(values: &[f64], rng: &mut ChaCha20Rng) -> f64 {
    let n = values.len();
    (0..n).map(|_| values[rng.random_range(0..n)]).sum::<f64>() / n as f64
}

fn interval(mut boots: Vec<f64>) -> (f64, f64) {
    boots.sort_by(f64::total_cmp);
    (quantile_sorted(&boots, 0.025), quantile_sorted(&boots, 0.975))
}

fn check_dataset(records: &[TrialRecord], data: &ObservedData) -> Result<()> {
    for r in records {
        let d = r.observed();
        if d.successes() != data.successes() || d.sample_size() != data.sample_size() {
            return invalid(format!("{} saw a different dataset ({})", r.participant_id, r.dataset.as_str()));
        }
    }
    Ok(())
}

/// Compare log KLD of participants who stated a prior (scored against their
/// own prior) with those who did not (scored against the common prior
/// built from the first group). Means carry percentile bootstrap 95%
/// intervals.
pub fn aggregate_elicitation_analysis(
    elicited: &[TrialRecord],
    non_elicited: &[TrialRecord],
    data: &ObservedData,
    resamples: usize,
    seed: u64,
) -> Result<AggregateReport> {
    if elicited.len() < MIN_ELICITED_PRIORS {
        return Err(AnalysisError::TooFewPriors { found: elicited.len(), required: MIN_ELICITED_PRIORS });
    }
    if non_elicited.is_empty() {
        return invalid("no non-elicited records");
    }
    if resamples == 0 {
        return invalid("resample count must be positive");
    }
    check_dataset(elicited, data)?;
    check_dataset(non_elicited, data)?;

    let priors = elicited
        .iter()
        .map(|r| match &r.prior {
            Some(p) => Ok(p.fitted),
            None => invalid(format!("{} has no elicited prior", r.participant_id)),
        })
        .collect::<Result<Vec<_>>>()?;
    let common = common_prior(&priors)?;

    let score = |prior: &BetaBelief, r: &TrialRecord| -> Result<f64> {
        Ok(deviation(&posterior_update(prior, data), &r.posterior.fitted)?.log_kld)
    };
    let own: Vec<f64> = elicited.iter().zip(&priors).map(|(r, p)| score(p, r)).collect::<Result<_>>()?;
    let shared: Vec<f64> = non_elicited.iter().map(|r| score(&common, r)).collect::<Result<_>>()?;

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut boot_own = Vec::with_capacity(resamples);
    let mut boot_shared = Vec::with_capacity(resamples);
    let mut boot_diff = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let a = resample_mean(&own, &mut rng);
        let b = resample_mean(&shared, &mut rng);
        boot_own.push(a);
        boot_shared.push(b);
        boot_diff.push(b - a);
    }
    let report = |n: usize, m: f64, boots: Vec<f64>| {
        let (ci_lower, ci_upper) = interval(boots);
        GroupReport { n, mean_log_kld: m, ci_lower, ci_upper }
    };
    let (m_own, m_shared) = (mean(&own), mean(&shared));
    Ok(AggregateReport {
        common_prior: common,
        elicited: report(own.len(), m_own, boot_own),
        non_elicited: report(shared.len(), m_shared, boot_shared),
        difference: report(own.len() + shared.len(), m_shared - m_own, boot_diff),
        resamples,
        seed,
    })
}
