use std::f64::consts::SQRT_2;

use belief_core::special::normal_cdf;
use serde::{Deserialize, Serialize};

use crate::error::{AnalysisError, Result};
use crate::lognormal::{ConditionCode, RegressionFit};

/// Common-language effect size for a standardised mean difference between
/// two normal populations.
pub fn cles_from_d(d: f64) -> f64 {
    normal_cdf(d / SQRT_2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectSize {
    pub condition: ConditionCode,
    pub reference_mean: f64,
    pub reference_sd: f64,
    pub condition_mean: f64,
    pub condition_sd: f64,
    /// Positive when the condition has lower log KLD than the reference.
    pub cohens_d: f64,
    pub cles: f64,
}

/// Aggregate log-KLD distribution of one condition: posterior mean of the
/// bias submodel and of the dispersion submodel's SD.
fn aggregate(fit: &RegressionFit, code: ConditionCode) -> (f64, f64) {
    let g = code.group();
    let n = fit.draws.len() as f64;
    let (mut mean, mut sd) = (0.0, 0.0);
    for d in &fit.draws {
        let (mu, log_sigma) = if g == 0 { (d[0], d[4]) } else { (d[0] + d[g], d[4] + d[4 + g]) };
        mean += mu / n;
        sd += log_sigma.exp() / n;
    }
    (mean, sd)
}

pub fn effect_size(fit: &RegressionFit, code: ConditionCode) -> Result<EffectSize> {
    if !fit.converged {
        return Err(AnalysisError::NotConverged { max_r_hat: fit.max_r_hat });
    }
    let (reference_mean, reference_sd) = aggregate(fit, ConditionCode::REFERENCE);
    let (condition_mean, condition_sd) = aggregate(fit, code);
    let pooled = ((reference_sd.powi(2) + condition_sd.powi(2)) / 2.0).sqrt();
    let cohens_d = (reference_mean - condition_mean) / pooled;
    Ok(EffectSize {
        condition: code,
        reference_mean,
        reference_sd,
        condition_mean,
        condition_sd,
        cohens_d,
        cles: cles_from_d(cohens_d),
    })
}
