//! Bayesian assistance built from a participant's own prior: the
//! uncertainty analogy and the predicted-posterior visualisation payload.

use serde::{Deserialize, Serialize};

use crate::belief::{posterior_update, BetaBelief, ObservedData, ELICITED_MASS};
use crate::density::{focused_polyline, DensityPoint};
use crate::error::{invalid, Result};
use crate::hdi::hdi;
use crate::text::{one_decimal, percent, render, Templates};

/// Which side carries more information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalogyReference {
    PriorRicher,
    DataRicher,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analogy {
    pub reference: AnalogyReference,
    /// Larger concentration over smaller, so never below 1.
    pub multiplier: f64,
    pub display_multiplier: String,
    pub sentence: String,
    pub explanation: String,
    pub prior_concentration: f64,
    pub data_concentration: f64,
}

impl Analogy {
    pub fn is_equal_information(&self) -> bool {
        self.multiplier == 1.0
    }
}

/// Concentration of the data in Beta form, `n + 2`, matching `alpha + beta`
/// of its likelihood Beta.
pub fn data_concentration(data: &ObservedData) -> f64 {
    data.sample_size() as f64 + 2.0
}

pub fn display_multiplier(multiplier: f64) -> String {
    if multiplier >= 10.0 {
        format!("{}", multiplier.round())
    } else {
        one_decimal(multiplier)
    }
}

pub fn make_analogy(prior: &BetaBelief, data: &ObservedData) -> Result<Analogy> {
    analogy_from_concentrations(prior.concentration(), data_concentration(data), Templates::english())
}

pub fn analogy_from_concentrations(prior_kappa: f64, data_kappa: f64, text: &Templates) -> Result<Analogy> {
    if !(prior_kappa.is_finite() && prior_kappa >= 2.0) {
        return invalid(format!("prior concentration must be at least 2, got {prior_kappa}"));
    }
    if !(data_kappa.is_finite() && data_kappa >= 3.0) {
        return invalid(format!("data concentration must be at least 3, got {data_kappa}"));
    }
    let (reference, multiplier) = if prior_kappa > data_kappa {
        (AnalogyReference::PriorRicher, prior_kappa / data_kappa)
    } else {
        (AnalogyReference::DataRicher, data_kappa / prior_kappa)
    };
    let display = display_multiplier(multiplier);
    let sentence = if multiplier == 1.0 {
        text.analogy.equal.clone()
    } else {
        let template = match reference {
            AnalogyReference::PriorRicher => &text.analogy.prior_richer,
            AnalogyReference::DataRicher => &text.analogy.data_richer,
        };
        render(template, &[("multiplier", &display)])
    };
    let explanation = render(
        &text.analogy.explanation,
        &[
            ("data_size", &format!("{}", data_kappa.round())),
            ("prior_size", &format!("{}", prior_kappa.round())),
        ],
    );
    Ok(Analogy {
        reference,
        multiplier,
        display_multiplier: display,
        sentence,
        explanation,
        prior_concentration: prior_kappa,
        data_concentration: data_kappa,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorVisPayload {
    pub posterior: BetaBelief,
    pub density_points: Vec<DensityPoint>,
    pub interval_95: (f64, f64),
    /// Posterior mean.
    pub point_estimate: f64,
    pub explanation: String,
}

pub fn make_posterior_vis(prior: &BetaBelief, data: &ObservedData) -> Result<PosteriorVisPayload> {
    let posterior = posterior_update(prior, data);
    let interval = hdi(&posterior, ELICITED_MASS)?;
    let analogy = make_analogy(prior, data)?;
    let point_estimate = posterior.mean();
    let explanation = render(
        &Templates::english().posterior.explanation,
        &[
            ("analogy", &analogy.sentence),
            ("point", &percent(point_estimate)),
            ("lower", &percent(interval.lower)),
            ("upper", &percent(interval.upper)),
        ],
    );
    Ok(PosteriorVisPayload {
        posterior,
        density_points: focused_polyline(&posterior),
        interval_95: (interval.lower, interval.upper),
        point_estimate,
        explanation,
    })
}
