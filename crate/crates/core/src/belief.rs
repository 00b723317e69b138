//! Beta beliefs, observed proportions and elicited intervals, plus the
//! conjugate update rules that connect them.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::special;

/// A Beta(alpha, beta) belief about a proportion.
///
/// `alpha - 1` and `beta - 1` read as pseudo-counts of successes and
/// failures; `alpha + beta` is the concentration, a stand-in for how many
/// observations the belief is worth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBeta")]
pub struct BetaBelief {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawBeta {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawBeta> for BetaBelief {
    type Error = crate::BeliefError;

    fn try_from(raw: RawBeta) -> Result<Self> {
        BetaBelief::new(raw.alpha, raw.beta)
    }
}

impl BetaBelief {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return invalid(format!("Beta parameters must be finite, got ({alpha}, {beta})"));
        }
        if alpha <= 0.0 || beta <= 0.0 {
            return invalid(format!("Beta parameters must be positive, got ({alpha}, {beta})"));
        }
        Ok(Self { alpha, beta })
    }

    pub fn uniform() -> Self {
        Self { alpha: 1.0, beta: 1.0 }
    }

    /// Beta with the given mode and concentration:
    /// `alpha = 1 + mode (kappa - 2)`, `beta = 1 + (1 - mode)(kappa - 2)`.
    pub fn from_mode_concentration(mode: f64, kappa: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mode) {
            return invalid(format!("mode must lie in [0, 1], got {mode}"));
        }
        if !kappa.is_finite() || kappa < 2.0 {
            return invalid(format!("concentration must be finite and at least 2, got {kappa}"));
        }
        let spread = kappa - 2.0;
        Self::new(1.0 + mode * spread, 1.0 + (1.0 - mode) * spread)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// kappa = alpha + beta.
    pub fn concentration(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    pub fn variance(&self) -> f64 {
        let k = self.alpha + self.beta;
        self.alpha * self.beta / (k * k * (k + 1.0))
    }

    /// Mode `(alpha - 1) / (alpha + beta - 2)`; only defined when both
    /// shapes exceed one.
    pub fn mode(&self) -> Result<f64> {
        if self.is_unimodal() {
            Ok((self.alpha - 1.0) / (self.alpha + self.beta - 2.0))
        } else {
            invalid(format!(
                "mode of Beta({}, {}) is undefined: both shapes must exceed 1",
                self.alpha, self.beta
            ))
        }
    }

    /// Interior single peak (alpha > 1 and beta > 1).
    pub fn is_unimodal(&self) -> bool {
        self.alpha > 1.0 && self.beta > 1.0
    }

    /// Mirror image about 0.5 (shapes swapped).
    pub fn reflect(&self) -> Self {
        Self { alpha: self.beta, beta: self.alpha }
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return f64::NEG_INFINITY;
        }
        let a1 = self.alpha - 1.0;
        let b1 = self.beta - 1.0;
        // 0 * ln(0) is taken as 0 so boundary densities of Beta(1, b) stay finite.
        let left = if a1 == 0.0 { 0.0 } else { a1 * x.ln() };
        let right = if b1 == 0.0 { 0.0 } else { b1 * (-x).ln_1p() };
        left + right - special::ln_beta(self.alpha, self.beta)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        special::beta_reg(self.alpha, self.beta, x)
    }

    pub fn quantile(&self, p: f64) -> f64 {
        special::beta_reg_inv(self.alpha, self.beta, p)
    }
}

/// A sample proportion: `successes` out of `sample_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawObserved")]
pub struct ObservedData {
    successes: u64,
    sample_size: u64,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub source_description: String,
}

#[derive(Deserialize)]
struct RawObserved {
    successes: u64,
    sample_size: u64,
    #[serde(default)]
    label: String,
    #[serde(default)]
    source_description: String,
}

impl TryFrom<RawObserved> for ObservedData {
    type Error = crate::BeliefError;

    fn try_from(raw: RawObserved) -> Result<Self> {
        let mut data = ObservedData::new(raw.successes, raw.sample_size)?;
        data.label = raw.label;
        data.source_description = raw.source_description;
        Ok(data)
    }
}

impl ObservedData {
    pub fn new(successes: u64, sample_size: u64) -> Result<Self> {
        if sample_size == 0 {
            return invalid("sample size must be positive");
        }
        if successes > sample_size {
            return invalid(format!("{successes} successes exceed sample size {sample_size}"));
        }
        Ok(Self {
            successes,
            sample_size,
            label: String::new(),
            source_description: String::new(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>, description: impl Into<String>) -> Self {
        self.label = label.into();
        self.source_description = description.into();
        self
    }

    /// Successes for a reported proportion of a sample, rounded half up.
    pub fn from_proportion(proportion: f64, sample_size: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&proportion) {
            return invalid(format!("proportion must lie in [0, 1], got {proportion}"));
        }
        let successes = round_half_up(proportion * sample_size as f64) as u64;
        Self::new(successes, sample_size)
    }

    pub fn successes(&self) -> u64 {
        self.successes
    }

    pub fn failures(&self) -> u64 {
        self.sample_size - self.successes
    }

    pub fn sample_size(&self) -> u64 {
        self.sample_size
    }

    pub fn proportion(&self) -> f64 {
        self.successes as f64 / self.sample_size as f64
    }
}

// Products like 0.37 * 158 land a few ulps off their decimal value, so the
// half-way test carries a small slack.
fn round_half_up(x: f64) -> f64 {
    (x + 0.5 + 1e-9).floor()
}

/// Probability mass of every elicited interval.
pub const ELICITED_MASS: f64 = 0.95;

/// A point estimate with an interval around it, as entered through the
/// two-handle slider. Proportions are decimals in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct ElicitedInterval {
    pub point_estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub mass: f64,
}

#[derive(Deserialize)]
struct RawInterval {
    point_estimate: f64,
    lower: f64,
    upper: f64,
    #[serde(default = "default_mass")]
    mass: f64,
}

fn default_mass() -> f64 {
    ELICITED_MASS
}

impl TryFrom<RawInterval> for ElicitedInterval {
    type Error = crate::BeliefError;

    fn try_from(raw: RawInterval) -> Result<Self> {
        if (raw.mass - ELICITED_MASS).abs() > 1e-12 {
            return invalid(format!("elicited intervals carry 0.95 mass, got {}", raw.mass));
        }
        ElicitedInterval::new(raw.point_estimate, raw.lower, raw.upper)
    }
}

impl ElicitedInterval {
    pub fn new(point_estimate: f64, lower: f64, upper: f64) -> Result<Self> {
        for (name, v) in [("point estimate", point_estimate), ("lower", lower), ("upper", upper)] {
            if !v.is_finite() {
                return invalid(format!("{name} must be finite, got {v}"));
            }
            if !(0.0..=1.0).contains(&v) {
                return invalid(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if !(lower <= point_estimate && point_estimate <= upper) {
            return invalid(format!(
                "interval must satisfy lower <= point <= upper, got {lower} <= {point_estimate} <= {upper}"
            ));
        }
        Ok(Self {
            point_estimate,
            lower,
            upper,
            mass: ELICITED_MASS,
        })
    }

    /// The 0-100% interval that stands for a flat prior.
    pub fn is_full_range(&self) -> bool {
        self.lower <= 0.0 && self.upper >= 1.0
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Beta form of the Binomial likelihood: `Beta(s + 1, n - s + 1)`.
pub fn likelihood_belief(data: &ObservedData) -> BetaBelief {
    BetaBelief {
        alpha: data.successes as f64 + 1.0,
        beta: data.failures() as f64 + 1.0,
    }
}

/// Normative conjugate posterior: successes and failures add to the prior's
/// pseudo-counts.
pub fn posterior_update(prior: &BetaBelief, data: &ObservedData) -> BetaBelief {
    BetaBelief {
        alpha: prior.alpha + data.successes as f64,
        beta: prior.beta + data.failures() as f64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalPosterior {
    pub mean: f64,
    pub precision: f64,
}

/// Normal-Normal update: precisions add and the mean is the
/// precision-weighted average of prior and data means.
pub fn normal_posterior_update(
    prior_mean: f64,
    prior_precision: f64,
    data_mean: f64,
    data_precision: f64,
) -> Result<NormalPosterior> {
    for v in [prior_mean, prior_precision, data_mean, data_precision] {
        if !v.is_finite() {
            return invalid("normal update inputs must be finite");
        }
    }
    if prior_precision <= 0.0 || data_precision <= 0.0 {
        return invalid(format!(
            "precisions must be positive, got {prior_precision} and {data_precision}"
        ));
    }
    let precision = prior_precision + data_precision;
    let mean = (prior_precision * prior_mean + data_precision * data_mean) / precision;
    Ok(NormalPosterior { mean, precision })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(BetaBelief::new(0.0, 1.0).is_err());
        assert!(BetaBelief::new(1.0, -2.0).is_err());
        assert!(BetaBelief::new(f64::NAN, 1.0).is_err());
        assert!(BetaBelief::new(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn mode_only_for_unimodal() {
        assert!(BetaBelief::uniform().mode().is_err());
        assert!(BetaBelief::new(1.0, 5.0).unwrap().mode().is_err());
        assert!(BetaBelief::new(0.5, 0.5).unwrap().mode().is_err());
        let b = BetaBelief::new(2.0, 10.0).unwrap();
        assert!((b.mode().unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn moments() {
        let b = BetaBelief::new(422.0, 590.0).unwrap();
        assert!((b.mean() - 422.0 / 1012.0).abs() < 1e-15);
        let v = 422.0 * 590.0 / (1012.0f64.powi(2) * 1013.0);
        assert!((b.variance() - v).abs() < 1e-18);
        assert_eq!(b.concentration(), 1012.0);
    }

    #[test]
    fn boundary_density_is_finite() {
        let b = BetaBelief::new(1.0, 3.0).unwrap();
        assert!((b.pdf(0.0) - 3.0).abs() < 1e-12);
        assert_eq!(b.pdf(1.0), 0.0);
    }

    #[test]
    fn observed_data_validation() {
        assert!(ObservedData::new(5, 0).is_err());
        assert!(ObservedData::new(6, 5).is_err());
        let d = ObservedData::new(420, 1000).unwrap();
        assert!((d.proportion() - 0.42).abs() < 1e-15);
        assert_eq!(d.failures(), 580);
    }

    #[test]
    fn stimulus_rounding_half_up() {
        assert_eq!(ObservedData::from_proportion(0.42, 158).unwrap().successes(), 66);
        assert_eq!(ObservedData::from_proportion(0.42, 5208).unwrap().successes(), 2187);
        assert_eq!(ObservedData::from_proportion(0.37, 158).unwrap().successes(), 58);
        assert_eq!(ObservedData::from_proportion(0.37, 5208).unwrap().successes(), 1927);
        assert_eq!(ObservedData::from_proportion(0.5, 3).unwrap().successes(), 2);
        assert_eq!(ObservedData::from_proportion(0.25, 2).unwrap().successes(), 1);
    }

    #[test]
    fn interval_validation() {
        assert!(ElicitedInterval::new(0.5, 0.6, 0.7).is_err());
        assert!(ElicitedInterval::new(0.5, 0.4, 1.2).is_err());
        assert!(ElicitedInterval::new(f64::NAN, 0.0, 1.0).is_err());
        assert!(ElicitedInterval::new(0.5, 0.0, 1.0).unwrap().is_full_range());
        assert!(ElicitedInterval::new(0.3, 0.3, 0.3).is_ok());
    }

    #[test]
    fn likelihood_examples() {
        let b = likelihood_belief(&ObservedData::new(420, 1000).unwrap());
        assert_eq!((b.alpha(), b.beta()), (421.0, 581.0));
        let b = likelihood_belief(&ObservedData::new(0, 1).unwrap());
        assert_eq!((b.alpha(), b.beta()), (1.0, 2.0));
        // 42% of 158 rounds to 66 successes.
        let b = likelihood_belief(&ObservedData::from_proportion(0.42, 158).unwrap());
        assert_eq!((b.alpha(), b.beta()), (67.0, 93.0));
    }

    #[test]
    fn worked_conjugate_update() {
        let prior = BetaBelief::new(2.0, 10.0).unwrap();
        let post = posterior_update(&prior, &ObservedData::new(420, 1000).unwrap());
        assert_eq!((post.alpha(), post.beta()), (422.0, 590.0));
    }

    #[test]
    fn flat_prior_posterior_is_likelihood_shape() {
        let data = ObservedData::new(37, 90).unwrap();
        assert_eq!(posterior_update(&BetaBelief::uniform(), &data), likelihood_belief(&data));
    }

    #[test]
    fn normal_update_examples() {
        let p = normal_posterior_update(0.0, 4.0, 1.0, 4.0).unwrap();
        assert!((p.mean - 0.5).abs() < 1e-15);
        assert_eq!(p.precision, 8.0);

        let p = normal_posterior_update(0.2, 1e-9, 0.7, 3.0).unwrap();
        assert!((p.mean - 0.7).abs() < 1e-6);

        // (600 * 0.51 + 1000 * 0.60) / 1600 = 0.56625
        let p = normal_posterior_update(0.51, 600.0, 0.60, 1000.0).unwrap();
        assert!((p.mean - 0.56625).abs() < 1e-12);
        assert!((p.mean - 0.566).abs() < 5e-4);

        assert!(normal_posterior_update(0.0, 0.0, 1.0, 1.0).is_err());
        assert!(normal_posterior_update(0.0, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn json_field_names() {
        let b: BetaBelief = serde_json::from_str(r#"{"alpha": 2, "beta": 10}"#).unwrap();
        assert_eq!(b, BetaBelief::new(2.0, 10.0).unwrap());
        assert!(serde_json::from_str::<BetaBelief>(r#"{"alpha": -1, "beta": 10}"#).is_err());

        let d: ObservedData = serde_json::from_str(r#"{"successes": 420, "sample_size": 1000}"#).unwrap();
        assert_eq!(d.successes(), 420);
        assert!(serde_json::from_str::<ObservedData>(r#"{"successes": 2, "sample_size": 1}"#).is_err());

        let e: ElicitedInterval =
            serde_json::from_str(r#"{"point_estimate": 0.23, "lower": 0.15, "upper": 0.33}"#).unwrap();
        assert_eq!(e.mass, 0.95);
        let v = serde_json::to_value(e).unwrap();
        assert_eq!(v["point_estimate"], 0.23);
        assert_eq!(v["lower"], 0.15);
        assert_eq!(v["upper"], 0.33);
    }
}
