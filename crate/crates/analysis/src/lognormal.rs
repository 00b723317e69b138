//! Bias and dispersion regression of KLD on presentation condition.
//!
//! `kld ~ LogNormal(mu, sigma)` with `mu` linear in the condition dummies and
//! `log sigma` linear in the same dummies. Priors are Normal(0, 5) on the
//! `mu` coefficients and Normal(0, 2.5) on the `sigma` coefficients (both
//! standard deviations).

use belief_core::Condition;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::diagnostics::summarize;
use crate::error::{invalid, Result};
use crate::sampler::{sample, LogDensity, SamplerConfig};

pub const MU_PRIOR_SD: f64 = 5.0;
pub const SIGMA_PRIOR_SD: f64 = 2.5;
/// Fits with any split R-hat above this are flagged non-converged.
pub const MAX_R_HAT: f64 = 1.05;

pub const COEFFICIENTS: [&str; 8] = [
    "mu_int",
    "mu_post",
    "mu_anlg",
    "mu_pointEst",
    "sigma_int",
    "sigma_post",
    "sigma_anlg",
    "sigma_pointEst",
];

/// Dummy coding of the presentation conditions. All zeros is the
/// uncertainty-visualisation reference.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConditionCode {
    pub post: bool,
    pub analogy: bool,
    pub point_est: bool,
}

impl ConditionCode {
    pub const REFERENCE: Self = Self { post: false, analogy: false, point_est: false };
    pub const POST: Self = Self { post: true, analogy: false, point_est: false };
    pub const ANALOGY: Self = Self { post: false, analogy: true, point_est: false };
    pub const POINT_EST: Self = Self { post: false, analogy: false, point_est: true };
    pub const ALL: [Self; 4] = [Self::REFERENCE, Self::POST, Self::ANALOGY, Self::POINT_EST];

    pub fn new(post: bool, analogy: bool, point_est: bool) -> Result<Self> {
        if [post, analogy, point_est].iter().filter(|&&b| b).count() > 1 {
            return invalid("at most one condition indicator may be set");
        }
        Ok(Self { post, analogy, point_est })
    }

    /// 0 for the reference, 1..=3 for post, analogy, point estimate.
    pub fn group(self) -> usize {
        match (self.post, self.analogy, self.point_est) {
            (true, _, _) => 1,
            (_, true, _) => 2,
            (_, _, true) => 3,
            _ => 0,
        }
    }

    pub fn from_group(group: usize) -> Option<Self> {
        Self::ALL.get(group).copied()
    }

    /// Code for an elicitation condition; the two no-elicitation
    /// conditions are not part of the regression.
    pub fn from_condition(condition: Condition) -> Option<Self> {
        match condition {
            Condition::UncertaintyVis => Some(Self::REFERENCE),
            Condition::PosteriorVis => Some(Self::POST),
            Condition::Analogy => Some(Self::ANALOGY),
            Condition::PointEstimate => Some(Self::POINT_EST),
            Condition::NoElicitPoint | Condition::NoElicitUncertainty => None,
        }
    }

    pub fn label(self) -> &'static str {
        ["reference", "post", "analogy", "point_est"][self.group()]
    }
}

/// Sufficient statistics of log KLD within one condition group.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct GroupStats {
    n: f64,
    mean: f64,
    ss: f64,
}

struct Model {
    groups: [GroupStats; 4],
    /// Coefficient index for each sampled coordinate.
    sampled: Vec<usize>,
    scale_hint: f64,
}

impl Model {
    fn expand(&self, x: &[f64]) -> [f64; 8] {
        let mut theta = [0.0; 8];
        for (&k, &v) in self.sampled.iter().zip(x) {
            theta[k] = v;
        }
        theta
    }
}

impl LogDensity for Model {
    fn dim(&self) -> usize {
        self.sampled.len()
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        let theta = self.expand(x);
        let mut lp = 0.0;
        for &k in &self.sampled {
            let sd = if k < 4 { MU_PRIOR_SD } else { SIGMA_PRIOR_SD };
            lp -= 0.5 * (theta[k] / sd).powi(2);
        }
        for (g, s) in self.groups.iter().enumerate() {
            if s.n == 0.0 {
                continue;
            }
            let (mu, log_sigma) = if g == 0 {
                (theta[0], theta[4])
            } else {
                (theta[0] + theta[g], theta[4] + theta[4 + g])
            };
            lp += -s.n * log_sigma - (s.ss + s.n * (s.mean - mu).powi(2)) * 0.5 * (-2.0 * log_sigma).exp();
        }
        lp
    }

    fn initial_scale(&self, _i: usize) -> f64 {
        self.scale_hint
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSummary {
    pub name: String,
    /// False when the coefficient's condition had no records; it is then
    /// held at zero rather than sampled.
    pub active: bool,
    pub mean: f64,
    pub sd: f64,
    pub lower: f64,
    pub upper: f64,
    pub r_hat: Option<f64>,
    pub ess: Option<f64>,
    pub mcse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDiagnostics {
    pub chain: usize,
    /// Acceptance rate per coefficient; `None` for inactive ones.
    pub acceptance: Vec<Option<f64>>,
    pub step_sizes: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub coefficients: Vec<String>,
    pub config: SamplerConfig,
    pub records: usize,
    pub group_sizes: [usize; 4],
    pub summaries: Vec<CoefficientSummary>,
    pub chain_diagnostics: Vec<ChainDiagnostics>,
    pub converged: bool,
    pub max_r_hat: f64,
    /// Kept draws, chain-major, one row of all eight coefficients per draw.
    #[serde(skip)]
    pub draws: Vec<[f64; 8]>,
}

impl RegressionFit {
    pub fn summary(&self, name: &str) -> Option<&CoefficientSummary> {
        self.summaries.iter().find(|s| s.name == name)
    }

    pub fn draws_per_chain(&self) -> usize {
        self.config.draws
    }

    pub fn column(&self, k: usize) -> impl Iterator<Item = f64> + '_ {
        self.draws.iter().map(move |d| d[k])
    }
}

/// Fit the bias/dispersion model. Condition dummies with no records are
/// dropped from the model (held at zero) so that single-condition data can
/// still be fitted.
pub fn fit_lognormal_model(records: &[(f64, ConditionCode)], config: &SamplerConfig) -> Result<RegressionFit> {
    if records.is_empty() {
        return invalid("no records to fit");
    }
    let mut logs: [Vec<f64>; 4] = Default::default();
    for (i, &(kld, code)) in records.iter().enumerate() {
        if !(kld > 0.0 && kld.is_finite()) {
            return invalid(format!("record {i}: kld must be positive and finite, got {kld}"));
        }
        ConditionCode::new(code.post, code.analogy, code.point_est)?;
        logs[code.group()].push(kld.ln());
    }
    let mut groups = [GroupStats::default(); 4];
    for (g, ys) in logs.iter().enumerate() {
        if ys.is_empty() {
            continue;
        }
        let n = ys.len() as f64;
        let mean = ys.iter().sum::<f64>() / n;
        let ss = ys.iter().map(|y| (y - mean).powi(2)).sum();
        groups[g] = GroupStats { n, mean, ss };
    }
    let mut sampled = vec![0, 4];
    for (g, stats) in groups.iter().enumerate().skip(1) {
        if stats.n > 0.0 {
            sampled.extend([g, 4 + g]);
        }
    }
    sampled.sort_unstable();

    let all: Vec<f64> = logs.iter().flatten().copied().collect();
    let n = all.len() as f64;
    let overall_mean = all.iter().sum::<f64>() / n;
    let overall_sd = (all.iter().map(|y| (y - overall_mean).powi(2)).sum::<f64>() / n).sqrt();
    let model = Model {
        groups,
        sampled: sampled.clone(),
        scale_hint: (overall_sd.max(0.1) / n.sqrt()).min(1.0),
    };
    let start_log_sigma = overall_sd.max(1e-3).ln().clamp(-5.0, 5.0);

    let chains = sample(
        &model,
        |_, rng| {
            sampled
                .iter()
                .map(|&k| {
                    let jitter: f64 = rng.sample(StandardNormal);
                    match k {
                        0 => overall_mean + 0.5 * jitter,
                        4 => start_log_sigma + 0.5 * jitter,
                        _ => 0.5 * jitter,
                    }
                })
                .collect()
        },
        config,
    )?;

    let mut summaries = Vec::with_capacity(8);
    let mut max_r_hat: f64 = 1.0;
    for (k, name) in COEFFICIENTS.iter().enumerate() {
        match sampled.iter().position(|&s| s == k) {
            Some(j) => {
                let columns: Vec<Vec<f64>> = chains.iter().map(|c| c.column(j)).collect();
                let s = summarize(&columns, 0.95);
                max_r_hat = if s.r_hat.is_nan() { f64::INFINITY } else { max_r_hat.max(s.r_hat) };
                summaries.push(CoefficientSummary {
                    name: name.to_string(),
                    active: true,
                    mean: s.mean,
                    sd: s.sd,
                    lower: s.lower,
                    upper: s.upper,
                    r_hat: Some(s.r_hat),
                    ess: Some(s.ess),
                    mcse: Some(s.mcse),
                });
            }
            None => summaries.push(CoefficientSummary {
                name: name.to_string(),
                active: false,
                mean: 0.0,
                sd: 0.0,
                lower: 0.0,
                upper: 0.0,
                r_hat: None,
                ess: None,
                mcse: None,
            }),
        }
    }
    let per_coefficient = |values: &[f64]| -> Vec<Option<f64>> {
        (0..8).map(|k| sampled.iter().position(|&s| s == k).map(|j| values[j])).collect()
    };
    let chain_diagnostics = chains
        .iter()
        .enumerate()
        .map(|(c, out)| ChainDiagnostics {
            chain: c,
            acceptance: per_coefficient(&out.acceptance),
            step_sizes: per_coefficient(&out.scales),
        })
        .collect();
    let draws = chains
        .iter()
        .flat_map(|c| c.draws.chunks(c.dim).map(|row| model.expand(row)))
        .collect();

    Ok(RegressionFit {
        coefficients: COEFFICIENTS.iter().map(|s| s.to_string()).collect(),
        config: *config,
        records: records.len(),
        group_sizes: logs.each_ref().map(Vec::len),
        summaries,
        chain_diagnostics,
        converged: max_r_hat <= MAX_R_HAT,
        max_r_hat,
        draws,
    })
}
