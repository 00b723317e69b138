//! Component-wise random-walk Metropolis with per-coordinate step
//! adaptation during warmup.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Acceptance band the warmup steers each coordinate into.
pub const TARGET_ACCEPTANCE: (f64, f64) = (0.23, 0.44);

/// Unnormalised log posterior over an unconstrained vector.
pub trait LogDensity: Sync {
    fn dim(&self) -> usize;
    fn log_density(&self, x: &[f64]) -> f64;
    /// Starting proposal scale for coordinate `i`.
    fn initial_scale(&self, _i: usize) -> f64 {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub chains: usize,
    pub warmup: usize,
    pub draws: usize,
    pub batch: usize,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            chains: 4,
            warmup: 2000,
            draws: 2500,
            batch: 50,
            seed,
        }
    }
}

/// RNG for one chain: every chain shares the seed and gets its own stream.
pub fn chain_rng(seed: u64, chain: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(chain as u64);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput {
    pub dim: usize,
    /// Kept draws, row-major (`draws × dim`).
    pub draws: Vec<f64>,
    /// Acceptance rate per coordinate over the kept draws.
    pub acceptance: Vec<f64>,
    /// Proposal scales at the end of warmup.
    pub scales: Vec<f64>,
}

impl ChainOutput {
    pub fn len(&self) -> usize {
        self.draws.len() / self.dim.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.draws.iter().skip(j).step_by(self.dim).copied().collect()
    }
}

pub fn run_chain<D: LogDensity + ?Sized>(
    target: &D,
    init: Vec<f64>,
    config: &SamplerConfig,
    rng: &mut ChaCha20Rng,
) -> Result<ChainOutput> {
    let dim = target.dim();
    if init.len() != dim {
        return invalid(format!("initial point has {} coordinates, expected {dim}", init.len()));
    }
    if config.batch == 0 {
        return invalid("adaptation batch must be positive");
    }
    let mut x = init;
    let mut lp = target.log_density(&x);
    if !lp.is_finite() {
        return invalid("initial point has zero posterior density");
    }
    let mut log_scale: Vec<f64> = (0..dim).map(|i| target.initial_scale(i).ln()).collect();
    let mut accepted = vec![0usize; dim];
    let mut draws = Vec::with_capacity(config.draws * dim);

    for iter in 0..config.warmup + config.draws {
        for j in 0..dim {
            let z: f64 = rng.sample(StandardNormal);
            let old = x[j];
            x[j] = old + log_scale[j].exp() * z;
            let proposal = target.log_density(&x);
            let u: f64 = rng.random();
            // NaN proposals fail the comparison and are rejected.
            if u.ln() < proposal - lp {
                lp = proposal;
                accepted[j] += 1;
            } else {
                x[j] = old;
            }
        }
        if iter < config.warmup {
            if (iter + 1) % config.batch == 0 {
                let batch_no = (iter + 1) / config.batch;
                let delta = 1.0 / (batch_no as f64).sqrt();
                for j in 0..dim {
                    let rate = accepted[j] as f64 / config.batch as f64;
                    if rate < TARGET_ACCEPTANCE.0 {
                        log_scale[j] -= delta;
                    } else if rate > TARGET_ACCEPTANCE.1 {
                        log_scale[j] += delta;
                    }
                    accepted[j] = 0;
                }
            }
            if iter + 1 == config.warmup {
                accepted.iter_mut().for_each(|a| *a = 0);
            }
        } else {
            draws.extend_from_slice(&x);
        }
    }
    let kept = config.draws.max(1) as f64;
    Ok(ChainOutput {
        dim,
        draws,
        acceptance: accepted.iter().map(|&a| a as f64 / kept).collect(),
        scales: log_scale.iter().map(|s| s.exp()).collect(),
    })
}

/// Run `config.chains` chains in parallel. `init` picks each chain's
/// starting point from that chain's own RNG, so the output depends only on
/// the seed.
pub fn sample<D, F>(target: &D, init: F, config: &SamplerConfig) -> Result<Vec<ChainOutput>>
where
    D: LogDensity,
    F: Fn(usize, &mut ChaCha20Rng) -> Vec<f64> + Sync,
{
    if config.chains == 0 {
        return invalid("at least one chain is required");
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..config.chains)
            .map(|c| {
                let init = &init;
                scope.spawn(move || {
                    let mut rng = chain_rng(config.seed, c);
                    let start = init(c, &mut rng);
                    run_chain(target, start, config, &mut rng)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampler thread panicked"))
            .collect()
    })
}
