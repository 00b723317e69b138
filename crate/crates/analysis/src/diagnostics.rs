//! Convergence diagnostics and posterior summaries for pooled chains.

use belief_core::evaluation::summary::quantile_sorted;

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Potential scale reduction with each chain split in half.
pub fn split_rhat(chains: &[Vec<f64>]) -> f64 {
    let n = chains.iter().map(Vec::len).min().unwrap_or(0) / 2;
    if n < 2 {
        return f64::NAN;
    }
    let halves: Vec<&[f64]> = chains.iter().flat_map(|c| [&c[..n], &c[n..2 * n]]).collect();
    let means: Vec<f64> = halves.iter().map(|h| mean(h)).collect();
    let w = mean(&halves.iter().map(|h| sample_variance(h)).collect::<Vec<_>>());
    let b = n as f64 * sample_variance(&means);
    if w == 0.0 {
        return if b == 0.0 { 1.0 } else { f64::INFINITY };
    }
    let var_plus = (n as f64 - 1.0) / n as f64 * w + b / n as f64;
    (var_plus / w).sqrt()
}

/// Effective sample size across chains, using Geyer's initial monotone
/// sequence on the combined autocorrelation estimate.
pub fn effective_sample_size(chains: &[Vec<f64>]) -> f64 {
    let m = chains.len();
    let n = chains.iter().map(Vec::len).min().unwrap_or(0);
    if m == 0 || n < 4 {
        return f64::NAN;
    }
    let chains: Vec<&[f64]> = chains.iter().map(|c| &c[..n]).collect();
    let means: Vec<f64> = chains.iter().map(|c| mean(c)).collect();
    let w = mean(&chains.iter().map(|c| sample_variance(c)).collect::<Vec<_>>());
    let b_over_n = if m > 1 { sample_variance(&means) } else { 0.0 };
    let var_plus = (n as f64 - 1.0) / n as f64 * w + b_over_n;
    if var_plus == 0.0 {
        return (m * n) as f64;
    }
    let autocov = |lag: usize| -> f64 {
        chains
            .iter()
            .zip(&means)
            .map(|(c, mu)| (0..n - lag).map(|i| (c[i] - mu) * (c[i + lag] - mu)).sum::<f64>() / n as f64)
            .sum::<f64>()
            / m as f64
    };
    let rho = |lag: usize| 1.0 - (w - autocov(lag)) / var_plus;

    let mut tau = -1.0;
    let mut previous = f64::INFINITY;
    let mut k = 0;
    while 2 * k + 1 < n {
        let pair = rho(2 * k) + rho(2 * k + 1);
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(previous);
        tau += 2.0 * pair;
        previous = pair;
        k += 1;
    }
    let ess = (m * n) as f64 / tau.max(1.0 / ((m * n) as f64).log10());
    ess.min((m * n) as f64 * ((m * n) as f64).log10())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrawSummary {
    pub mean: f64,
    pub sd: f64,
    pub lower: f64,
    pub upper: f64,
    pub r_hat: f64,
    pub ess: f64,
    pub mcse: f64,
}

/// Summary of one quantity with `mass` percentile interval.
pub fn summarize(chains: &[Vec<f64>], mass: f64) -> DrawSummary {
    let mut pooled: Vec<f64> = chains.iter().flatten().copied().collect();
    let m = mean(&pooled);
    let sd = sample_variance(&pooled).sqrt();
    pooled.sort_by(f64::total_cmp);
    let tail = 0.5 * (1.0 - mass);
    let ess = effective_sample_size(chains);
    DrawSummary {
        mean: m,
        sd,
        lower: quantile_sorted(&pooled, tail),
        upper: quantile_sorted(&pooled, 1.0 - tail),
        r_hat: split_rhat(chains),
        ess,
        mcse: sd / ess.sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;
    use rand_distr::StandardNormal;

    fn iid(seed: u64, shift: f64) -> Vec<f64> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        (0..2000).map(|_| shift + rng.sample::<f64, _>(StandardNormal)).collect()
    }

    fn ar1(seed: u64, phi: f64) -> Vec<f64> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut x = 0.0;
        (0..4000)
            .map(|_| {
                x = phi * x + rng.sample::<f64, _>(StandardNormal);
                x
            })
            .collect()
    }

    #[test]
    fn mixed_chains_have_rhat_near_one() {
        let chains: Vec<_> = (0..4).map(|s| iid(s, 0.0)).collect();
        let r = split_rhat(&chains);
        assert!((r - 1.0).abs() < 0.01, "{r}");
        let ess = effective_sample_size(&chains);
        assert!((6000.0..10000.0).contains(&ess), "{ess}");
    }

    #[test]
    fn separated_chains_are_flagged() {
        let chains = vec![iid(1, 0.0), iid(2, 0.0), iid(3, 3.0), iid(4, 3.0)];
        assert!(split_rhat(&chains) > 1.5);
    }

    #[test]
    fn autocorrelation_shrinks_ess() {
        // AR(1) with coefficient phi has integrated time (1 + phi) / (1 - phi).
        let chains: Vec<_> = (0..4).map(|s| ar1(s, 0.8)).collect();
        let ess = effective_sample_size(&chains);
        let expected = 16000.0 / 9.0;
        assert!((ess / expected - 1.0).abs() < 0.3, "{ess} vs {expected}");
    }

    #[test]
    fn constant_chains() {
        let chains = vec![vec![1.0; 100], vec![1.0; 100]];
        assert_eq!(split_rhat(&chains), 1.0);
    }
}
