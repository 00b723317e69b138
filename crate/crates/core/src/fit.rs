//! Fitting a Beta belief to an elicited point estimate and 95% interval.
//!
//! The point estimate is the mode, which pins `alpha` and `beta` to a
//! one-parameter family indexed by the concentration `kappa`. `kappa` is then
//! chosen to minimise the squared distance between the family member's 95%
//! HDI and the elicited endpoints.

use crate::belief::{BetaBelief, ElicitedInterval, ELICITED_MASS};
use crate::error::{BeliefError, Result};
use crate::hdi::hdi;
use crate::optimize::brent_minimize;

pub const MIN_CONCENTRATION: f64 = 2.0;
/// Past this the 95% HDI is narrower than 0.002, below display resolution.
pub const MAX_CONCENTRATION: f64 = 1e6;
/// Narrower elicited intervals are widened to this before fitting.
pub const MIN_INTERVAL_WIDTH: f64 = 0.002;

const SCAN_POINTS: usize = 33;
const LOG_KAPPA_TOL: f64 = 1e-9;
const MAX_ITER: usize = 200;

pub fn fit_beta(elicited: &ElicitedInterval) -> Result<BetaBelief> {
    let elicited = ElicitedInterval::new(elicited.point_estimate, elicited.lower, elicited.upper)?;
    if elicited.is_full_range() {
        return Ok(BetaBelief::uniform());
    }
    let (lower, upper) = widen(&elicited);
    let mode = elicited.point_estimate;

    let loss = |log_kappa: f64| -> f64 {
        let belief = match BetaBelief::from_mode_concentration(mode, log_kappa.exp()) {
            Ok(b) => b,
            Err(_) => return f64::INFINITY,
        };
        match hdi(&belief, ELICITED_MASS) {
            Ok(i) => (i.lower - lower).powi(2) + (i.upper - upper).powi(2),
            Err(_) => f64::INFINITY,
        }
    };

    // Coarse log-spaced scan, then Brent inside the best bracket.
    let lo = MIN_CONCENTRATION.ln();
    let hi = MAX_CONCENTRATION.ln();
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&s| loss(s)).collect();
    let best_idx = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);

    let left = grid[best_idx.saturating_sub(1)];
    let right = grid[(best_idx + 1).min(SCAN_POINTS - 1)];
    let refined = brent_minimize(loss, left, right, LOG_KAPPA_TOL, MAX_ITER);

    let (log_kappa, _) = if refined.value <= values[best_idx] {
        (refined.x, refined.value)
    } else {
        (grid[best_idx], values[best_idx])
    };
    let belief = BetaBelief::from_mode_concentration(mode, log_kappa.exp().clamp(MIN_CONCENTRATION, MAX_CONCENTRATION))?;
    if !refined.converged {
        return Err(BeliefError::FitFailure { best: belief });
    }
    Ok(belief)
}

/// Endpoints after widening an interval narrower than `MIN_INTERVAL_WIDTH`
/// around its point, shifted back inside [0, 1] when it would spill over.
fn widen(e: &ElicitedInterval) -> (f64, f64) {
    if e.width() >= MIN_INTERVAL_WIDTH {
        return (e.lower, e.upper);
    }
    let half = 0.5 * MIN_INTERVAL_WIDTH;
    let mut lower = e.point_estimate - half;
    let mut upper = e.point_estimate + half;
    if lower < 0.0 {
        upper -= lower;
        lower = 0.0;
    }
    if upper > 1.0 {
        lower -= upper - 1.0;
        upper = 1.0;
    }
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use belief_testkit as oracle;

    fn interval(p: f64, l: f64, u: f64) -> ElicitedInterval {
        ElicitedInterval::new(p, l, u).unwrap()
    }

    #[test]
    fn full_range_is_uniform() {
        let b = fit_beta(&interval(0.5, 0.0, 1.0)).unwrap();
        assert_eq!((b.alpha(), b.beta()), (1.0, 1.0));
        assert_eq!(b.concentration(), 2.0);
        // Any point estimate with a 0-100% interval is a flat prior.
        assert_eq!(fit_beta(&interval(0.8, 0.0, 1.0)).unwrap(), BetaBelief::uniform());
    }

    #[test]
    fn rejects_non_finite() {
        let bad = ElicitedInterval {
            point_estimate: f64::NAN,
            lower: 0.1,
            upper: 0.2,
            mass: 0.95,
        };
        assert!(matches!(fit_beta(&bad), Err(BeliefError::InvalidInput(_))));
    }

    #[test]
    fn slider_caption_example() {
        let b = fit_beta(&interval(0.23, 0.15, 0.33)).unwrap();
        assert!((b.mode().unwrap() - 0.23).abs() < 1e-12);
        // Concentration from the brute-force sweep over oracle HDIs.
        let kappa = oracle::kappa_sweep(0.23, 0.15, 0.33);
        assert!((b.concentration() / kappa - 1.0).abs() < 0.01, "{} vs {kappa}", b.concentration());
        let i = hdi(&b, 0.95).unwrap();
        assert!((i.lower - 0.15).abs() < 0.005 && (i.upper - 0.33).abs() < 0.005);
    }

    #[test]
    fn narrow_intro_example() {
        let b = fit_beta(&interval(0.51, 0.47, 0.55)).unwrap();
        let kappa = oracle::kappa_sweep(0.51, 0.47, 0.55);
        assert!((b.concentration() / kappa - 1.0).abs() < 0.01);
        assert!((b.concentration() - 600.0).abs() < 15.0);
        let i = hdi(&b, 0.95).unwrap();
        assert!((i.lower - 0.47).abs() < 0.005 && (i.upper - 0.55).abs() < 0.005);
    }

    #[test]
    fn zero_width_is_widened_and_capped() {
        let b = fit_beta(&interval(0.4, 0.4, 0.4)).unwrap();
        assert!(b.concentration() <= MAX_CONCENTRATION);
        let i = hdi(&b, 0.95).unwrap();
        assert!((i.width() - MIN_INTERVAL_WIDTH).abs() < 2e-4, "{}", i.width());

        let edge = fit_beta(&interval(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(edge.alpha(), 1.0);
        assert!(edge.concentration() > 100.0);
    }

    #[test]
    fn boundary_mode_fits_one_sided_interval() {
        let b = fit_beta(&interval(0.0, 0.0, 0.1)).unwrap();
        assert_eq!(b.alpha(), 1.0);
        let i = hdi(&b, 0.95).unwrap();
        assert_eq!(i.lower, 0.0);
        assert!((i.upper - 0.1).abs() < 1e-6);
    }
}
