//! The coupled two-handle interval slider.
//!
//! A session starts from a point estimate with the interval spanning 0-100%
//! (a flat prior). Dragging one handle fixes where that side of the 95% HDI
//! must sit; the concentration is solved from it with the mode held at the
//! point estimate, and the other handle is moved to the opposite HDI
//! endpoint.

use serde::{Deserialize, Serialize};

use crate::belief::{BetaBelief, ELICITED_MASS};
use crate::density::{unit_polyline, DensityPoint};
use crate::error::{invalid, BeliefError, Result};
use crate::fit::{MAX_CONCENTRATION, MIN_CONCENTRATION};
use crate::hdi::hdi;
use crate::optimize::brent_root;
use crate::text::{percent, render, Templates};

/// A handle dragged onto or past the point estimate is put back this far
/// from it.
pub const HANDLE_GAP: f64 = 0.002;
/// Slider resolution: 0.1 percentage points.
pub const DRAG_STEP: f64 = 0.001;

// Smallest concentration tried by the solver. Exactly 2 is the flat prior,
// whose interval is the full slider rather than an HDI.
const SOLVER_MIN_KAPPA: f64 = MIN_CONCENTRATION * (1.0 + 1e-9);
const SOLVER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Handle {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElicitationState {
    pub point_estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub kappa: f64,
    pub fitted: BetaBelief,
    pub summary_text: String,
    /// The point estimate sits at 0 or 1; only the opposite handle moves.
    pub mode_at_boundary: bool,
}

impl ElicitationState {
    fn uniform(point_estimate: f64) -> Self {
        Self::with_interval(point_estimate, 0.0, 1.0, BetaBelief::uniform())
    }

    fn with_interval(point_estimate: f64, lower: f64, upper: f64, fitted: BetaBelief) -> Self {
        let summary_text = render(
            &Templates::english().elicitation.summary,
            &[
                ("lower", &percent(lower)),
                ("upper", &percent(upper)),
                ("point", &percent(point_estimate)),
            ],
        );
        Self {
            point_estimate,
            lower,
            upper,
            kappa: fitted.concentration(),
            fitted,
            summary_text,
            mode_at_boundary: point_estimate == 0.0 || point_estimate == 1.0,
        }
    }

    /// Rebuild a state from the values a client echoes back, recomputing
    /// everything derived.
    pub fn restore(point_estimate: f64, lower: f64, upper: f64, kappa: f64) -> Result<Self> {
        let start = begin(point_estimate)?;
        if kappa <= MIN_CONCENTRATION {
            return Ok(start);
        }
        let fitted = BetaBelief::from_mode_concentration(point_estimate, kappa.min(MAX_CONCENTRATION))?;
        let interval = hdi(&fitted, ELICITED_MASS)?;
        if (interval.lower - lower).abs() > 1e-6 || (interval.upper - upper).abs() > 1e-6 {
            return invalid(format!(
                "interval [{lower}, {upper}] does not match the 95% HDI of concentration {kappa}"
            ));
        }
        Ok(Self::with_interval(point_estimate, interval.lower, interval.upper, fitted))
    }

    pub fn is_uniform(&self) -> bool {
        self.kappa <= MIN_CONCENTRATION
    }

    pub fn density(&self) -> Vec<DensityPoint> {
        unit_polyline(&self.fitted)
    }
}

pub fn begin(point_estimate: f64) -> Result<ElicitationState> {
    if !point_estimate.is_finite() || !(0.0..=1.0).contains(&point_estimate) {
        return invalid(format!("point estimate must lie in [0, 1], got {point_estimate}"));
    }
    Ok(ElicitationState::uniform(point_estimate))
}

/// Snap a raw slider position to the 0.1 percentage-point grid.
pub fn quantize(value: f64) -> f64 {
    ((value / DRAG_STEP).round() * DRAG_STEP).clamp(0.0, 1.0)
}

pub fn drag_handle(state: &ElicitationState, which: Handle, new_value: f64) -> Result<ElicitationState> {
    if !new_value.is_finite() {
        return invalid(format!("handle position must be finite, got {new_value}"));
    }
    let point = state.point_estimate;
    let current = match which {
        Handle::Lower => state.lower,
        Handle::Upper => state.upper,
    };
    if new_value == current {
        return Ok(state.clone());
    }

    let target = match which {
        Handle::Lower if new_value >= point => point - HANDLE_GAP,
        Handle::Upper if new_value <= point => point + HANDLE_GAP,
        _ => new_value,
    };
    let at_outer_edge = match which {
        Handle::Lower => target <= 0.0,
        Handle::Upper => target >= 1.0,
    };
    if at_outer_edge {
        // A handle pinned by a boundary point estimate cannot move.
        let pinned = match which {
            Handle::Lower => point == 0.0,
            Handle::Upper => point == 1.0,
        };
        return Ok(if pinned { state.clone() } else { ElicitationState::uniform(point) });
    }

    let endpoint = |log_kappa: f64| -> f64 {
        let belief = BetaBelief::from_mode_concentration(point, log_kappa.exp())
            .expect("mode and concentration validated");
        let interval = hdi(&belief, ELICITED_MASS).expect("mass is in (0, 1)");
        match which {
            Handle::Lower => interval.lower,
            Handle::Upper => interval.upper,
        }
    };
    // Increasing in kappa for both handles: the lower end rises toward the
    // mode, the upper end falls toward it.
    let gap = |log_kappa: f64| -> f64 {
        match which {
            Handle::Lower => endpoint(log_kappa) - target,
            Handle::Upper => target - endpoint(log_kappa),
        }
    };

    let lo = SOLVER_MIN_KAPPA.ln();
    let hi = MAX_CONCENTRATION.ln();
    let kappa = if gap(lo) >= 0.0 {
        // Even the flattest peaked Beta has its HDI inside the target.
        return Ok(ElicitationState::uniform(point));
    } else if gap(hi) <= 0.0 {
        MAX_CONCENTRATION
    } else {
        brent_root(gap, lo, hi, SOLVER_TOL, 200)
            .ok_or_else(|| BeliefError::RootFinding(format!("no concentration places the handle at {target}")))?
            .exp()
    };

    let fitted = BetaBelief::from_mode_concentration(point, kappa)?;
    let interval = hdi(&fitted, ELICITED_MASS)?;
    Ok(ElicitationState::with_interval(point, interval.lower, interval.upper, fitted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::fit_beta;
    use crate::ElicitedInterval;

    #[test]
    fn begin_examples() {
        let s = begin(0.23).unwrap();
        assert_eq!((s.point_estimate, s.lower, s.upper, s.kappa), (0.23, 0.0, 1.0, 2.0));
        assert!(!s.mode_at_boundary);

        let s = begin(0.0).unwrap();
        assert_eq!((s.lower, s.upper), (0.0, 1.0));
        assert!(s.mode_at_boundary);

        let s = begin(0.51).unwrap();
        assert_eq!((s.point_estimate, s.lower, s.upper), (0.51, 0.0, 1.0));

        assert!(begin(1.2).is_err());
        assert!(begin(f64::NAN).is_err());
    }

    #[test]
    fn summary_sentence() {
        let s = drag_handle(&begin(0.23).unwrap(), Handle::Lower, 0.15).unwrap();
        assert!(s.summary_text.contains("no less than 15%"), "{}", s.summary_text);
        assert!(s.summary_text.contains("most likely around 23%"));
    }

    #[test]
    fn caption_coupling() {
        let s = drag_handle(&begin(0.23).unwrap(), Handle::Lower, 0.15).unwrap();
        assert!((s.lower - 0.15).abs() < 1e-9);
        assert!((s.upper - 0.33).abs() < 0.005, "upper = {}", s.upper);
        // The coupled state agrees with fitting the resulting interval.
        let refit = fit_beta(&ElicitedInterval::new(0.23, s.lower, s.upper).unwrap()).unwrap();
        assert!((refit.concentration() / s.kappa - 1.0).abs() < 1e-3);
    }

    #[test]
    fn drag_to_zero_restores_uniform() {
        let s = drag_handle(&begin(0.23).unwrap(), Handle::Lower, 0.15).unwrap();
        let back = drag_handle(&s, Handle::Lower, 0.0).unwrap();
        assert_eq!((back.lower, back.upper, back.kappa), (0.0, 1.0, 2.0));
        assert!(back.is_uniform());
    }

    #[test]
    fn tiny_gap_hits_the_cap() {
        let s = drag_handle(&begin(0.5).unwrap(), Handle::Lower, 0.5 - 1e-5).unwrap();
        assert_eq!(s.kappa, MAX_CONCENTRATION);
        assert!(s.upper - s.lower < 0.004);
    }

    #[test]
    fn crossing_the_point_is_clamped() {
        let s = drag_handle(&begin(0.4).unwrap(), Handle::Lower, 0.7).unwrap();
        assert!((s.lower - (0.4 - HANDLE_GAP)).abs() < 1e-9);
        let s = drag_handle(&begin(0.4).unwrap(), Handle::Upper, 0.1).unwrap();
        assert!((s.upper - (0.4 + HANDLE_GAP)).abs() < 1e-9);
    }

    #[test]
    fn boundary_mode_pins_its_handle() {
        let s = begin(0.0).unwrap();
        assert_eq!(drag_handle(&s, Handle::Lower, 0.3).unwrap(), s);
        let s = drag_handle(&s, Handle::Upper, 0.1).unwrap();
        assert_eq!(s.lower, 0.0);
        assert!((s.upper - 0.1).abs() < 1e-9);
        assert_eq!(s.fitted.alpha(), 1.0);
    }

    #[test]
    fn idempotent_drag() {
        let s = drag_handle(&begin(0.3).unwrap(), Handle::Upper, 0.45).unwrap();
        assert_eq!(drag_handle(&s, Handle::Upper, s.upper).unwrap(), s);
        assert_eq!(drag_handle(&s, Handle::Lower, s.lower).unwrap(), s);
    }

    #[test]
    fn restore_round_trip() {
        let s = drag_handle(&begin(0.3).unwrap(), Handle::Upper, 0.45).unwrap();
        let r = ElicitationState::restore(s.point_estimate, s.lower, s.upper, s.kappa).unwrap();
        assert_eq!(r, s);
        assert!(ElicitationState::restore(0.3, 0.1, 0.9, s.kappa).is_err());
        assert!(ElicitationState::restore(0.3, 0.0, 1.0, 2.0).unwrap().is_uniform());
    }

    #[test]
    fn quantize_to_tenth_of_a_percent() {
        assert!((quantize(0.15049) - 0.150).abs() < 1e-12);
        assert!((quantize(0.15051) - 0.151).abs() < 1e-12);
        assert_eq!(quantize(-0.2), 0.0);
    }

    #[test]
    fn density_payload() {
        let s = drag_handle(&begin(0.23).unwrap(), Handle::Lower, 0.15).unwrap();
        assert_eq!(s.density().len(), 257);
    }
}
