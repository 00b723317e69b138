//! Highest density intervals of Beta beliefs.

use serde::{Deserialize, Serialize};

use crate::belief::BetaBelief;
use crate::error::{invalid, Result};
use crate::optimize::brent_minimize;

/// How an interval was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalMethod {
    /// Narrowest interval of a single-peaked density.
    Highest,
    /// Monotone density (exactly one shape <= 1): the interval is anchored
    /// at the boundary where the density is largest.
    OneSided,
    /// Flat or U-shaped density (both shapes <= 1), where no single
    /// narrowest interval exists; the equal-tailed interval is returned.
    EqualTailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub method: IntervalMethod,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn is_fallback(&self) -> bool {
        self.method != IntervalMethod::Highest
    }
}

const TAIL_TOL: f64 = 1e-13;

pub fn hdi(belief: &BetaBelief, mass: f64) -> Result<Interval> {
    if !(mass > 0.0 && mass < 1.0) {
        return invalid(format!("interval mass must lie in (0, 1), got {mass}"));
    }
    let (a, b) = (belief.alpha(), belief.beta());
    if a <= 1.0 && b <= 1.0 {
        return Ok(equal_tailed(belief, mass));
    }
    if a <= 1.0 {
        return Ok(Interval {
            lower: 0.0,
            upper: belief.quantile(mass),
            method: IntervalMethod::OneSided,
        });
    }
    if b <= 1.0 {
        return Ok(Interval {
            lower: belief.quantile(1.0 - mass),
            upper: 1.0,
            method: IntervalMethod::OneSided,
        });
    }

    if a == b {
        // Symmetric and unimodal: the narrowest interval is centred.
        let lower = belief.quantile(0.5 * (1.0 - mass));
        return Ok(Interval {
            lower,
            upper: 1.0 - lower,
            method: IntervalMethod::Highest,
        });
    }

    // Width as a function of the probability left below the interval.
    let width = |tail: f64| belief.quantile(tail + mass) - belief.quantile(tail);
    let best = brent_minimize(width, 0.0, 1.0 - mass, TAIL_TOL, 500);
    let tail = best.x.clamp(0.0, 1.0 - mass);
    Ok(Interval {
        lower: belief.quantile(tail),
        upper: belief.quantile(tail + mass),
        method: IntervalMethod::Highest,
    })
}

pub fn equal_tailed(belief: &BetaBelief, mass: f64) -> Interval {
    let tail = 0.5 * (1.0 - mass);
    Interval {
        lower: belief.quantile(tail),
        upper: belief.quantile(1.0 - tail),
        method: IntervalMethod::EqualTailed,
    }
}
