//! Density polylines for rendering.

use serde::{Deserialize, Serialize};

use crate::belief::BetaBelief;

/// Number of points in every polyline (a power of two plus one).
pub const POLYLINE_POINTS: usize = 257;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityPoint {
    pub x: f64,
    pub density: f64,
}

/// Density on `POLYLINE_POINTS` evenly spaced points covering [0, 1].
pub fn unit_polyline(belief: &BetaBelief) -> Vec<DensityPoint> {
    polyline(belief, 0.0, 1.0)
}

/// Density on `POLYLINE_POINTS` evenly spaced points covering the bulk of
/// the distribution (mean +/- 12 sd, clipped to [0, 1]), so that narrow
/// posteriors are still resolved.
pub fn focused_polyline(belief: &BetaBelief) -> Vec<DensityPoint> {
    let half = 12.0 * belief.variance().sqrt();
    let lo = (belief.mean() - half).max(0.0);
    let hi = (belief.mean() + half).min(1.0);
    polyline(belief, lo, hi)
}

fn polyline(belief: &BetaBelief, lo: f64, hi: f64) -> Vec<DensityPoint> {
    let step = (hi - lo) / (POLYLINE_POINTS - 1) as f64;
    (0..POLYLINE_POINTS)
        .map(|i| {
            let x = if i == POLYLINE_POINTS - 1 { hi } else { lo + step * i as f64 };
            let mut density = belief.pdf(x);
            if !density.is_finite() {
                // Pole at a boundary (shape < 1): show the value half a step in.
                let inward = if x <= lo { x + 0.5 * step } else { x - 0.5 * step };
                density = belief.pdf(inward);
            }
            DensityPoint { x, density }
        })
        .collect()
}

/// Trapezoid-rule area under a polyline.
pub fn trapezoid(points: &[DensityPoint]) -> f64 {
    points
        .windows(2)
        .map(|w| 0.5 * (w[1].x - w[0].x) * (w[0].density + w[1].density))
        .sum()
}
