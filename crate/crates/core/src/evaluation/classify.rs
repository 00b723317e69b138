//! Update-type categories for an elicited posterior.

use serde::{Deserialize, Serialize};

use crate::belief::BetaBelief;

/// Half-width of the near-normative window on the proportion scale.
pub const NEAR_NORMATIVE_WINDOW: f64 = 0.02;
// Comparisons treat means closer than this as equal, so that reflecting
// all beliefs about 0.5 cannot flip a boundary case through rounding.
const TIE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocationType {
    NearNormative,
    OverweightPrior,
    OverweightData,
    UpdatedAwayFromData,
    OvershootData,
}

impl LocationType {
    pub const ALL: [LocationType; 5] = [
        LocationType::NearNormative,
        LocationType::OverweightPrior,
        LocationType::OverweightData,
        LocationType::UpdatedAwayFromData,
        LocationType::OvershootData,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LocationType::NearNormative => "near_normative",
            LocationType::OverweightPrior => "overweight_prior",
            LocationType::OverweightData => "overweight_data",
            LocationType::UpdatedAwayFromData => "updated_away_from_data",
            LocationType::OvershootData => "overshoot_data",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceType {
    MuchSmaller,
    Smaller,
    Close,
    Larger,
    MuchLarger,
}

impl VarianceType {
    pub const ALL: [VarianceType; 5] = [
        VarianceType::MuchSmaller,
        VarianceType::Smaller,
        VarianceType::Close,
        VarianceType::Larger,
        VarianceType::MuchLarger,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VarianceType::MuchSmaller => "much_smaller",
            VarianceType::Smaller => "smaller",
            VarianceType::Close => "close",
            VarianceType::Larger => "larger",
            VarianceType::MuchLarger => "much_larger",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateClassification {
    pub location_type: LocationType,
    pub variance_type: VarianceType,
}

/// Location category from the four means.
///
/// Means are first oriented so the likelihood lies above the prior; the
/// category then depends only on where the elicited mean falls:
///
/// ```text
///   away  |  overweight prior  |  overweight data  |  overshoot
/// --------P--------------------N--------------------L----------->
/// ```
///
/// with anything within 0.02 of N reported as near normative. When the
/// prior and likelihood means coincide there is no direction, and anything
/// outside the window is an overshoot.
pub fn classify_location_means(prior: f64, likelihood: f64, normative: f64, elicited: f64) -> LocationType {
    if (elicited - normative).abs() <= NEAR_NORMATIVE_WINDOW + TIE_EPS {
        return LocationType::NearNormative;
    }
    let sign = if likelihood > prior + TIE_EPS {
        1.0
    } else if likelihood < prior - TIE_EPS {
        -1.0
    } else {
        return LocationType::OvershootData;
    };
    let (p, l, n, e) = (sign * prior, sign * likelihood, sign * normative, sign * elicited);
    if e > l + TIE_EPS {
        LocationType::OvershootData
    } else if e < p - TIE_EPS {
        LocationType::UpdatedAwayFromData
    } else if e < n - TIE_EPS {
        LocationType::OverweightPrior
    } else {
        LocationType::OverweightData
    }
}

pub fn classify_location(
    prior: &BetaBelief,
    likelihood: &BetaBelief,
    elicited_posterior: &BetaBelief,
    normative_posterior: &BetaBelief,
) -> LocationType {
    classify_location_means(
        prior.mean(),
        likelihood.mean(),
        normative_posterior.mean(),
        elicited_posterior.mean(),
    )
}

/// Bin for the ratio of elicited to normative variance.
pub fn classify_variance_ratio(ratio: f64) -> VarianceType {
    if ratio < 0.5 {
        VarianceType::MuchSmaller
    } else if ratio < 0.9 {
        VarianceType::Smaller
    } else if ratio <= 1.1 {
        VarianceType::Close
    } else if ratio <= 1.5 {
        VarianceType::Larger
    } else {
        VarianceType::MuchLarger
    }
}

pub fn classify_variance(elicited: &BetaBelief, normative: &BetaBelief) -> VarianceType {
    classify_variance_ratio(elicited.variance() / normative.variance())
}
