use serde::{Deserialize, Serialize};

use super::kld::DeviationScore;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogKldSummary {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub iqr: f64,
}

/// Sample quantile with linear interpolation between order statistics
/// (the "type 7" definition). `sorted` must be ascending and non-empty.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

pub fn summarize_values(values: &[f64]) -> Result<LogKldSummary> {
    if values.is_empty() {
        return invalid("cannot summarise an empty list of scores");
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(LogKldSummary {
        n: values.len(),
        mean,
        median: quantile_sorted(&sorted, 0.5),
        iqr: quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25),
    })
}

pub fn summarize_log_kld(scores: &[DeviationScore]) -> Result<LogKldSummary> {
    summarize_values(&scores.iter().map(|s| s.log_kld).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scores(logs: &[f64]) -> Vec<DeviationScore> {
        logs.iter()
            .map(|&l| DeviationScore { kld: l.exp(), log_kld: l })
            .collect()
    }

    #[test]
    fn examples() {
        let s = summarize_log_kld(&scores(&[0.0, 0.0, 0.0])).unwrap();
        assert_eq!((s.mean, s.median, s.iqr), (0.0, 0.0, 0.0));
        let s = summarize_log_kld(&scores(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!((s.mean, s.median, s.iqr), (2.5, 2.5, 1.5));
        assert!(summarize_log_kld(&[]).is_err());
    }

    #[test]
    fn order_does_not_matter() {
        let a = summarize_values(&[5.0, -1.0, 2.0, 9.0, 0.5]).unwrap();
        let b = summarize_values(&[9.0, 0.5, 5.0, 2.0, -1.0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.median, 2.0);
    }
}
