use serde::{Deserialize, Serialize};

use crate::belief::BetaBelief;
use crate::error::{BeliefError, Result};
use crate::special::{digamma, ln_beta};

/// Closed-form KL(p || q) between two Betas:
///
/// ```text
/// ln B(a_q, b_q) - ln B(a_p, b_p) + (a_p - a_q) psi(a_p) + (b_p - b_q) psi(b_p)
///     + (a_q - a_p + b_q - b_p) psi(a_p + b_p)
/// ```
///
/// Scores use `p` = normative posterior (the target) and `q` = elicited
/// posterior: the information lost by holding the participant's beliefs in
/// place of the normative ones.
pub fn kl_divergence(p: &BetaBelief, q: &BetaBelief) -> Result<f64> {
    if p == q {
        return Ok(0.0);
    }
    let (ap, bp) = (p.alpha(), p.beta());
    let (aq, bq) = (q.alpha(), q.beta());
    let value = ln_beta(aq, bq) - ln_beta(ap, bp)
        + (ap - aq) * digamma(ap)
        + (bp - bq) * digamma(bp)
        + (aq - ap + bq - bp) * digamma(ap + bp);
    if !value.is_finite() {
        return Err(BeliefError::NonFinite(format!(
            "KL(Beta({ap}, {bp}) || Beta({aq}, {bq})) = {value}"
        )));
    }
    // Rounding can leave a tiny negative for near-identical pairs.
    Ok(value.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationScore {
    pub kld: f64,
    /// Natural log of `kld`; minus infinity for an exactly normative answer.
    pub log_kld: f64,
}

impl DeviationScore {
    pub fn new(kld: f64) -> Self {
        Self { kld, log_kld: kld.ln() }
    }
}

/// Deviation of an elicited posterior from the normative one.
pub fn deviation(normative: &BetaBelief, elicited: &BetaBelief) -> Result<DeviationScore> {
    kl_divergence(normative, elicited).map(DeviationScore::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use belief_testkit as oracle;

    fn beta(a: f64, b: f64) -> BetaBelief {
        BetaBelief::new(a, b).unwrap()
    }

    #[test]
    fn identity_is_zero() {
        for (a, b) in [(1.0, 1.0), (2.0, 10.0), (422.0, 590.0), (3e5, 2e5)] {
            assert_eq!(kl_divergence(&beta(a, b), &beta(a, b)).unwrap(), 0.0);
        }
    }

    #[test]
    fn matches_quadrature() {
        let got = kl_divergence(&beta(2.0, 2.0), &beta(1.0, 1.0)).unwrap();
        let want = oracle::kl_quadrature(2.0, 2.0, 1.0, 1.0);
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }

    #[test]
    fn asymmetric() {
        let (p, q) = (beta(2.0, 8.0), beta(4.0, 4.0));
        let pq = kl_divergence(&p, &q).unwrap();
        let qp = kl_divergence(&q, &p).unwrap();
        assert!((pq - qp).abs() > 0.1);
        assert!((pq - oracle::kl_quadrature(2.0, 8.0, 4.0, 4.0)).abs() < 1e-8);
        assert!((qp - oracle::kl_quadrature(4.0, 4.0, 2.0, 8.0)).abs() < 1e-8);
    }

    #[test]
    fn mirror_pair_is_symmetric() {
        // Beta(2, 8) and Beta(8, 2) are reflections of each other, so both
        // directions agree even though KL is asymmetric in general.
        let ab = kl_divergence(&beta(2.0, 8.0), &beta(8.0, 2.0)).unwrap();
        let ba = kl_divergence(&beta(8.0, 2.0), &beta(2.0, 8.0)).unwrap();
        assert!((ab - ba).abs() < 1e-12);
        assert!((ab - oracle::kl_quadrature(2.0, 8.0, 8.0, 2.0)).abs() < 1e-8);
    }

    #[test]
    fn log_score() {
        let s = DeviationScore::new(std::f64::consts::E);
        assert!((s.log_kld - 1.0).abs() < 1e-15);
        assert_eq!(DeviationScore::new(0.0).log_kld, f64::NEG_INFINITY);
    }
}
