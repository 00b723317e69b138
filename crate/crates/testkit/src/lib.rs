//! Reference oracles for tests.
//!
//! Nothing here shares code with `belief-core`: densities come straight from
//! `ln_gamma`, probabilities from adaptive Gauss-Kronrod quadrature, and
//! intervals from the equal-density characterisation of an HDI rather than
//! from quantile-width minimisation.

pub mod quad;

use statrs::function::gamma::ln_gamma;

/// Beta(a, b) log density with its normalising constant computed once.
#[derive(Clone, Copy)]
pub struct Density {
    a: f64,
    b: f64,
    ln_norm: f64,
}

impl Density {
    pub fn new(a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            ln_norm: ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b),
        }
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 || x >= 1.0 {
            return f64::NEG_INFINITY;
        }
        self.ln_norm + (self.a - 1.0) * x.ln() + (self.b - 1.0) * (-x).ln_1p()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }
}

/// Log density of Beta(a, b) at `x`.
pub fn beta_ln_pdf(a: f64, b: f64, x: f64) -> f64 {
    Density::new(a, b).ln_pdf(x)
}

pub fn beta_pdf(a: f64, b: f64, x: f64) -> f64 {
    beta_ln_pdf(a, b, x).exp()
}

fn beta_sd(a: f64, b: f64) -> f64 {
    let k = a + b;
    (a * b / (k * k * (k + 1.0))).sqrt()
}

/// Breakpoints that put several quadrature panels around the bulk of a
/// Beta(a, b) density so adaptive refinement never misses a narrow peak.
pub fn beta_breakpoints(a: f64, b: f64) -> Vec<f64> {
    let mean = a / (a + b);
    let sd = beta_sd(a, b);
    let mut pts = vec![0.0, 1.0];
    for k in [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        pts.push(mean - k * sd);
        pts.push(mean + k * sd);
    }
    pts.push(mean);
    for i in 1..16 {
        pts.push(i as f64 / 16.0);
    }
    pts.retain(|p| *p >= 0.0 && *p <= 1.0);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
    pts
}

/// P(lo < X < hi) for X ~ Beta(a, b), by quadrature of the density.
pub fn beta_mass(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    let mut pts: Vec<f64> = beta_breakpoints(a, b)
        .into_iter()
        .filter(|p| *p > lo && *p < hi)
        .collect();
    pts.insert(0, lo);
    pts.push(hi);
    let d = Density::new(a, b);
    pts.windows(2)
        .map(|w| quad::integrate(|x| d.pdf(x), w[0], w[1], 1e-11))
        .sum()
}

/// Quantile by bisection on the quadrature CDF.
pub fn beta_quantile(a: f64, b: f64, p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if beta_mass(a, b, 0.0, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// 95%-style HDI of a unimodal Beta (a, b > 1) from the equal-density
/// condition: for a lower end `l` left of the mode, the upper end is the
/// point right of the mode with the same density; `l` is then bisected
/// until the enclosed mass equals `mass`.
pub fn hdi_equal_density(a: f64, b: f64, mass: f64) -> (f64, f64) {
    assert!(a > 1.0 && b > 1.0, "oracle HDI needs a unimodal Beta");
    let mode = (a - 1.0) / (a + b - 2.0);
    let d = Density::new(a, b);
    let upper_for = |l: f64| -> f64 {
        let target = d.ln_pdf(l);
        let (mut lo, mut hi) = (mode, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if d.ln_pdf(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let (mut lo, mut hi) = (0.0, mode);
    for _ in 0..100 {
        let l = 0.5 * (lo + hi);
        let m = beta_mass(a, b, l, upper_for(l));
        if m > mass {
            lo = l;
        } else {
            hi = l;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let l = 0.5 * (lo + hi);
    (l, upper_for(l))
}

/// Beta-Beta KL divergence KL(p || q) by quadrature, integrand evaluated in
/// log space so distant pairs do not underflow.
pub fn kl_quadrature(pa: f64, pb: f64, qa: f64, qb: f64) -> f64 {
    let (p, q) = (Density::new(pa, pb), Density::new(qa, qb));
    let integrand = |x: f64| {
        let lp = p.ln_pdf(x);
        if lp == f64::NEG_INFINITY {
            return 0.0;
        }
        lp.exp() * (lp - q.ln_pdf(x))
    };
    let pts = beta_breakpoints(pa, pb);
    pts.windows(2)
        .map(|w| quad::integrate(integrand, w[0], w[1], 1e-11))
        .sum()
}

/// Mean and variance of an equal-weight mixture of Betas, straight from the
/// component moments.
pub fn mixture_moments(components: &[(f64, f64)]) -> (f64, f64) {
    let n = components.len() as f64;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for &(a, b) in components {
        let mean = a / (a + b);
        let var = a * b / ((a + b).powi(2) * (a + b + 1.0));
        m1 += mean / n;
        m2 += (var + mean * mean) / n;
    }
    (m1, m2 - m1 * m1)
}

/// Mode-parameterised Beta shape pair.
pub fn shape_from_mode(mode: f64, kappa: f64) -> (f64, f64) {
    (1.0 + mode * (kappa - 2.0), 1.0 + (1.0 - mode) * (kappa - 2.0))
}

/// Brute-force concentration fit: sweep log-kappa on a fine grid, keep the
/// kappa whose oracle HDI has the smallest squared endpoint error, then
/// refine with a narrower sweep.
pub fn kappa_sweep(mode: f64, lower: f64, upper: f64) -> f64 {
    let err = |k: f64| {
        let (a, b) = shape_from_mode(mode, k);
        let (l, u) = hdi_equal_density(a, b, 0.95);
        (l - lower).powi(2) + (u - upper).powi(2)
    };
    let (mut lo, mut hi) = (3.0_f64.ln(), 1e6_f64.ln());
    let mut best = lo;
    for _ in 0..4 {
        let steps = 16;
        let mut best_err = f64::INFINITY;
        for i in 0..=steps {
            let s = lo + (hi - lo) * i as f64 / steps as f64;
            let e = err(s.exp());
            if e < best_err {
                best_err = e;
                best = s;
            }
        }
        let step = (hi - lo) / steps as f64;
        lo = best - step;
        hi = best + step;
    }
    best.exp()
}

/// Standard normal CDF by quadrature of the density from 0.
pub fn normal_cdf(x: f64) -> f64 {
    let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    0.5 + quad::integrate(pdf, 0.0, x, 1e-14)
}

/// Type-7 (linear interpolation) sample quantile by sorting.
pub fn sample_quantile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = (v.len() - 1) as f64 * p;
    let i = h.floor() as usize;
    if i + 1 >= v.len() {
        return v[v.len() - 1];
    }
    v[i] + (h - i as f64) * (v[i + 1] - v[i])
}
