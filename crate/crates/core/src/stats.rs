//! Binomial estimators, pseudo-threshold interpolation and log-log slope fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this many events the interval switches from normal to Wilson.
pub const WILSON_BELOW: u64 = 20;
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub count: u64,
    pub n: u64,
    pub rate: f64,
    /// `sqrt(r(1-r)/n)`.
    pub sigma: f64,
    pub ci95: (f64, f64),
}

impl Estimate {
    /// Rate `count/n`; `n = 0` gives a zero rate with the interval `[0, 1]`.
    pub fn binomial(count: u64, n: u64) -> Self {
        if n == 0 {
            return Estimate { count, n, rate: 0.0, sigma: 0.0, ci95: (0.0, 1.0) };
        }
        let nf = n as f64;
        let rate = count as f64 / nf;
        let sigma = (rate * (1.0 - rate) / nf).sqrt();
        let ci95 = if count < WILSON_BELOW { wilson(count, n) } else { ((rate - Z95 * sigma).max(0.0), (rate + Z95 * sigma).min(1.0)) };
        Estimate { count, n, rate, sigma, ci95 }
    }
}

/// Wilson score interval at 95%.
pub fn wilson(count: u64, n: u64) -> (f64, f64) {
    let nf = n as f64;
    let r = count as f64 / nf;
    let z2 = Z95 * Z95;
    let centre = (r + z2 / (2.0 * nf)) / (1.0 + z2 / nf);
    let half = Z95 / (1.0 + z2 / nf) * (r * (1.0 - r) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let lo = if count == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if count == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// `|a - b|` in units of their combined standard error.
pub fn z_score(a: &Estimate, b: &Estimate) -> f64 {
    let s = (a.sigma.powi(2) + b.sigma.powi(2)).sqrt();
    if s == 0.0 {
        return if a.rate == b.rate { 0.0 } else { f64::INFINITY };
    }
    (a.rate - b.rate).abs() / s
}

/// One point of a rate-versus-p curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p: f64,
    pub rate: f64,
    pub sigma: f64,
    pub ci95: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Crossing {
    /// `rate(p) = p` between two sampled points.
    Found { p_th: f64, ci: (f64, f64), bracket: (f64, f64) },
    /// Rate stays on one side of the diagonal. `above` tells which side.
    None { above: bool },
}

impl Crossing {
    pub fn p_th(&self) -> Option<f64> {
        match self {
            Crossing::Found { p_th, .. } => Some(*p_th),
            Crossing::None { .. } => None,
        }
    }
}

/// First sign change of `ln rate − ln p`, log-log interpolated.
fn crossing_of(ps: &[f64], rates: &[f64]) -> Option<(f64, usize)> {
    let g: Vec<f64> = ps.iter().zip(rates).map(|(&p, &r)| r.max(1e-300).ln() - p.ln()).collect();
    (1..g.len()).find(|&i| (g[i - 1] < 0.0) != (g[i] < 0.0)).map(|i| {
        let (x0, x1) = (ps[i - 1].ln(), ps[i].ln());
        let t = g[i - 1] / (g[i - 1] - g[i]);
        ((x0 + t * (x1 - x0)).exp(), i)
    })
}

/// Pseudo-threshold of a curve sorted by `p`. The interval comes from running
/// the same interpolation on the upper and lower CI95 curves; where one of
/// them does not cross, the sampled range bound is used.
pub fn pseudo_threshold(points: &[CurvePoint]) -> Crossing {
    let ps: Vec<f64> = points.iter().map(|c| c.p).collect();
    let mid: Vec<f64> = points.iter().map(|c| c.rate).collect();
    let Some((p_th, i)) = crossing_of(&ps, &mid) else {
        return Crossing::None { above: points.first().is_some_and(|c| c.rate > c.p) };
    };
    let hi: Vec<f64> = points.iter().map(|c| c.ci95.1).collect();
    let lo: Vec<f64> = points.iter().map(|c| c.ci95.0).collect();
    let (pmin, pmax) = (ps[0], ps[ps.len() - 1]);
    // a higher curve crosses the diagonal earlier
    let from_hi = crossing_of(&ps, &hi).map_or(pmin, |c| c.0);
    let from_lo = crossing_of(&ps, &lo).map_or(pmax, |c| c.0);
    Crossing::Found { p_th, ci: (from_hi.min(p_th), from_lo.max(p_th)), bracket: (ps[i - 1], ps[i]) }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Weighted least squares of `ln rate` on `ln p` inside `window`. Each point
/// is weighted by `1/σ_ln²` with `σ_ln = σ/rate`. Points with zero rate are
/// skipped; at least three must remain.
pub fn fit_scaling_exponent(points: &[CurvePoint], window: (f64, f64)) -> Result<ScalingFit> {
    let used: Vec<(f64, f64, f64)> = points
        .iter()
        .filter(|c| c.p >= window.0 && c.p <= window.1 && c.rate > 0.0)
        .map(|c| {
            let s = if c.sigma > 0.0 { c.sigma / c.rate } else { 1.0 };
            (c.p.ln(), c.rate.ln(), 1.0 / (s * s))
        })
        .collect();
    if used.len() < 3 {
        return Err(Error::Config(format!("scaling fit needs at least 3 nonzero points in the window, got {}", used.len())));
    }
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y, w) in &used {
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    let det = sw * sxx - sx * sx;
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    let chi2: f64 = used.iter().map(|&(x, y, w)| w * (y - intercept - slope * x).powi(2)).sum();
    let dof = (used.len() - 2) as f64;
    let stderr = (sw / det).sqrt() * (chi2 / dof).max(1.0).sqrt();
    Ok(ScalingFit { slope, stderr, intercept, points: used.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(ps: &[f64], f: impl Fn(f64) -> f64) -> Vec<CurvePoint> {
        ps.iter().map(|&p| CurvePoint { p, rate: f(p), sigma: f(p) * 0.01, ci95: (f(p) * 0.98, f(p) * 1.02) }).collect()
    }

    #[test]
    fn binomial_basics() {
        let e = Estimate::binomial(50, 1000);
        assert!((e.rate - 0.05).abs() < 1e-12);
        assert!((e.sigma - (0.05f64 * 0.95 / 1000.0).sqrt()).abs() < 1e-12);
        let z = Estimate::binomial(0, 1000);
        assert_eq!(z.ci95.0, 0.0);
        assert!(z.ci95.1 > 0.0 && z.ci95.1 < 0.005);
    }

    #[test]
    fn wilson_matches_reference_value() {
        // 3 of 100, reference from statsmodels proportion_confint(method="wilson")
        let (lo, hi) = wilson(3, 100);
        assert!((lo - 0.010_254_524).abs() < 1e-8, "{lo}");
        assert!((hi - 0.084_519_364).abs() < 1e-8, "{hi}");
    }

    #[test]
    fn threshold_of_power_law() {
        // rate = 100 p² crosses p at 0.01
        let ps = [1e-3, 3e-3, 6e-3, 2e-2, 5e-2];
        let c = pseudo_threshold(&curve(&ps, |p| 100.0 * p * p));
        let t = c.p_th().unwrap();
        assert!((t - 0.01).abs() < 1e-12, "{t}");
        // p² never reaches p below 1
        assert_eq!(pseudo_threshold(&curve(&ps, |p| p * p)), Crossing::None { above: false });
    }

    #[test]
    fn slope_of_exact_square() {
        let ps = [3e-3, 5e-3, 1e-2, 2e-2];
        let fit = fit_scaling_exponent(&curve(&ps, |p| 7.0 * p * p), (3e-3, 2e-2)).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-6);
        assert!(fit_scaling_exponent(&curve(&ps[..2], |p| p), (0.0, 1.0)).is_err());
    }
}
