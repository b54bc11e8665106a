use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::ggbm::PathEnsemble;
use crate::scalar::pairwise_sum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub stderr_slope: f64,
}

/// Ordinary least squares of `y` on `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<FitReport> {
    if x.len() != y.len() {
        return domain("x and y must have the same length");
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!("need at least 3 points, got {n}")));
    }
    let nf = n as f64;
    let mx = pairwise_sum(x) / nf;
    let my = pairwise_sum(y) / nf;
    let sxx: f64 = x.iter().map(|&v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|&v| (v - my) * (v - my)).sum();
    if !(sxx > 0.0) {
        return domain("x values are all equal");
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(&a, &b)| (b - intercept - slope * a).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    let stderr_slope = (sse / (nf - 2.0) / sxx).sqrt();
    Ok(FitReport { slope, intercept, r_squared, stderr_slope })
}

/// Unbiased cross-sectional variance.
pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    let dev: Vec<f64> = values.iter().map(|&v| (v - mean) * (v - mean)).collect();
    pairwise_sum(&dev) / (n - 1.0)
}

/// Log-log regression of variance against time from `(t, variance)` pairs.
pub fn log_log_fit(times: &[f64], variances: &[f64]) -> Result<FitReport> {
    if let Some((t, v)) = times.iter().zip(variances).find(|(&t, &v)| !(t > 0.0 && v > 0.0)) {
        return domain(format!("non-positive time or variance ({t}, {v})"));
    }
    let lx: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = variances.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly)
}

/// Slope of log sample variance versus log time at the given ensemble times.
pub fn variance_slope(ensemble: &PathEnsemble, times: &[f64]) -> Result<FitReport> {
    if ensemble.n_paths() < 2 {
        return Err(Error::InsufficientData("need at least two paths".into()));
    }
    let mut variances = Vec::with_capacity(times.len());
    for &t in times {
        let k = ensemble.index_of(t).ok_or_else(|| Error::Domain(format!("time {t} is not on the ensemble grid")))?;
        variances.push(sample_variance(&ensemble.column(k)));
    }
    log_log_fit(times, &variances)
}
