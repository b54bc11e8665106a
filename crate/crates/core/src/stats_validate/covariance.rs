use serde::Serialize;

use crate::error::{Error, Result};
use crate::ggbm::PathEnsemble;
use crate::linalg::SquareMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceEstimate {
    pub times: Vec<f64>,
    pub matrix: SquareMatrix<f64>,
    /// Jackknife standard error of each entry.
    pub stderr: SquareMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceEntry {
    pub i: usize,
    pub j: usize,
    pub estimate: f64,
    pub stderr: f64,
}

impl CovarianceEstimate {
    pub fn entries(&self) -> Vec<CovarianceEntry> {
        let n = self.times.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                out.push(CovarianceEntry { i, j, estimate: self.matrix.get(i, j), stderr: self.stderr.get(i, j) });
            }
        }
        out
    }
}

/// Unbiased covariance of the columns of `samples` (one row per path) with
/// leave-one-out jackknife standard errors.
pub fn covariance_with_jackknife(samples: &[Vec<f64>], times: &[f64]) -> Result<CovarianceEstimate> {
    let n = samples.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!("jackknife needs at least 3 paths, got {n}")));
    }
    let d = times.len();
    let nf = n as f64;
    let means: Vec<f64> = (0..d).map(|k| samples.iter().map(|r| r[k]).sum::<f64>() / nf).collect();
    let centered: Vec<Vec<f64>> = samples.iter().map(|r| r.iter().zip(&means).map(|(v, m)| v - m).collect()).collect();
    let mut matrix = SquareMatrix::zeros(d);
    let mut stderr = SquareMatrix::zeros(d);
    for a in 0..d {
        for b in a..d {
            let (mut sx, mut sy, mut sxy) = (0.0, 0.0, 0.0);
            for r in &centered {
                sx += r[a];
                sy += r[b];
                sxy += r[a] * r[b];
            }
            let full = (sxy - sx * sy / nf) / (nf - 1.0);
            // leave-one-out covariances
            let loo: Vec<f64> = centered
                .iter()
                .map(|r| {
                    let (x, y) = (r[a], r[b]);
                    let (tx, ty) = (sx - x, sy - y);
                    (sxy - x * y - tx * ty / (nf - 1.0)) / (nf - 2.0)
                })
                .collect();
            let mean_loo = loo.iter().sum::<f64>() / nf;
            let var: f64 = loo.iter().map(|v| (v - mean_loo) * (v - mean_loo)).sum::<f64>() * (nf - 1.0) / nf;
            matrix.set(a, b, full);
            matrix.set(b, a, full);
            stderr.set(a, b, var.sqrt());
            stderr.set(b, a, var.sqrt());
        }
    }
    Ok(CovarianceEstimate { times: times.to_vec(), matrix, stderr })
}

/// Empirical covariance of an ensemble at the given grid times.
pub fn empirical_covariance(ensemble: &PathEnsemble, times: &[f64]) -> Result<CovarianceEstimate> {
    let idx = times
        .iter()
        .map(|&t| ensemble.index_of(t).ok_or_else(|| Error::Domain(format!("time {t} is not on the ensemble grid"))))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<f64>> = ensemble.paths.iter().map(|p| idx.iter().map(|&k| p[k]).collect()).collect();
    covariance_with_jackknife(&rows, times)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_ensemble() {
        let rows = vec![vec![0.0; 3]; 10];
        let c = covariance_with_jackknife(&rows, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(c.matrix, SquareMatrix::zeros(3));
        assert_eq!(c.stderr, SquareMatrix::zeros(3));
    }

    #[test]
    fn matches_direct_formula() {
        let rows = vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![4.0, 5.0], vec![0.0, 3.0]];
        let c = covariance_with_jackknife(&rows, &[1.0, 2.0]).unwrap();
        // x mean 1.75, y mean 2.75
        let sxy = (-0.75 * -0.75) + (0.25 * -1.75) + (2.25 * 2.25) + (-1.75 * 0.25);
        assert!((c.matrix.get(0, 1) - sxy / 3.0).abs() < 1e-14);
        // jackknife SE by brute force
        let loo: Vec<f64> = (0..4)
            .map(|i| {
                let r: Vec<&Vec<f64>> = rows.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, r)| r).collect();
                let mx = r.iter().map(|v| v[0]).sum::<f64>() / 3.0;
                let my = r.iter().map(|v| v[1]).sum::<f64>() / 3.0;
                r.iter().map(|v| (v[0] - mx) * (v[1] - my)).sum::<f64>() / 2.0
            })
            .collect();
        let m = loo.iter().sum::<f64>() / 4.0;
        let se = (loo.iter().map(|v| (v - m).powi(2)).sum::<f64>() * 3.0 / 4.0).sqrt();
        assert!((c.stderr.get(0, 1) - se).abs() < 1e-13);
    }

    #[test]
    fn too_few_paths() {
        assert!(covariance_with_jackknife(&[vec![1.0], vec![2.0]], &[1.0]).is_err());
    }
}
