//! Generalized grey Brownian motion paths `B(t) = √L_β · X_α(t)`.

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::fbm_gen::{factor_covariance, sample_fbm, FbmFactor, TimeGrid};
use crate::frac_walk::{LbetaMethod, LbetaSampler, Resolved};
use crate::params::GreyParams;
use crate::seed::{stream_rng, FBM_TAG, LBETA_TAG};

/// How the latent `L_β` values of an ensemble were produced.
#[derive(Debug, Clone, PartialEq)]
pub struct LbetaProvenance {
    pub method: String,
    /// `(a, M, N)` of the walk lattice, when a walk was used.
    pub lattice: Option<(f64, usize, usize)>,
}

impl LbetaProvenance {
    pub fn from_sampler(sampler: &LbetaSampler) -> Self {
        let (method, walk) = match sampler.resolved() {
            Resolved::Degenerate => ("degenerate".to_string(), false),
            Resolved::HalfNormal => ("half-normal".to_string(), false),
            Resolved::Walk(s) => (s.to_string(), true),
        };
        let l = sampler.lattice();
        Self { method, lattice: walk.then_some((l.a, l.m, l.n)) }
    }
}

/// An immutable ensemble of sample paths on `0, t_1, …, t_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    pub params: GreyParams<f64>,
    pub grid: TimeGrid<f64>,
    pub master_seed: u64,
    pub provenance: LbetaProvenance,
    /// One row per path, each of length `n_points + 1` and starting at 0.
    pub paths: Vec<Vec<f64>>,
    /// Latent `L_β` per path; absent when `β = 1`.
    pub lbeta_values: Option<Vec<f64>>,
}

impl PathEnsemble {
    pub fn n_paths(&self) -> usize {
        self.paths.len()
    }

    pub fn times(&self) -> Vec<f64> {
        self.grid.times_with_origin()
    }

    /// Values of every path at grid index `k` (`k = 0` is the origin).
    pub fn column(&self, k: usize) -> Vec<f64> {
        self.paths.iter().map(|p| p[k]).collect()
    }

    /// Grid index of time `t`, if `t` is a grid node up to rounding.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let k = (t / self.grid.dt()).round();
        let ok = k >= 0.0 && (k as usize) <= self.grid.n_points() && (k * self.grid.dt() - t).abs() <= 1e-9 * t.abs().max(1.0);
        ok.then_some(k as usize)
    }
}

/// Generates `n_paths` paths, drawing `L_β` with the default lattice for `method`.
pub fn generate_ensemble(
    params: &GreyParams<f64>,
    grid: &TimeGrid<f64>,
    n_paths: usize,
    master_seed: u64,
    method: LbetaMethod,
) -> Result<PathEnsemble> {
    let sampler = LbetaSampler::with_default_lattice(params.beta(), method, false)?;
    generate_ensemble_with(params, grid, n_paths, master_seed, &sampler)
}

/// Generates an ensemble with an explicit `L_β` sampler. Path `i` takes
/// `L_β` from substream `(seed, "lbeta", i)` and its fBm from `(seed, "fbm", i)`.
pub fn generate_ensemble_with(
    params: &GreyParams<f64>,
    grid: &TimeGrid<f64>,
    n_paths: usize,
    master_seed: u64,
    sampler: &LbetaSampler,
) -> Result<PathEnsemble> {
    if sampler.beta() != params.beta() {
        return domain(format!("sampler beta {} differs from process beta {}", sampler.beta(), params.beta()));
    }
    let factor = factor_covariance(params.alpha(), grid)?;
    let gaussian = params.is_gaussian();
    let draws: Vec<(f64, Vec<f64>)> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let l = if gaussian { 1.0 } else { sampler.sample(&mut stream_rng(master_seed, LBETA_TAG, i as u64)) };
            let mut path = fbm_path(&factor, master_seed, i);
            if !gaussian {
                let s = l.sqrt();
                path.iter_mut().for_each(|v| *v *= s);
            }
            (l, path)
        })
        .collect();
    let (lbeta, paths): (Vec<f64>, Vec<Vec<f64>>) = draws.into_iter().unzip();
    Ok(PathEnsemble {
        params: *params,
        grid: *grid,
        master_seed,
        provenance: LbetaProvenance::from_sampler(sampler),
        paths,
        lbeta_values: (!gaussian).then_some(lbeta),
    })
}

/// The fBm component of path `i` alone.
pub fn fbm_path(factor: &FbmFactor<f64>, master_seed: u64, i: usize) -> Vec<f64> {
    sample_fbm(factor, &mut stream_rng(master_seed, FBM_TAG, i as u64))
}

/// Pure fBm ensemble drawn from the same substreams as [`generate_ensemble`].
pub fn fbm_ensemble(alpha: f64, grid: &TimeGrid<f64>, n_paths: usize, master_seed: u64) -> Result<Vec<Vec<f64>>> {
    let factor = factor_covariance(alpha, grid)?;
    Ok((0..n_paths).into_par_iter().map(|i| fbm_path(&factor, master_seed, i)).collect())
}

/// First differences `Z(t_k) = B(t_k) - B(t_{k-1})` along each path.
pub fn increments(ensemble: &PathEnsemble) -> Vec<Vec<f64>> {
    ensemble.paths.iter().map(|p| p.windows(2).map(|w| w[1] - w[0]).collect()).collect()
}
