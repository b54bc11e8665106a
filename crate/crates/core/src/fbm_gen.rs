//! Exact fractional Brownian motion on a uniform grid by Cholesky
//! factorization, normalized so that `E[X(t)^2] = 2 t^α`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{domain, Error, Result};
use crate::grey_cov::fbm_cov;
use crate::linalg::{cholesky, SquareMatrix};
use crate::scalar::Real;

pub const MAX_GRID_POINTS: usize = 4096;

const JITTER_START: f64 = 1e-12;
const JITTER_MAX: f64 = 1e-8;

/// Times `t_k = k dt` for `k = 1..=n_points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    n_points: usize,
    dt: T,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(n_points: usize, dt: T) -> Result<Self> {
        if n_points == 0 {
            return domain("time grid needs at least one point");
        }
        if !(dt > T::zero()) || !dt.is_finite() {
            return domain(format!("dt must be positive and finite, got {dt}"));
        }
        Ok(Self { n_points, dt })
    }

    /// `n_points` steps ending at `horizon`.
    pub fn with_horizon(n_points: usize, horizon: T) -> Result<Self> {
        if n_points == 0 {
            return domain("time grid needs at least one point");
        }
        Self::new(n_points, horizon / T::from_usize_lossy(n_points))
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn time(&self, k: usize) -> T {
        T::from_usize_lossy(k) * self.dt
    }

    /// `t_1..t_n`, excluding the origin.
    pub fn times(&self) -> Vec<T> {
        (1..=self.n_points).map(|k| self.time(k)).collect()
    }

    /// `0, t_1, …, t_n`.
    pub fn times_with_origin(&self) -> Vec<T> {
        (0..=self.n_points).map(|k| self.time(k)).collect()
    }
}

/// Cholesky factor of the fBm covariance on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmFactor<T> {
    grid: TimeGrid<T>,
    alpha: T,
    lower: SquareMatrix<T>,
    jitter_used: T,
}

impl<T: Real> FbmFactor<T> {
    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn lower(&self) -> &SquareMatrix<T> {
        &self.lower
    }

    /// Diagonal shift that made the factorization succeed (zero if none).
    pub fn jitter_used(&self) -> T {
        self.jitter_used
    }

    /// Path `X(t_0 = 0), X(t_1), …` for a given vector of standard normals.
    pub fn path_from_normals(&self, z: &[T]) -> Vec<T> {
        let n = self.grid.n_points();
        assert_eq!(z.len(), n, "need one normal per grid point");
        let mut out = Vec::with_capacity(n + 1);
        out.push(T::zero());
        for i in 0..n {
            let row = &self.lower.row(i)[..=i];
            out.push(row.iter().zip(z).map(|(&l, &zi)| l * zi).sum());
        }
        out
    }

    /// Relative Frobenius error of `L Lᵀ` against the exact covariance.
    pub fn reconstruction_error(&self) -> T {
        let sigma = covariance_matrix(self.alpha, &self.grid);
        let rebuilt = self.lower.matmul(&self.lower.transpose());
        let diff = SquareMatrix::from_fn(sigma.dim(), |i, j| rebuilt.get(i, j) - sigma.get(i, j));
        diff.frobenius() / sigma.frobenius()
    }
}

/// `Σ_{ij} = t_i^α + t_j^α - |t_i - t_j|^α` on the grid points.
pub fn covariance_matrix<T: Real>(alpha: T, grid: &TimeGrid<T>) -> SquareMatrix<T> {
    let t = grid.times();
    SquareMatrix::from_fn(t.len(), |i, j| fbm_cov(alpha, t[i], t[j]))
}

/// Cholesky factor of the fBm covariance. If a pivot fails, a diagonal
/// jitter of `1e-12 · max diag` is added and raised tenfold up to `1e-8`.
pub fn factor_covariance<T: Real>(alpha: T, grid: &TimeGrid<T>) -> Result<FbmFactor<T>> {
    if !(alpha > T::zero() && alpha < T::lit(2.0)) {
        return domain(format!("alpha must lie in (0, 2), got {alpha}"));
    }
    if grid.n_points() > MAX_GRID_POINTS {
        return domain(format!("grid of {} points exceeds the maximum {MAX_GRID_POINTS}", grid.n_points()));
    }
    let sigma = covariance_matrix(alpha, grid);
    let max_diag = (0..sigma.dim()).map(|i| sigma.get(i, i)).fold(T::zero(), T::max);
    let mut jitter = T::zero();
    let mut rel = JITTER_START;
    loop {
        if let Some(lower) = cholesky(&sigma, jitter) {
            return Ok(FbmFactor { grid: *grid, alpha, lower, jitter_used: jitter });
        }
        if rel > JITTER_MAX * (1.0 + 1e-9) {
            return Err(Error::Factorization { jitter: jitter.as_f64() });
        }
        jitter = T::lit(rel) * max_diag;
        rel *= 10.0;
    }
}

/// One fBm path with `X(0) = 0` prepended.
pub fn sample_fbm<T: Real, R: Rng + ?Sized>(factor: &FbmFactor<T>, rng: &mut R) -> Vec<T>
where
    StandardNormal: Distribution<T>,
{
    let z: Vec<T> = (0..factor.grid.n_points()).map(|_| StandardNormal.sample(rng)).collect();
    factor.path_from_normals(&z)
}
