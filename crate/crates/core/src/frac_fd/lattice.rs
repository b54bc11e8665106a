use crate::error::{domain, Result};
use crate::scalar::Real;

/// Space-time lattice on `[-a, a] × [0, 1]` with `2M` space nodes and `N`
/// time nodes. Node `j` sits at `x_j = (j - M) dx`, so the walker origin is
/// node `M` and the drift moves mass toward larger `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConfig<T> {
    pub a: T,
    pub m: usize,
    pub n: usize,
    pub dx: T,
    pub dt: T,
    pub mu: T,
}

/// Default domain half-width.
pub const DEFAULT_HALF_WIDTH: f64 = 8.0;
/// Default number of time nodes.
pub const DEFAULT_TIME_NODES: usize = 257;

/// Space nodes per time step in the default implicit lattice.
pub const IMPLICIT_REFINEMENT: usize = 4;

impl<T: Real> LatticeConfig<T> {
    pub fn new(a: T, m: usize, n: usize, beta: T) -> Result<Self> {
        if !(a > T::zero()) {
            return domain(format!("half-width must be positive, got {a}"));
        }
        if m < 2 || n < 2 {
            return domain(format!("lattice needs M >= 2 and N >= 2, got M={m}, N={n}"));
        }
        if !(beta > T::zero() && beta <= T::one()) {
            return domain(format!("beta must lie in (0, 1], got {beta}"));
        }
        let dx = T::lit(2.0) * a / T::from_usize_lossy(2 * m - 1);
        let dt = T::one() / T::from_usize_lossy(n - 1);
        let mu = dt.powf(beta) / dx;
        Ok(Self { a, m, n, dx, dt, mu })
    }

    /// Largest `M` for which the explicit scheme is stable (`mu <= beta`).
    pub fn max_stable_m(a: T, n: usize, beta: T) -> usize {
        let dt = T::one() / T::from_usize_lossy(n.max(2) - 1);
        let bound = (T::lit(2.0) * a * beta / dt.powf(beta) + T::one()) * T::lit(0.5);
        let mut m = bound.floor().to_usize().unwrap_or(2).max(2);
        while m > 2 {
            match Self::new(a, m, n, beta) {
                Ok(l) if l.mu <= beta => break,
                _ => m -= 1,
            }
        }
        m
    }

    /// Default lattice for the explicit scheme: `a = 8`, `N = 257` and the
    /// finest stable `M`.
    pub fn default_explicit(beta: T) -> Result<Self> {
        let a = T::lit(DEFAULT_HALF_WIDTH);
        let m = Self::max_stable_m(a, DEFAULT_TIME_NODES, beta);
        Self::new(a, m, DEFAULT_TIME_NODES, beta)
    }

    /// Default lattice for the implicit scheme: never coarser than the
    /// explicit default, and at least `M = 4(N - 1)` space nodes per half-line.
    pub fn default_implicit(beta: T) -> Result<Self> {
        let a = T::lit(DEFAULT_HALF_WIDTH);
        let m = Self::max_stable_m(a, DEFAULT_TIME_NODES, beta).max(IMPLICIT_REFINEMENT * (DEFAULT_TIME_NODES - 1));
        Self::new(a, m, DEFAULT_TIME_NODES, beta)
    }

    pub fn nodes(&self) -> usize {
        2 * self.m
    }

    /// Physical position of node `j`.
    pub fn x(&self, j: usize) -> T {
        (T::from_usize_lossy(j) - T::from_usize_lossy(self.m)) * self.dx
    }

    pub fn explicit_stable(&self, beta: T) -> bool {
        self.mu <= beta
    }
}
