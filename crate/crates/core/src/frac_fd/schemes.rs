use std::fmt;
use std::str::FromStr;

use super::coeffs::{gl_coefficients, CoefficientTable};
use super::lattice::LatticeConfig;
use crate::error::{domain, Error, Result};
use crate::linalg::SquareMatrix;
use crate::scalar::Real;

/// Tolerance below zero accepted before a grid is declared negative.
const NEGATIVE_TOL: f64 = -1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Explicit,
    Implicit,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Explicit => "explicit",
            Scheme::Implicit => "implicit",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(Scheme::Explicit),
            "implicit" => Ok(Scheme::Implicit),
            other => domain(format!("unknown scheme '{other}'")),
        }
    }
}

/// Density values `u_j^n` on all `2M` nodes at one time index.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid<T> {
    pub u: Vec<T>,
    pub time_index: usize,
    pub mass: T,
}

impl<T: Real> DensityGrid<T> {
    pub fn new(u: Vec<T>, time_index: usize, dx: T) -> Self {
        let mass = u.iter().copied().sum::<T>() * dx;
        Self { u, time_index, mass }
    }

    /// Discrete delta of unit mass at the origin node.
    pub fn delta(lat: &LatticeConfig<T>) -> Self {
        let mut u = vec![T::zero(); lat.nodes()];
        u[lat.m] = T::one() / lat.dx;
        Self::new(u, 0, lat.dx)
    }

    /// Node probabilities `u_j dx`.
    pub fn probabilities(&self, dx: T) -> Vec<T> {
        self.u.iter().map(|&v| v * dx).collect()
    }
}

fn check_history<T: Real>(table: &CoefficientTable<T>, lat: &LatticeConfig<T>, history: &[DensityGrid<T>]) -> Result<usize> {
    let Some(last) = history.last() else {
        return domain("history must contain at least the initial grid");
    };
    let n = history.len() - 1;
    if last.time_index != n {
        return domain(format!("history is not contiguous: last index {} at position {n}", last.time_index));
    }
    if n > table.order() {
        return domain(format!("coefficient table of order {} too short for step {}", table.order(), n + 1));
    }
    if history.iter().any(|g| g.u.len() != lat.nodes()) {
        return domain("grid size does not match the lattice");
    }
    Ok(n)
}

/// Memory part of both schemes: `b_n u^0 + Σ_{k=1..n} c_k u^{n+1-k}`.
fn memory_term<T: Real>(table: &CoefficientTable<T>, history: &[DensityGrid<T>], n: usize) -> Vec<T> {
    let b = table.b(n);
    let mut acc: Vec<T> = history[0].u.iter().map(|&v| b * v).collect();
    for k in 1..=n {
        let ck = table.c(k);
        for (a, &v) in acc.iter_mut().zip(&history[n + 1 - k].u) {
            *a = *a + ck * v;
        }
    }
    acc
}

/// One step of the explicit scheme,
/// `u_j^{n+1} = b_n u_j^0 + Σ c_k u_j^{n+1-k} + μ (u_{j-1}^n - u_j^n)`,
/// with both boundary nodes held at zero.
pub fn explicit_step<T: Real>(table: &CoefficientTable<T>, lat: &LatticeConfig<T>, history: &[DensityGrid<T>]) -> Result<DensityGrid<T>> {
    if lat.mu > table.beta() {
        return Err(Error::StabilityViolation { mu: lat.mu.as_f64(), beta: table.beta().as_f64() });
    }
    let n = check_history(table, lat, history)?;
    let mut next = memory_term(table, history, n);
    let prev = &history[n].u;
    let last = lat.nodes() - 1;
    for j in 1..last {
        next[j] = next[j] + lat.mu * (prev[j - 1] - prev[j]);
    }
    next[0] = T::zero();
    next[last] = T::zero();
    let tol = T::lit(NEGATIVE_TOL);
    if let Some((j, &v)) = next.iter().enumerate().find(|(_, &v)| v < tol) {
        return Err(Error::NegativeDensity { node: j, step: n + 1, value: v.as_f64() });
    }
    Ok(DensityGrid::new(next, n + 1, lat.dx))
}

/// One step of the implicit scheme, solving
/// `(1 + μ) u_j^{n+1} - μ u_{j-1}^{n+1} = b_n u_j^0 + Σ c_k u_j^{n+1-k}`
/// by forward substitution along the lower-bidiagonal system.
pub fn implicit_step<T: Real>(table: &CoefficientTable<T>, lat: &LatticeConfig<T>, history: &[DensityGrid<T>]) -> Result<DensityGrid<T>> {
    let n = check_history(table, lat, history)?;
    let rhs = memory_term(table, history, n);
    let last = lat.nodes() - 1;
    let inv = T::one() / (T::one() + lat.mu);
    let mut next = vec![T::zero(); lat.nodes()];
    for j in 1..last {
        next[j] = (rhs[j] + lat.mu * next[j - 1]) * inv;
    }
    Ok(DensityGrid::new(next, n + 1, lat.dx))
}

/// Runs either scheme from the discrete delta and keeps the full history.
pub fn solve_drift_history<T: Real>(beta: T, lat: &LatticeConfig<T>, scheme: Scheme) -> Result<Vec<DensityGrid<T>>> {
    let table = gl_coefficients(beta, lat.n.max(2) - 1)?;
    if scheme == Scheme::Explicit && lat.mu > beta {
        return Err(Error::StabilityViolation { mu: lat.mu.as_f64(), beta: beta.as_f64() });
    }
    let mut history = Vec::with_capacity(lat.n);
    history.push(DensityGrid::delta(lat));
    for _ in 1..lat.n {
        let next = match scheme {
            Scheme::Explicit => explicit_step(&table, lat, &history)?,
            Scheme::Implicit => implicit_step(&table, lat, &history)?,
        };
        history.push(next);
    }
    Ok(history)
}

/// Density at `t = 1` (time index `N - 1`) from the delta initial datum.
pub fn solve_drift<T: Real>(beta: T, lat: &LatticeConfig<T>, scheme: Scheme) -> Result<DensityGrid<T>> {
    Ok(solve_drift_history(beta, lat, scheme)?.pop().expect("N >= 2"))
}

/// The `2M × 2M` implicit-scheme matrix Λ: unit first row, `(-μ, 1 + μ)`
/// interior rows, and `(-μ, 1)` in the last row.
pub fn lambda_matrix<T: Real>(lat: &LatticeConfig<T>) -> SquareMatrix<T> {
    let size = lat.nodes();
    let mut l = SquareMatrix::zeros(size);
    l.set(0, 0, T::one());
    for i in 1..size {
        l.set(i, i - 1, -lat.mu);
        l.set(i, i, if i + 1 == size { T::one() } else { T::one() + lat.mu });
    }
    l
}
