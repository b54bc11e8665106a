use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::frac_fd::{gl_coefficients, CoefficientTable, LatticeConfig, Scheme};
use crate::seed::{stream_rng, LBETA_TAG};

/// Below this order `auto` prefers the implicit walk.
pub const AUTO_IMPLICIT_BELOW: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LbetaMethod {
    #[default]
    Auto,
    Explicit,
    Implicit,
}

impl fmt::Display for LbetaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LbetaMethod::Auto => "auto",
            LbetaMethod::Explicit => "explicit",
            LbetaMethod::Implicit => "implicit",
        })
    }
}

impl FromStr for LbetaMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(LbetaMethod::Auto),
            "explicit" => Ok(LbetaMethod::Explicit),
            "implicit" => Ok(LbetaMethod::Implicit),
            other => domain(format!("unknown L_beta method '{other}'")),
        }
    }
}

/// How a sampler actually produces values once `auto` has been resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolved {
    /// `L_1 = 1` almost surely.
    Degenerate,
    /// `|Z|` with `Z ~ N(0, 2)`, the exact law of `L_{1/2}`.
    HalfNormal,
    Walk(Scheme),
}

/// Draws `L_β` by random walks on a fixed lattice.
#[derive(Debug, Clone)]
pub struct LbetaSampler {
    beta: f64,
    lattice: LatticeConfig<f64>,
    table: CoefficientTable<f64>,
    resolved: Resolved,
}

impl LbetaSampler {
    /// Sampler for `method` on the given lattice. With `force_walk` the
    /// half-normal shortcut at `β = 1/2` is disabled.
    pub fn new(beta: f64, method: LbetaMethod, lattice: LatticeConfig<f64>, force_walk: bool) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return domain(format!("beta must lie in (0, 1], got {beta}"));
        }
        let resolved = if beta == 1.0 {
            Resolved::Degenerate
        } else {
            match method {
                LbetaMethod::Auto if beta == 0.5 && !force_walk => Resolved::HalfNormal,
                LbetaMethod::Auto if beta < AUTO_IMPLICIT_BELOW => Resolved::Walk(Scheme::Implicit),
                LbetaMethod::Auto | LbetaMethod::Explicit => Resolved::Walk(Scheme::Explicit),
                LbetaMethod::Implicit => Resolved::Walk(Scheme::Implicit),
            }
        };
        if resolved == Resolved::Walk(Scheme::Explicit) && lattice.mu > beta {
            return Err(Error::StabilityViolation { mu: lattice.mu, beta });
        }
        let order = lattice.n.max(2) - 1;
        let table = gl_coefficients(beta, order)?;
        Ok(Self { beta, lattice, table, resolved })
    }

    /// Sampler on the default lattice of whichever scheme `method` resolves to.
    pub fn with_default_lattice(beta: f64, method: LbetaMethod, force_walk: bool) -> Result<Self> {
        let implicit = match method {
            LbetaMethod::Implicit => true,
            LbetaMethod::Explicit => false,
            LbetaMethod::Auto => beta < AUTO_IMPLICIT_BELOW,
        };
        let lattice = if implicit {
            LatticeConfig::default_implicit(beta)?
        } else {
            LatticeConfig::default_explicit(beta)?
        };
        Self::new(beta, method, lattice, force_walk)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lattice(&self) -> &LatticeConfig<f64> {
        &self.lattice
    }

    pub fn resolved(&self) -> Resolved {
        self.resolved
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.resolved {
            Resolved::Degenerate => 1.0,
            Resolved::HalfNormal => {
                let z: f64 = rng.sample(StandardNormal);
                z.abs() * std::f64::consts::SQRT_2
            }
            Resolved::Walk(scheme) => {
                let mut positions = Vec::with_capacity(self.lattice.n);
                self.walk_into(scheme, rng, &mut positions);
                *positions.last().expect("walk has at least one node") as f64 * self.lattice.dx
            }
        }
    }

    /// Full walker trajectory in node offsets from the origin (`0..M`).
    pub fn trajectory<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let scheme = match self.resolved {
            Resolved::Walk(s) => s,
            _ => Scheme::Implicit,
        };
        let mut positions = Vec::with_capacity(self.lattice.n);
        self.walk_into(scheme, rng, &mut positions);
        positions
    }

    fn walk_into<R: Rng + ?Sized>(&self, scheme: Scheme, rng: &mut R, positions: &mut Vec<usize>) {
        let last = self.lattice.m - 1;
        let mu = self.lattice.mu;
        let log_q = (mu / (1.0 + mu)).ln();
        positions.clear();
        positions.push(0);
        for n in 0..self.lattice.n - 1 {
            let u: f64 = rng.random();
            let h = self.base_index(n, u);
            let base = positions[h];
            let next = match scheme {
                Scheme::Explicit => {
                    if h == n && u >= 1.0 - mu {
                        (base + 1).min(last)
                    } else {
                        base
                    }
                }
                Scheme::Implicit => {
                    let v = 1.0 - rng.random::<f64>();
                    let jump = (v.ln() / log_q).floor();
                    if jump >= (last - base) as f64 {
                        last
                    } else {
                        base + jump as usize
                    }
                }
            };
            positions.push(next);
        }
    }

    /// Index `h` of the recorded position the step `n -> n+1` starts from.
    /// `P(h' <= h) = b_{n-h}`, so the smallest `h` with `u < b_{n-h}` is drawn.
    fn base_index(&self, n: usize, u: f64) -> usize {
        let b = self.table.b_values();
        // b_{n-h} is nondecreasing in h and b_0 = 1 > u
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if u < b[n - mid] {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    /// `count` independent draws, the `i`-th from substream `(seed, "lbeta", i)`.
    pub fn sample_many(&self, count: usize, master_seed: u64) -> Vec<f64> {
        (0..count)
            .into_par_iter()
            .map(|i| self.sample(&mut stream_rng(master_seed, LBETA_TAG, i as u64)))
            .collect()
    }
}

/// One explicit-walk draw of `L_β`; `β = 1` returns 1.
pub fn sample_lbeta_explicit<R: Rng + ?Sized>(beta: f64, lat: &LatticeConfig<f64>, rng: &mut R) -> Result<f64> {
    Ok(LbetaSampler::new(beta, LbetaMethod::Explicit, *lat, true)?.sample(rng))
}

/// One implicit-walk draw of `L_β`; `β = 1` returns 1.
pub fn sample_lbeta_implicit<R: Rng + ?Sized>(beta: f64, lat: &LatticeConfig<f64>, rng: &mut R) -> Result<f64> {
    Ok(LbetaSampler::new(beta, LbetaMethod::Implicit, *lat, true)?.sample(rng))
}

pub fn sample_lbeta<R: Rng + ?Sized>(beta: f64, method: LbetaMethod, lat: &LatticeConfig<f64>, rng: &mut R) -> Result<f64> {
    Ok(LbetaSampler::new(beta, method, *lat, false)?.sample(rng))
}
