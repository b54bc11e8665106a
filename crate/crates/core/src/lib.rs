//! Generalized grey Brownian motion: M-Wright and Mittag-Leffler functions,
//! the process covariance and densities, Grünwald–Letnikov finite-difference
//! solvers and random walks for the latent factor `L_β`, exact fBm paths,
//! path ensembles, and statistical validation.
//!
//! Deterministic kernels are generic over the scalar type through
//! [`scalar::Real`]; Monte Carlo components work in `f64`. The aliases below
//! name the `f64` instantiations used throughout the samplers and the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod fbm_gen;
pub mod frac_fd;
pub mod frac_walk;
pub mod ggbm;
pub mod grey_cov;
pub mod io;
pub mod linalg;
pub mod params;
pub mod quad;
pub mod scalar;
pub mod seed;
pub mod special_fn;
pub mod stats_validate;

pub use error::{Error, Result};
pub use params::GreyParams;

pub type Params = GreyParams<f64>;
pub type Lattice = frac_fd::LatticeConfig<f64>;
pub type Coefficients = frac_fd::CoefficientTable<f64>;
pub type Density = frac_fd::DensityGrid<f64>;
pub type Stability = frac_fd::StabilityReport<f64>;
pub type TransitionMatrix = frac_walk::TransitionMatrixP<f64>;
pub type Grid = fbm_gen::TimeGrid<f64>;
pub type Factor = fbm_gen::FbmFactor<f64>;
pub type Covariance = grey_cov::CovMatrix<f64>;
pub type Matrix = linalg::SquareMatrix<f64>;
