//! Grünwald–Letnikov discretization of the time-fractional forward drift
//! equation `D_t^β u = -∂_x u`, with explicit and implicit schemes.

mod coeffs;
mod lattice;
mod schemes;
mod stability;

pub use coeffs::{gl_coefficients, gl_recurrence, CoefficientTable};
pub use lattice::{LatticeConfig, DEFAULT_HALF_WIDTH, DEFAULT_TIME_NODES, IMPLICIT_REFINEMENT};
pub use schemes::{
    explicit_step, implicit_step, lambda_matrix, solve_drift, solve_drift_history, DensityGrid, Scheme,
};
pub use stability::{amplification_factors, StabilityReport};
