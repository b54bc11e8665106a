//! Special functions of time-fractional diffusion: the M-Wright function,
//! the Mittag-Leffler function, the Gaussian kernel, and checkable forms of
//! their integral identities.

mod gamma;
mod identities;
mod mittag_leffler;
mod mwright;

pub use gamma::{gamma, ln_gamma};
pub use identities::{
    gaussian_identity_residual, laplace_in_t_residual, laplace_in_tau_residual, mwright_convolution_residual,
    normalization_residual,
};
pub use mittag_leffler::mittag_leffler;
pub use mwright::{gaussian_kernel, lbeta_moment, m_wright, m_wright_cdf, m_wright_scaled, ScaledDensity};

use crate::error::{domain, Result};

/// Truncation policy for the power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Largest argument accepted by the public evaluators.
    pub max_argument: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_terms: 400, max_argument: 20.0 }
    }
}

impl SeriesControl {
    /// Same tolerances with no argument cap; used inside quadratures whose
    /// integrands reach far into the decaying tail.
    pub fn unbounded() -> Self {
        Self { max_argument: f64::INFINITY, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || self.max_terms == 0 {
            return domain("series control needs rel_tol > 0 and max_terms >= 1");
        }
        Ok(())
    }
}
