use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::special_fn::gamma;

/// The ggBm parameter pair: `alpha` in (0, 2) sets the scaling exponent
/// `H = alpha / 2`, `beta` in (0, 1] the fractional order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreyParams<T> {
    alpha: T,
    beta: T,
}

impl<T: Real> GreyParams<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::lit(2.0)) {
            return domain(format!("alpha must lie in (0, 2), got {alpha}"));
        }
        if !(beta > T::zero() && beta <= T::one()) {
            return domain(format!("beta must lie in (0, 1], got {beta}"));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn hurst(&self) -> T {
        self.alpha * T::lit(0.5)
    }

    /// Γ(1 + β), the normalizer of the covariance.
    pub fn gamma_one_plus_beta(&self) -> T {
        gamma(T::one() + self.beta)
    }

    pub fn is_gaussian(&self) -> bool {
        self.beta == T::one()
    }
}
