use crate::error::{domain, Result};
use crate::scalar::Real;

/// Discrete-Fourier stability diagnostics for both schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport<T> {
    /// `max_k |β - μ + μ e^{-iπk/M}|`.
    pub explicit_max_modulus: T,
    /// `min_k |1 + μ - μ e^{-iπk/M}|²`, the inverse squared implicit factor.
    pub implicit_min_inverse_sq: T,
    /// `|ξ_e| <= 1` on every mode.
    pub explicit_bounded: bool,
    /// Every coefficient of the explicit symbol is non-negative (`μ <= β`),
    /// so each `ξ_e(k)` is a convex combination of unit-modulus terms.
    pub explicit_positive: bool,
    pub implicit_stable: bool,
}

impl<T> StabilityReport<T> {
    /// The explicit scheme is accepted only when it is both bounded and
    /// positivity preserving.
    pub fn explicit_stable(&self) -> bool {
        self.explicit_bounded && self.explicit_positive
    }
}

/// Evaluates the amplification factors `ξ_e(k) = β - μ + μ e^{-iπk/M}` and
/// `ξ_i(k) = (1 + μ - μ e^{-iπk/M})^{-1}` over `k = 0..2M`.
pub fn amplification_factors<T: Real>(beta: T, mu: T, m: usize) -> Result<StabilityReport<T>> {
    if !(mu > T::zero()) {
        return domain(format!("mu must be positive, got {mu}"));
    }
    if !(beta > T::zero() && beta <= T::one()) || m == 0 {
        return domain("beta must lie in (0, 1] and M >= 1");
    }
    let two = T::lit(2.0);
    let one = T::one();
    let mut max_e = T::zero();
    let mut min_i = T::infinity();
    let mf = T::from_usize_lossy(m);
    for k in 0..(2 * m) {
        let cos = (T::PI() * T::from_usize_lossy(k) / mf).cos();
        let d = beta - mu;
        let e_sq = d * d + mu * mu + two * mu * d * cos;
        let i_sq = (one + mu) * (one + mu) + mu * mu - two * mu * (one + mu) * cos;
        max_e = max_e.max(e_sq.max(T::zero()).sqrt());
        min_i = min_i.min(i_sq);
    }
    let slack = T::lit(64.0) * T::epsilon();
    Ok(StabilityReport {
        explicit_max_modulus: max_e,
        implicit_min_inverse_sq: min_i,
        explicit_bounded: max_e <= one + slack,
        explicit_positive: mu <= beta,
        implicit_stable: min_i >= one - slack,
    })
}
