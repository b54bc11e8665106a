//! Residuals of the integral identities satisfied by `M_β`, evaluated by
//! adaptive quadrature. Each returns an absolute residual, so a correct
//! implementation yields values at the quadrature tolerance.

use super::mittag_leffler::mittag_leffler;
use super::mwright::{gaussian_kernel, lbeta_moment, m_wright, m_wright_scaled, ScaledDensity};
use super::SeriesControl;
use crate::error::{domain, Result};
use crate::quad::{integrate, integrate_to_infinity, truncation_by_moments, QuadratureSpec};
use crate::scalar::Real;

fn check_open_unit<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v < T::one() {
        Ok(())
    } else {
        domain(format!("{name} must lie in (0, 1), got {v}"))
    }
}

/// Point beyond which `L_β` (scaled by `scale`) carries less than `tail` mass.
fn lbeta_cutoff(beta: f64, scale: f64, tail: f64) -> f64 {
    scale * truncation_by_moments(|n| lbeta_moment(beta, n).unwrap_or(f64::INFINITY), tail, 60)
}

/// Crude upper bound on `sup_r M_η(r)`, padded by a factor of two.
fn mwright_sup<T: Real>(eta: T, ctrl: &SeriesControl) -> T {
    (0..=80)
        .map(|i| m_wright(eta, T::lit(0.05 * i as f64), ctrl).unwrap_or(T::one()))
        .fold(T::zero(), T::max)
        * T::lit(2.0)
}

/// `|∫_0^∞ M_β(r) dr - 1|`.
pub fn normalization_residual<T: Real>(beta: T, quad: &QuadratureSpec) -> Result<T> {
    check_open_unit("beta", beta)?;
    let ctrl = SeriesControl::unbounded();
    let upper = T::lit(lbeta_cutoff(beta.as_f64(), 1.0, quad.tail_bound));
    let r = integrate(|x| m_wright(beta, x, &ctrl).unwrap_or(T::nan()), T::zero(), upper, quad)?;
    Ok((r.value - T::one()).abs())
}

/// Laplace pair in the first argument:
/// `|∫_0^∞ e^{-sτ} 𝓜_β(τ, t) dτ - E_β(-s t^β)|`.
pub fn laplace_in_tau_residual<T: Real>(beta: T, s: T, t: T, quad: &QuadratureSpec) -> Result<T> {
    check_open_unit("beta", beta)?;
    if !(s >= T::zero() && t > T::zero()) {
        return domain("laplace_in_tau needs s >= 0 and t > 0");
    }
    let ctrl = SeriesControl::unbounded();
    let scale = t.powf(beta);
    let upper = T::lit(lbeta_cutoff(beta.as_f64(), scale.as_f64(), quad.tail_bound));
    let f = |tau: T| (-s * tau).exp() * m_wright(beta, tau / scale, &ctrl).unwrap_or(T::nan()) / scale;
    let lhs = integrate(f, T::zero(), upper, quad)?.value;
    let rhs = mittag_leffler(beta, -s * scale, &ctrl)?;
    Ok((lhs - rhs).abs())
}

/// Laplace pair in the second argument:
/// `|∫_0^∞ e^{-st} 𝓜_β(τ, t) dt - s^{β-1} e^{-τ s^β}|`.
///
/// The substitution `t = u^{1/(1-β)}` removes the `t^{-β}` endpoint
/// singularity.
pub fn laplace_in_t_residual<T: Real>(beta: T, tau: T, s: T, quad: &QuadratureSpec) -> Result<T> {
    check_open_unit("beta", beta)?;
    if !(s > T::zero() && tau >= T::zero()) {
        return domain("laplace_in_t needs s > 0 and tau >= 0");
    }
    let ctrl = SeriesControl::unbounded();
    let q = T::one() - beta;
    let f = |u: T| {
        if u == T::zero() {
            return if tau == T::zero() { T::one() / (q * super::gamma(q)) } else { T::zero() };
        }
        let t = u.powf(T::one() / q);
        let arg = tau * t.powf(-beta);
        (-s * t).exp() * m_wright(beta, arg, &ctrl).unwrap_or(T::nan()) / q
    };
    let lhs = integrate_to_infinity(f, T::zero(), quad)?.value;
    let rhs = s.powf(beta - T::one()) * (-tau * s.powf(beta)).exp();
    Ok((lhs - rhs).abs())
}

/// Convolution identity residual
/// `|𝓜_{ηβ}(x, 1) - ∫_0^∞ 𝓜_η(x, τ) 𝓜_β(τ, 1) dτ|`.
///
/// For `β = 1` the inner kernel is a point mass at `τ = 1` and the identity
/// reduces to `𝓜_η(x, 1) = M_η(x)`.
pub fn mwright_convolution_residual<T: Real>(eta: T, beta: T, x: T, quad: &QuadratureSpec) -> Result<T> {
    check_open_unit("eta", eta)?;
    if !(beta > T::zero() && beta <= T::one()) {
        return domain(format!("beta must lie in (0, 1], got {beta}"));
    }
    if !(x >= T::zero()) {
        return domain(format!("x must be non-negative, got {x}"));
    }
    let ctrl = SeriesControl::unbounded();
    let lhs = m_wright(eta * beta, x, &ctrl)?;
    let rhs = match m_wright_scaled(beta, T::one(), T::one(), &ctrl)? {
        ScaledDensity::PointMass { at } => m_wright_scaled(eta, x, at, &ctrl)?
            .density()
            .expect("eta < 1 yields a density"),
        ScaledDensity::Density(_) => {
            // τ = u^{1/(1-η)} turns τ^{-η} dτ into du / (1 - η)
            let q = T::one() - eta;
            let bound = mwright_sup(eta, &ctrl).as_f64();
            let tau_max = lbeta_cutoff(beta.as_f64(), 1.0, quad.tail_bound / bound.max(1.0)).max(1.0);
            let u_max = T::lit(tau_max.powf(q.as_f64()));
            let f = |u: T| {
                let tau = u.powf(T::one() / q);
                let inner = if u == T::zero() {
                    if x == T::zero() {
                        T::one() / super::gamma(q)
                    } else {
                        T::zero()
                    }
                } else {
                    m_wright(eta, x * tau.powf(-eta), &ctrl).unwrap_or(T::nan())
                };
                inner * m_wright(beta, tau, &ctrl).unwrap_or(T::nan()) / q
            };
            integrate(f, T::zero(), u_max, quad)?.value
        }
    };
    Ok((lhs - rhs).abs())
}

/// `|G(x, t) - 𝓜_{1/2}(|x|, t) / 2|`.
pub fn gaussian_identity_residual<T: Real>(x: T, t: T) -> Result<T> {
    let ctrl = SeriesControl::unbounded();
    let g = gaussian_kernel(x, t)?;
    let m = m_wright_scaled(T::lit(0.5), x.abs(), t, &ctrl)?.density().expect("order 1/2");
    Ok((g - T::lit(0.5) * m).abs())
}
