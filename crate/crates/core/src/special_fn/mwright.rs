use super::gamma::{gamma, ln_gamma};
use super::SeriesControl;
use crate::error::{domain, Error, Result};
use crate::quad::{integrate_pieces, QuadratureSpec};
use crate::scalar::{CompensatedSum, Real};

/// Above this argument the alternating series is replaced by the positive
/// integral representation.
const SERIES_CUTOFF: f64 = 1.0;

/// M-Wright function `M_β(r)` for `0 < β < 1`, `0 <= r <= max_argument`.
///
/// Small arguments use the power series in its sine form; larger ones use
/// the Zolotarev-type integral
/// `M_β(r) = r^{β/(1-β)} / (π(1-β)) ∫_0^π A(φ) exp(-r^{1/(1-β)} A(φ)) dφ`
/// whose integrand is positive, so no digits are lost to cancellation.
pub fn m_wright<T: Real>(beta: T, r: T, ctrl: &SeriesControl) -> Result<T> {
    ctrl.validate()?;
    if !(beta > T::zero() && beta < T::one()) {
        return domain(format!("M-Wright order must lie in (0, 1), got {beta}"));
    }
    if !(r >= T::zero()) {
        return domain(format!("M-Wright argument must be non-negative, got {r}"));
    }
    if r.as_f64() > ctrl.max_argument {
        return domain(format!("argument {r} beyond certified range {}", ctrl.max_argument));
    }
    if r.as_f64() <= SERIES_CUTOFF {
        series(beta, r, ctrl)
    } else {
        integral(beta, r, ctrl)
    }
}

fn series<T: Real>(beta: T, r: T, ctrl: &SeriesControl) -> Result<T> {
    let pi = T::PI();
    if r == T::zero() {
        return Ok(T::one() / gamma(T::one() - beta));
    }
    let ln_r = r.ln();
    let tol = T::lit(ctrl.rel_tol);
    let mut acc = CompensatedSum::new();
    let mut small_run = 0;
    let mut last = T::zero();
    for k in 0..ctrl.max_terms {
        let kp1 = T::from_usize_lossy(k + 1);
        let s = (pi * beta * kp1).sin();
        let magnitude = (T::from_usize_lossy(k) * ln_r - ln_gamma(kp1) + ln_gamma(beta * kp1)).exp();
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        let term = sign * magnitude * s / pi;
        acc.add(term);
        last = term;
        if term.abs() < tol * acc.value().abs() {
            small_run += 1;
            if small_run == 3 {
                return Ok(acc.value().max(T::zero()));
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::SeriesConvergence { terms: ctrl.max_terms, last_term: last.as_f64() })
}

/// ln A(φ) with A(φ) = (sin βφ / sin φ)^{1/(1-β)} sin((1-β)φ) / sin βφ.
fn ln_zolotarev<T: Real>(beta: T, phi: T) -> T {
    let one = T::one();
    let q = one - beta;
    if phi == T::zero() {
        return beta.ln() / q + (q / beta).ln();
    }
    let s_phi = if phi > T::FRAC_PI_2() { (T::PI() - phi).sin() } else { phi.sin() };
    let s_b = (beta * phi).sin();
    let s_q = (q * phi).sin();
    (s_b.ln() - s_phi.ln()) / q + s_q.ln() - s_b.ln()
}

fn integral<T: Real>(beta: T, r: T, ctrl: &SeriesControl) -> Result<T> {
    let q = T::one() - beta;
    let ln_r = r.ln();
    let c = (ln_r / q).exp();
    let prefactor_ln = beta / q * ln_r - (T::PI() * q).ln();
    let f = |phi: T| {
        let la = ln_zolotarev(beta, phi);
        let a = la.exp();
        if !a.is_finite() {
            return T::zero();
        }
        (prefactor_ln + la - c * a).exp()
    };
    let spec = QuadratureSpec {
        abs_tol: 1e-300,
        rel_tol: ctrl.rel_tol.max(1e-14),
        max_subdivisions: 4000,
        tail_bound: 1e-300,
    };
    let half_pi = T::PI() * T::lit(0.5);
    let res = integrate_pieces(f, &[T::zero(), half_pi, T::PI()], &spec)?;
    Ok(res.value)
}

/// Distribution function `∫_0^x M_β(r) dr` of the variable with density `M_β`.
pub fn m_wright_cdf<T: Real>(beta: T, x: T, ctrl: &SeriesControl) -> Result<T> {
    if !(x > T::zero()) {
        return Ok(T::zero());
    }
    let unbounded = SeriesControl { max_argument: f64::INFINITY, ..*ctrl };
    let spec = QuadratureSpec { abs_tol: 1e-14, rel_tol: 1e-12, ..QuadratureSpec::default() };
    let mut points = vec![T::zero()];
    let mut p = T::one();
    while p < x {
        points.push(p);
        p = p + T::one();
    }
    points.push(x);
    let r = integrate_pieces(|t| m_wright(beta, t, &unbounded).unwrap_or(T::nan()), &points, &spec)?;
    if r.value.is_nan() {
        return Err(Error::Quadrature { subdivisions: 0, estimate: f64::NAN });
    }
    Ok(r.value.min(T::one()))
}

/// Value of the two-argument function `𝓜_β(τ, t) = t^{-β} M_β(τ t^{-β})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScaledDensity<T> {
    Density(T),
    /// `β = 1`: the distribution collapses to a unit point mass at `τ = at`.
    PointMass { at: T },
}

impl<T: Real> ScaledDensity<T> {
    pub fn density(self) -> Option<T> {
        match self {
            ScaledDensity::Density(v) => Some(v),
            ScaledDensity::PointMass { .. } => None,
        }
    }
}

pub fn m_wright_scaled<T: Real>(beta: T, tau: T, t: T, ctrl: &SeriesControl) -> Result<ScaledDensity<T>> {
    if !(t > T::zero()) {
        return domain(format!("time must be positive, got {t}"));
    }
    if !(tau >= T::zero()) {
        return domain(format!("tau must be non-negative, got {tau}"));
    }
    if beta == T::one() {
        return Ok(ScaledDensity::PointMass { at: t });
    }
    let scale = t.powf(-beta);
    Ok(ScaledDensity::Density(scale * m_wright(beta, tau * scale, ctrl)?))
}

/// Gaussian kernel `G(x, t) = (4πt)^{-1/2} exp(-x²/(4t))`, variance `2t`.
pub fn gaussian_kernel<T: Real>(x: T, t: T) -> Result<T> {
    if !(t > T::zero()) {
        return domain(format!("time must be positive, got {t}"));
    }
    let four = T::lit(4.0);
    Ok((-x * x / (four * t)).exp() / (four * T::PI() * t).sqrt())
}

/// `E[L_β^n] = n! / Γ(βn + 1)`.
pub fn lbeta_moment<T: Real>(beta: T, n: u32) -> Result<T> {
    if !(beta > T::zero() && beta <= T::one()) {
        return domain(format!("beta must lie in (0, 1], got {beta}"));
    }
    if beta == T::one() {
        return Ok(T::one());
    }
    let nf = T::from_u32(n).expect("u32 representable");
    Ok((ln_gamma(nf + T::one()) - ln_gamma(beta * nf + T::one())).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctrl() -> SeriesControl {
        SeriesControl::default()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    // (β, r, M_β(r)) at 20 significant digits from an extended-precision
    // evaluation of the integral representation.
    const REFERENCE: [(f64, f64, f64); 19] = [
        (0.1, 0.3, 0.709_924_700_007_909_7),
        (0.1, 1.0, 0.370_290_462_751_490_86),
        (0.1, 2.5, 0.089_347_346_074_182_39),
        (0.1, 6.0, 0.002_879_532_777_129_467),
        (0.1, 12.0, 6.007_001_221_678_380_6e-6),
        (0.25, 0.3, 0.659_140_418_096_679_4),
        (0.25, 1.0, 0.383_335_416_570_683_54),
        (0.25, 2.5, 0.100_977_405_548_346_61),
        (0.25, 6.0, 0.002_271_391_588_427_374_7),
        (0.25, 12.0, 7.284_317_170_210_214e-7),
        (0.4, 0.3, 0.599_637_019_918_928),
        (0.4, 1.0, 0.410_233_594_043_826_8),
        (0.4, 2.5, 0.112_911_129_326_369_46),
        (0.4, 6.0, 0.000_697_867_323_419_364_9),
        (0.4, 12.0, 5.010_794_329_556_983e-10),
        (0.75, 0.3, 0.371_501_001_101_189_17),
        (0.75, 1.0, 0.606_598_543_590_276),
        (0.75, 2.5, 0.024_491_540_550_029_375),
        (0.9, 0.3, 0.181_940_694_507_501_67),
    ];

    #[test]
    fn matches_reference_values() {
        for (b, r, expected) in REFERENCE {
            let v = m_wright(b, r, &ctrl()).unwrap();
            assert!(close(v, expected, 1e-11), "beta={b} r={r}: {v} vs {expected}");
        }
        let v = m_wright(0.9, 1.0, &ctrl()).unwrap();
        assert!(close(v, 1.008_146_745_621_271_2, 1e-11), "{v}");
    }

    #[test]
    fn origin_values() {
        let half = m_wright(0.5, 0.0, &ctrl()).unwrap();
        assert!(close(half, 1.0 / std::f64::consts::PI.sqrt(), 1e-14));
        let v = m_wright(0.4, 0.0, &ctrl()).unwrap();
        // 1 / Γ(0.6)
        assert!(close(v, 0.671_504_972_442_073_3, 1e-13), "{v}");
    }

    #[test]
    fn half_order_is_gaussian() {
        let v = m_wright(0.5, 2.0, &ctrl()).unwrap();
        assert!(close(v, (-1.0f64).exp() / std::f64::consts::PI.sqrt(), 1e-12));
        let mut r = 0.0_f64;
        while r <= 10.0 {
            let v = m_wright(0.5, r, &ctrl()).unwrap();
            let exact = (-r * r / 4.0).exp() / std::f64::consts::PI.sqrt();
            assert!((v - exact).abs() < 1e-10, "r={r}: {v} vs {exact}");
            r += 0.05;
        }
    }

    #[test]
    fn continuous_across_method_switch() {
        for b in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let below = m_wright(b, SERIES_CUTOFF, &ctrl()).unwrap();
            let above = integral(b, SERIES_CUTOFF, &ctrl()).unwrap();
            assert!(close(below, above, 1e-11), "beta={b}: {below} vs {above}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(m_wright(0.5, -0.1, &ctrl()).is_err());
        assert!(m_wright(1.0, 0.5, &ctrl()).is_err());
        assert!(m_wright(0.0, 0.5, &ctrl()).is_err());
        assert!(matches!(m_wright(0.5, 20.5, &ctrl()), Err(Error::Domain(_))));
        assert!(m_wright(0.5, 25.0, &SeriesControl::unbounded()).is_ok());
    }

    #[test]
    fn series_budget_exhaustion_is_reported() {
        let tight = SeriesControl { max_terms: 2, ..ctrl() };
        assert!(matches!(m_wright(0.5, 0.9, &tight), Err(Error::SeriesConvergence { .. })));
    }

    #[test]
    fn scaled_form() {
        let v = m_wright_scaled(0.5, 0.0, 4.0, &ctrl()).unwrap().density().unwrap();
        assert!(close(v, 0.282_094_791_773_878_14, 1e-13));
        let v = m_wright_scaled(0.5, 1.0, 1.0, &ctrl()).unwrap().density().unwrap();
        assert!(close(v, (-0.25f64).exp() / std::f64::consts::PI.sqrt(), 1e-12));
        assert_eq!(m_wright_scaled(1.0, 0.3, 2.0, &ctrl()).unwrap(), ScaledDensity::PointMass { at: 2.0 });
        assert!(m_wright_scaled(0.5, 1.0, 0.0, &ctrl()).is_err());
    }

    #[test]
    fn gaussian_kernel_values() {
        let g0 = gaussian_kernel(0.0, 1.0).unwrap();
        assert!(close(g0, 0.282_094_791_773_878_14, 1e-14));
        let g2 = gaussian_kernel(2.0, 1.0).unwrap();
        assert!(close(g2, 0.103_776_874_355_148_1, 1e-13));
        assert!(gaussian_kernel(0.0, 0.0).is_err());
        // half the two-sided M_{1/2} kernel
        for x in [-3.0, -0.7, 0.0, 1.2, 4.0] {
            let m = m_wright_scaled(0.5, f64::abs(x), 1.7, &ctrl()).unwrap().density().unwrap();
            assert!(close(gaussian_kernel(x, 1.7).unwrap(), 0.5 * m, 1e-12));
        }
    }

    #[test]
    fn moments() {
        assert!(close(lbeta_moment(0.5, 1).unwrap(), std::f64::consts::FRAC_2_SQRT_PI, 1e-13));
        assert!(close(lbeta_moment(0.5, 2).unwrap(), 2.0, 1e-13));
        for k in 0..6 {
            assert_eq!(lbeta_moment(1.0, k).unwrap(), 1.0);
        }
        assert_eq!(lbeta_moment(0.3, 0).unwrap(), 1.0);
        assert!(lbeta_moment(1.2, 1).is_err());
    }

    #[test]
    fn cdf_reaches_one() {
        let c: f64 = m_wright_cdf(0.5, 12.0, &ctrl()).unwrap();
        assert!((c - 1.0).abs() < 1e-10);
        // |N(0,2)| cdf at 1 is erf(1/2)
        let c1: f64 = m_wright_cdf(0.5, 1.0, &ctrl()).unwrap();
        assert!((c1 - 0.520_499_877_813_046_5).abs() < 1e-11, "{c1}");
        assert_eq!(m_wright_cdf(0.3, 0.0, &ctrl()).unwrap(), 0.0);
    }

    #[test]
    fn single_precision_half_order() {
        let v: f32 = m_wright(0.5_f32, 1.5, &SeriesControl { rel_tol: 1e-6, ..ctrl() }).unwrap();
        assert!((v - (-0.5625f32).exp() / std::f32::consts::PI.sqrt()).abs() < 1e-5);
    }
}
