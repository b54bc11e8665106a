use super::gamma::ln_gamma;
use super::SeriesControl;
use crate::error::{domain, Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadratureSpec};
use crate::scalar::{CompensatedSum, Real};

/// Below this (negative) argument the series is replaced by the spectral
/// integral, which has a positive integrand.
const SERIES_CUTOFF: f64 = -1.0;

/// One-parameter Mittag-Leffler function `E_β(x) = Σ x^n / Γ(βn + 1)`.
///
/// `β = 1` returns `exp(x)` for any `x`. For `β < 1` the argument must
/// satisfy `|x| <= max_argument`. Large negative arguments are evaluated
/// through `E_β(-x) = sin(βπ)/(βπ) ∫_0^∞ x exp(-w^{1/β}) / (w² + 2wx cos βπ + x²) dw`.
pub fn mittag_leffler<T: Real>(beta: T, x: T, ctrl: &SeriesControl) -> Result<T> {
    ctrl.validate()?;
    if !(beta > T::zero() && beta <= T::one()) {
        return domain(format!("Mittag-Leffler order must lie in (0, 1], got {beta}"));
    }
    if !x.is_finite() {
        return domain("Mittag-Leffler argument must be finite");
    }
    if beta == T::one() {
        return Ok(x.exp());
    }
    if x.abs().as_f64() > ctrl.max_argument {
        return domain(format!("argument {x} beyond certified range {}", ctrl.max_argument));
    }
    if x.as_f64() >= SERIES_CUTOFF {
        series(beta, x, ctrl)
    } else {
        spectral(beta, -x, ctrl)
    }
}

fn series<T: Real>(beta: T, x: T, ctrl: &SeriesControl) -> Result<T> {
    if x == T::zero() {
        return Ok(T::one());
    }
    let tol = T::lit(ctrl.rel_tol);
    let ln_abs = x.abs().ln();
    let negative = x < T::zero();
    let mut acc = CompensatedSum::new();
    let mut small_run = 0;
    let mut last = T::zero();
    for n in 0..ctrl.max_terms {
        let nf = T::from_usize_lossy(n);
        let magnitude = (nf * ln_abs - ln_gamma(beta * nf + T::one())).exp();
        let term = if negative && n % 2 == 1 { -magnitude } else { magnitude };
        if !term.is_finite() {
            return Err(Error::SeriesConvergence { terms: n, last_term: f64::INFINITY });
        }
        acc.add(term);
        last = term;
        if term.abs() < tol * acc.value().abs() {
            small_run += 1;
            if small_run == 3 {
                return Ok(acc.value());
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::SeriesConvergence { terms: ctrl.max_terms, last_term: last.as_f64() })
}

/// `E_β(-s)` for `s > 0`.
fn spectral<T: Real>(beta: T, s: T, ctrl: &SeriesControl) -> Result<T> {
    let pi = T::PI();
    let two = T::lit(2.0);
    let cos_bp = (beta * pi).cos();
    let inv_beta = T::one() / beta;
    let f = |w: T| {
        let denom = w * w + two * w * s * cos_bp + s * s;
        s * (-w.powf(inv_beta)).exp() / denom
    };
    let spec = QuadratureSpec {
        abs_tol: 1e-300,
        rel_tol: ctrl.rel_tol.max(1e-14),
        max_subdivisions: 4000,
        tail_bound: 1e-300,
    };
    // the kernel peaks near w = s when β is close to 1
    let head = integrate(f, T::zero(), s, &spec)?;
    let tail = integrate_to_infinity(f, s, &spec)?;
    Ok((beta * pi).sin() / (beta * pi) * (head.value + tail.value))
}
