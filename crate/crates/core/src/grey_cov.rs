//! Closed-form second-order and distributional statistics of ggBm.

use crate::error::{domain, Error, Result};
use crate::linalg::{cholesky, cholesky_inverse, forward_substitute, SquareMatrix};
use crate::params::GreyParams;
use crate::quad::{integrate, integrate_pieces, truncation_by_moments, QuadratureSpec};
use crate::scalar::Real;
use crate::special_fn::{lbeta_moment, m_wright, mittag_leffler, SeriesControl};

/// Largest accepted 1-norm condition number of a covariance matrix.
pub const MAX_CONDITION: f64 = 1e12;

/// Joint densities are limited to this many time points.
pub const MAX_DIM: usize = 8;

/// `γ_{α,β}(t, s) = (t^α + s^α - |t - s|^α) / Γ(1 + β)`.
pub fn ggbm_cov<T: Real>(params: &GreyParams<T>, t: T, s: T) -> T {
    fbm_cov(params.alpha(), t, s) / params.gamma_one_plus_beta()
}

/// Covariance of the standard fBm used in the product representation,
/// `t^α + s^α - |t - s|^α` (variance `2t^α`).
pub fn fbm_cov<T: Real>(alpha: T, t: T, s: T) -> T {
    t.powf(alpha) + s.powf(alpha) - (t - s).abs().powf(alpha)
}

/// Covariance matrix of ggBm on a set of times.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix<T> {
    times: Vec<T>,
    entries: SquareMatrix<T>,
}

impl<T: Real> CovMatrix<T> {
    pub fn new(params: &GreyParams<T>, times: &[T]) -> Result<Self> {
        if times.is_empty() {
            return domain("at least one time is required");
        }
        if times.iter().any(|&t| !(t > T::zero())) {
            return domain("times must be strictly positive");
        }
        for (i, &a) in times.iter().enumerate() {
            if times[..i].contains(&a) {
                return Err(Error::SingularCovariance(format!("time {a} repeated")));
            }
        }
        let entries = SquareMatrix::from_fn(times.len(), |i, j| ggbm_cov(params, times[i], times[j]));
        Ok(Self { times: times.to_vec(), entries })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn entries(&self) -> &SquareMatrix<T> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries.get(i, j)
    }

    pub fn dim(&self) -> usize {
        self.times.len()
    }

    /// `θᵀ γ θ`.
    pub fn quadratic_form(&self, theta: &[T]) -> T {
        let v = self.entries.mul_vec(theta);
        v.iter().zip(theta).map(|(&a, &b)| a * b).sum()
    }
}

/// Marginal density `f_{α,β}(x, t) = t^{-α/2} M_{β/2}(|x| t^{-α/2}) / 2`.
pub fn marginal_density<T: Real>(params: &GreyParams<T>, x: T, t: T) -> Result<T> {
    if !(t > T::zero()) {
        return domain(format!("time must be positive, got {t}"));
    }
    let half = T::lit(0.5);
    let scale = t.powf(-params.alpha() * half);
    let m = m_wright(params.beta() * half, x.abs() * scale, &SeriesControl::unbounded())?;
    Ok(half * scale * m)
}

/// Joint density of `(B(t_1), …, B(t_n))` as a mixture over `τ ~ M_β` of
/// centered Gaussians with covariance `Γ(1+β) τ γ_{α,β}`.
///
/// Evaluates to `+∞` at the origin when `n >= 2` and `β < 1`: the mixture
/// weight near `τ = 0` is too heavy for the `τ^{-n/2}` normalizer.
pub fn finite_dim_density<T: Real>(params: &GreyParams<T>, times: &[T], x: &[T], quad: &QuadratureSpec) -> Result<T> {
    if times.len() != x.len() {
        return domain("times and x must have the same length");
    }
    if times.len() > MAX_DIM {
        return domain(format!("joint densities are limited to {MAX_DIM} points"));
    }
    let cov = CovMatrix::new(params, times)?;
    let n = cov.dim();
    // Γ(1+β) γ_{α,β} is the β-free fBm covariance
    let base = SquareMatrix::from_fn(n, |i, j| cov.get(i, j) * params.gamma_one_plus_beta());
    let l = cholesky(&base, T::zero())
        .ok_or_else(|| Error::SingularCovariance("covariance is not positive definite".into()))?;
    let condition = base.norm_one() * cholesky_inverse(&l).norm_one();
    if !(condition.as_f64() <= MAX_CONDITION) {
        return Err(Error::SingularCovariance(format!("condition number {:e} exceeds {MAX_CONDITION:e}", condition.as_f64())));
    }
    let log_det: T = (0..n).map(|i| l.get(i, i).ln()).sum::<T>() * T::lit(2.0);
    let z = forward_substitute(&l, x);
    let q: T = z.iter().map(|&v| v * v).sum();
    let nf = T::from_usize_lossy(n);
    let two_pi = T::TAU();
    let half = T::lit(0.5);
    let norm = (-half * (nf * two_pi.ln() + log_det)).exp();

    if params.is_gaussian() {
        return Ok(norm * (-half * q).exp());
    }
    if q == T::zero() && n >= 2 {
        return Ok(T::infinity());
    }
    let beta = params.beta();
    let ctrl = SeriesControl::unbounded();
    let tail = (quad.tail_bound / norm.as_f64().max(1.0)).max(f64::MIN_POSITIVE);
    let tau_max = truncation_by_moments(|k| lbeta_moment(beta.as_f64(), k).unwrap_or(f64::INFINITY), tail, 60).max(1.0);
    // τ = u² regularizes the τ^{-n/2} factor at the origin
    let f = |u: T| {
        if u == T::zero() {
            return if n == 1 && q == T::zero() {
                T::lit(2.0) * m_wright(beta, T::zero(), &ctrl).unwrap_or(T::nan())
            } else {
                T::zero()
            };
        }
        let tau = u * u;
        let gauss = (-half * q / tau).exp();
        if gauss == T::zero() {
            return T::zero();
        }
        T::lit(2.0) * u.powf(T::one() - nf) * gauss * m_wright(beta, tau, &ctrl).unwrap_or(T::nan())
    };
    let u_max = T::lit(tau_max.sqrt());
    let r = integrate(f, T::zero(), u_max, quad)?;
    Ok(norm * r.value)
}

/// Characteristic function `E_β(-Γ(1+β) θᵀ γ_{α,β} θ / 2)`.
pub fn char_function<T: Real>(params: &GreyParams<T>, times: &[T], theta: &[T]) -> Result<T> {
    if times.len() != theta.len() {
        return domain("times and theta must have the same length");
    }
    if times.is_empty() || times.iter().any(|&t| !(t > T::zero())) {
        return domain("times must be non-empty and strictly positive");
    }
    let mut q = T::zero();
    for (i, &ti) in times.iter().enumerate() {
        for (j, &tj) in times.iter().enumerate() {
            q = q + theta[i] * theta[j] * ggbm_cov(params, ti, tj);
        }
    }
    let arg = -params.gamma_one_plus_beta() * q * T::lit(0.5);
    mittag_leffler(params.beta(), arg, &SeriesControl::default())
}

/// Fourier transform `∫ cos(yx) f(x) dx` of the one-point joint density,
/// computed by quadrature over `[-L, L]` with `L` set by a Markov bound on
/// `E|B(t)|^{2k}`.
pub fn char_function_numeric<T: Real>(params: &GreyParams<T>, t: T, y: T, quad: &QuadratureSpec) -> Result<T> {
    let beta = params.beta().as_f64();
    let var_scale = 2.0 * t.as_f64().powf(params.alpha().as_f64());
    // E|B|^{2k} = E[L^k] (2 t^α)^k (2k-1)!!
    let moment = |k: u32| {
        let k = (k / 2).max(1);
        let dfact: f64 = (1..=k).map(|i| (2 * i - 1) as f64).product();
        lbeta_moment(beta, k).unwrap_or(f64::INFINITY) * var_scale.powi(k as i32) * dfact
    };
    let l = truncation_by_moments(moment, quad.tail_bound, 120).max(1.0);
    let step = (l / 32.0).max(0.5);
    let mut points = vec![T::zero()];
    let mut p = 0.0;
    while p + step < l {
        p += step;
        points.push(T::lit(p));
    }
    points.push(T::lit(l));
    let times = [t];
    let f = |x: T| (y * x).cos() * finite_dim_density(params, &times, &[x], quad).unwrap_or(T::nan());
    let r = integrate_pieces(f, &points, quad)?;
    Ok(T::lit(2.0) * r.value)
}
