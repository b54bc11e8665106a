//! Adaptive Gauss–Kronrod (7/15) quadrature with global subdivision.
//!
//! Semi-infinite integrals are handled either by an explicit truncation
//! point (see [`truncation_by_moments`]) or by the algebraic map
//! `x = a + s / (1 - s)` onto `[0, 1)`.

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Largest integrand mass allowed beyond a truncation point.
    pub tail_bound: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-12, max_subdivisions: 2000, tail_bound: 1e-14 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.tail_bound > 0.0 && self.max_subdivisions > 0) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

#[derive(Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Segment<T> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = f(center);
    let mut res_k = fc * T::lit(WGK[7]);
    let mut res_g = fc * T::lit(WG[3]);
    let mut res_abs = res_k.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_k = res_k + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = res_k * half;
    let mut res_asc = T::lit(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half_len.abs();
    let value = res_k * half_len;
    res_abs = res_abs * scale;
    res_asc = res_asc * scale;
    let mut err = ((res_k - res_g) * half_len).abs();
    if res_asc != T::zero() && err != T::zero() {
        let r = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = if r < T::one() { res_asc * r } else { res_asc };
    }
    let floor = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) && floor > err {
        err = floor;
    }
    Segment { a, b, value, error: err }
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, spec: &QuadratureSpec) -> Result<QuadResult<T>> {
    spec.validate()?;
    if a == b {
        return Ok(QuadResult { value: T::zero(), error: T::zero(), evaluations: 0 });
    }
    let abs_tol = T::lit(spec.abs_tol);
    // the Kronrod error floor is 50 ulps of the absolute integral
    let rel_tol = T::lit(spec.rel_tol).max(T::lit(100.0) * T::epsilon());
    let mut segments = vec![kronrod15(&mut f, a, b)];
    let mut evaluations = 15;
    loop {
        let total: T = segments.iter().map(|s| s.value).sum();
        let err: T = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Quadrature { subdivisions: segments.len(), estimate: f64::NAN });
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(QuadResult { value: total, error: err, evaluations });
        }
        if segments.len() >= spec.max_subdivisions {
            return Err(Error::Quadrature { subdivisions: segments.len(), estimate: err.as_f64() });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |acc, (i, s)| if s.error > acc.1 { (i, s.error) } else { acc });
        let seg = segments.swap_remove(worst);
        let mid = T::lit(0.5) * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            // interval exhausted at machine resolution
            segments.push(seg);
            let err: T = segments.iter().map(|s| s.error).sum();
            let total: T = segments.iter().map(|s| s.value).sum();
            if err <= T::lit(10.0) * abs_tol.max(rel_tol * total.abs()) {
                return Ok(QuadResult { value: total, error: err, evaluations });
            }
            return Err(Error::Quadrature { subdivisions: segments.len(), estimate: err.as_f64() });
        }
        segments.push(kronrod15(&mut f, seg.a, mid));
        segments.push(kronrod15(&mut f, mid, seg.b));
        evaluations += 30;
    }
}

/// Integrates `f` over a sequence of breakpoints, summing the pieces.
pub fn integrate_pieces<T: Real, F: FnMut(T) -> T>(mut f: F, points: &[T], spec: &QuadratureSpec) -> Result<QuadResult<T>> {
    let mut value = T::zero();
    let mut error = T::zero();
    let mut evaluations = 0;
    for w in points.windows(2) {
        let r = integrate(&mut f, w[0], w[1], spec)?;
        value = value + r.value;
        error = error + r.error;
        evaluations += r.evaluations;
    }
    Ok(QuadResult { value, error, evaluations })
}

/// Integral over `[a, ∞)` through the map `x = a + s / (1 - s)`.
pub fn integrate_to_infinity<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, spec: &QuadratureSpec) -> Result<QuadResult<T>> {
    let one = T::one();
    let g = |s: T| {
        let d = one - s;
        if d <= T::zero() {
            return T::zero();
        }
        let x = a + s / d;
        let v = f(x) / (d * d);
        if v.is_finite() {
            v
        } else {
            T::zero()
        }
    };
    integrate(g, T::zero(), one, spec)
}

/// Smallest point beyond which a density with known moments carries at most
/// `tail` mass, using Markov's bound `P(X > x) <= E[X^n] / x^n` optimized
/// over `n = 1..=max_order`.
pub fn truncation_by_moments(moment: impl Fn(u32) -> f64, tail: f64, max_order: u32) -> f64 {
    (1..=max_order)
        .map(|n| (moment(n) / tail).powf(1.0 / n as f64))
        .filter(|x| x.is_finite())
        .fold(f64::INFINITY, f64::min)
}
