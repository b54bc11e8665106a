use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{domain, Error, Result};
use crate::quad::{integrate, QuadratureSpec};

/// Minimum expected count per group after merging.
pub const MIN_EXPECTED: f64 = 5.0;

/// Sup distance between the empirical CDF of `sorted` and `cdf`.
pub fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    ks_distance_with_left(sorted, &cdf, &cdf)
}

/// KS distance against a distribution that may have atoms: `left(x)` is
/// the left limit `P(X < x)` and `cdf(x)` is `P(X <= x)`.
pub fn ks_distance_with_left(sorted: &[f64], cdf: impl Fn(f64) -> f64, left: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n - left(v)).abs()).max((j as f64 / n - cdf(v)).abs());
        i = j;
    }
    d
}

/// Two-sample KS statistic of two sorted samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] == v {
            i += 1;
        }
        while j < b.len() && b[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Sorted copy with NaNs rejected.
pub fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.iter().any(|v| v.is_nan()) {
        return domain("samples contain NaN");
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(s)
}

/// Equal-width bins on `[lo, hi)`, plus an underflow and an overflow bin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramSpec {
    pub n_bins: usize,
    pub lo: f64,
    pub hi: f64,
}

impl HistogramSpec {
    pub fn new(n_bins: usize, lo: f64, hi: f64) -> Result<Self> {
        if n_bins < 2 {
            return domain("need at least two bins");
        }
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return domain(format!("invalid histogram range [{lo}, {hi}]"));
        }
        Ok(Self { n_bins, lo, hi })
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.n_bins as f64
    }

    /// `0` for underflow, `1..=n_bins` for the regular bins, `n_bins + 1` for overflow.
    pub fn slot(&self, x: f64) -> usize {
        if x < self.lo {
            0
        } else if x >= self.hi {
            self.n_bins + 1
        } else {
            (((x - self.lo) / self.width()) as usize).min(self.n_bins - 1) + 1
        }
    }

    /// Edges of slot `s`, with infinite outer edges.
    pub fn slot_edges(&self, s: usize) -> (f64, f64) {
        let w = self.width();
        match s {
            0 => (f64::NEG_INFINITY, self.lo),
            s if s > self.n_bins => (self.hi, f64::INFINITY),
            s => (self.lo + (s - 1) as f64 * w, if s == self.n_bins { self.hi } else { self.lo + s as f64 * w }),
        }
    }

    pub fn slots(&self) -> usize {
        self.n_bins + 2
    }

    pub fn counts(&self, samples: &[f64]) -> Vec<u64> {
        let mut c = vec![0u64; self.slots()];
        for &x in samples {
            c[self.slot(x)] += 1;
        }
        c
    }

    /// Normalized histogram heights of the regular bins.
    pub fn density_heights(&self, samples: &[f64]) -> Vec<f64> {
        let c = self.counts(samples);
        let scale = 1.0 / (samples.len() as f64 * self.width());
        c[1..=self.n_bins].iter().map(|&k| k as f64 * scale).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofBin {
    pub lo: f64,
    pub hi: f64,
    pub observed: u64,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: Vec<GofBin>,
}

/// Pearson chi-square of `samples` against per-slot probabilities
/// (`probabilities.len() == spec.slots()`). Adjacent slots are merged left
/// to right until each group expects at least five counts.
pub fn chi_square_gof(samples: &[f64], spec: &HistogramSpec, probabilities: &[f64]) -> Result<GofReport> {
    if probabilities.len() != spec.slots() {
        return domain(format!("expected {} slot probabilities, got {}", spec.slots(), probabilities.len()));
    }
    let n = samples.len() as f64;
    let counts = spec.counts(samples);
    let mut bins: Vec<GofBin> = Vec::new();
    let mut open: Option<GofBin> = None;
    for s in 0..spec.slots() {
        let (lo, hi) = spec.slot_edges(s);
        let g = open.get_or_insert(GofBin { lo, hi, observed: 0, expected: 0.0 });
        g.hi = hi;
        g.observed += counts[s];
        g.expected += n * probabilities[s].max(0.0);
        if g.expected >= MIN_EXPECTED {
            bins.extend(open.take());
        }
    }
    if let Some(rest) = open {
        match bins.last_mut() {
            Some(last) => {
                last.hi = rest.hi;
                last.observed += rest.observed;
                last.expected += rest.expected;
            }
            None => bins.push(rest),
        }
    }
    if bins.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} samples leave fewer than two bins with expected count >= {MIN_EXPECTED}",
            samples.len()
        )));
    }
    let statistic: f64 = bins
        .iter()
        .map(|b| {
            let d = b.observed as f64 - b.expected;
            d * d / b.expected
        })
        .sum();
    let dof = bins.len() - 1;
    let p_value = ChiSquared::new(dof as f64).expect("dof >= 1").sf(statistic);
    Ok(GofReport { statistic, dof, p_value, bins })
}

/// Slot probabilities of a density by quadrature over each bin; the two
/// outer slots receive the remaining mass.
pub fn bin_probabilities(density: impl Fn(f64) -> f64, spec: &HistogramSpec, quad: &QuadratureSpec) -> Result<Vec<f64>> {
    let mut p = vec![0.0; spec.slots()];
    for s in 1..=spec.n_bins {
        let (lo, hi) = spec.slot_edges(s);
        p[s] = integrate(&density, lo, hi, quad)?.value;
    }
    let inside: f64 = p.iter().sum();
    let outside = (1.0 - inside).max(0.0);
    // split the leftover mass by which side carries density
    let (l, r) = (density(spec.lo - spec.width()).max(0.0), density(spec.hi + spec.width()).max(0.0));
    let total = l + r;
    if total > 0.0 {
        p[0] = outside * l / total;
        p[spec.n_bins + 1] = outside * r / total;
    } else {
        p[0] = outside / 2.0;
        p[spec.n_bins + 1] = outside / 2.0;
    }
    Ok(p)
}

/// Chi-square test of samples against a normalized density.
pub fn density_gof(samples: &[f64], density: impl Fn(f64) -> f64, spec: &HistogramSpec, quad: &QuadratureSpec) -> Result<GofReport> {
    let p = bin_probabilities(density, spec, quad)?;
    chi_square_gof(samples, spec, &p)
}

/// Slot probabilities of a discrete law with atoms `(x_i, p_i)`.
pub fn atom_probabilities(atoms: impl IntoIterator<Item = (f64, f64)>, spec: &HistogramSpec) -> Vec<f64> {
    let mut p = vec![0.0; spec.slots()];
    for (x, w) in atoms {
        p[spec.slot(x)] += w;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;
    use statrs::distribution::Normal;

    fn normal_samples(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = crate::seed::stream_rng(seed, "test", 0);
        (0..n).map(|_| rng.sample(StandardNormal)).collect()
    }

    #[test]
    fn ks_constant_sample() {
        let cdf = |x: f64| Normal::new(0.0, 1.0).unwrap().cdf(x);
        let d = ks_distance(&[0.3; 5], cdf);
        assert!((d - cdf(0.3).max(1.0 - cdf(0.3))).abs() < 1e-15);
        assert_eq!(ks_distance(&[0.0], cdf), 0.5);
    }

    #[test]
    fn ks_matches_own_law() {
        let s = sorted(&normal_samples(10_000, 1)).unwrap();
        let d = ks_distance(&s, |x| Normal::new(0.0, 1.0).unwrap().cdf(x));
        assert!(d < 1.63 / 100.0, "{d}");
    }

    #[test]
    fn ks_with_atoms() {
        // Bernoulli(0.5) on {0, 1}
        let s = [0.0, 0.0, 1.0, 1.0];
        let cdf = |x: f64| if x < 0.0 { 0.0 } else if x < 1.0 { 0.5 } else { 1.0 };
        let left = |x: f64| if x <= 0.0 { 0.0 } else if x <= 1.0 { 0.5 } else { 1.0 };
        assert_eq!(ks_distance_with_left(&s, cdf, left), 0.0);
    }

    #[test]
    fn two_sample_ks() {
        assert_eq!(ks_two_sample(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        assert!((ks_two_sample(&[1.0, 2.0, 3.0, 4.0], &[2.5, 3.5]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn histogram_slots() {
        let h = HistogramSpec::new(4, 0.0, 2.0).unwrap();
        assert_eq!(h.slot(-0.1), 0);
        assert_eq!(h.slot(0.0), 1);
        assert_eq!(h.slot(0.49), 1);
        assert_eq!(h.slot(0.5), 2);
        assert_eq!(h.slot(1.99), 4);
        assert_eq!(h.slot(2.0), 5);
        assert_eq!(h.slot_edges(4), (1.5, 2.0));
        assert!(HistogramSpec::new(1, 0.0, 1.0).is_err());
        assert!(HistogramSpec::new(3, 1.0, 1.0).is_err());
    }

    #[test]
    fn gaussian_gof_passes_and_wrong_law_fails() {
        let s = normal_samples(10_000, 3);
        let spec = HistogramSpec::new(40, -4.0, 4.0).unwrap();
        let q = QuadratureSpec::default();
        let phi = |x: f64| (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let r = density_gof(&s, phi, &spec, &q).unwrap();
        assert!(r.p_value > 0.01, "{r:?}");
        assert!(r.bins.iter().all(|b| b.expected >= MIN_EXPECTED));
        let wide = |x: f64| phi(x / 1.2) / 1.2;
        assert!(density_gof(&s, wide, &spec, &q).unwrap().p_value < 0.01);
    }

    #[test]
    fn p_values_are_roughly_uniform() {
        let spec = HistogramSpec::new(20, -3.0, 3.0).unwrap();
        let q = QuadratureSpec::default();
        let phi = |x: f64| (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let probs = bin_probabilities(phi, &spec, &q).unwrap();
        let p: Vec<f64> = (0..200)
            .map(|k| chi_square_gof(&normal_samples(2_000, 100 + k), &spec, &probs).unwrap().p_value)
            .collect();
        let below = |t: f64| p.iter().filter(|&&v| v < t).count() as f64 / p.len() as f64;
        assert!((below(0.5) - 0.5).abs() < 0.12);
        assert!(below(0.05) < 0.12);
    }

    #[test]
    fn insufficient_data() {
        let spec = HistogramSpec::new(10, 0.0, 1.0).unwrap();
        let p = vec![1.0 / 12.0; 12];
        assert!(matches!(chi_square_gof(&[0.5; 7], &spec, &p), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn permutation_invariance() {
        let mut s = normal_samples(3_000, 4);
        let spec = HistogramSpec::new(30, -3.0, 3.0).unwrap();
        let probs = bin_probabilities(
            |x: f64| (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            &spec,
            &QuadratureSpec::default(),
        )
        .unwrap();
        let a = chi_square_gof(&s, &spec, &probs).unwrap();
        s.reverse();
        assert_eq!(a, chi_square_gof(&s, &spec, &probs).unwrap());
    }
}
