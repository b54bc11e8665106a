use num_traits::Num;

use crate::error::{domain, Result};
use crate::scalar::Real;

/// Grünwald–Letnikov weights `c_k = (-1)^{k+1} binom(β, k)` for `k = 1..=K`
/// and memory weights `b_n = 1 - Σ_{k<=n} c_k` for `n = 0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable<T> {
    beta: T,
    /// `c[k - 1]` holds `c_k`.
    c: Vec<T>,
    b: Vec<T>,
}

/// The coefficient recurrence over any numeric field, so it can run in
/// exact rational arithmetic as well as floating point:
/// `c_1 = β`, `c_{k+1} = c_k (k - β) / (k + 1)`, `b_0 = 1`, `b_n = b_{n-1} - c_n`.
pub fn gl_recurrence<F: Num + Clone>(beta: F, order: usize) -> (Vec<F>, Vec<F>) {
    let mut c = Vec::with_capacity(order);
    let mut b = Vec::with_capacity(order + 1);
    b.push(F::one());
    let mut k = F::one();
    let mut ck = beta.clone();
    for _ in 0..order {
        let next_b = b.last().cloned().expect("b_0 present") - ck.clone();
        b.push(next_b);
        c.push(ck.clone());
        let kp1 = k.clone() + F::one();
        ck = ck * (k.clone() - beta.clone()) / kp1.clone();
        k = kp1;
    }
    (c, b)
}

/// Builds the table for `0 < β <= 1` up to order `K >= 1`.
pub fn gl_coefficients<T: Real>(beta: T, order: usize) -> Result<CoefficientTable<T>> {
    if !(beta > T::zero() && beta <= T::one()) {
        return domain(format!("beta must lie in (0, 1], got {beta}"));
    }
    if order == 0 {
        return domain("coefficient order must be at least 1");
    }
    let (c, b) = gl_recurrence(beta, order);
    Ok(CoefficientTable { beta, c, b })
}

impl<T: Real> CoefficientTable<T> {
    pub fn beta(&self) -> T {
        self.beta
    }

    /// Largest `K` covered by the table.
    pub fn order(&self) -> usize {
        self.c.len()
    }

    /// `c_k` for `1 <= k <= K`.
    #[inline]
    pub fn c(&self, k: usize) -> T {
        self.c[k - 1]
    }

    /// `b_n` for `0 <= n <= K`.
    #[inline]
    pub fn b(&self, n: usize) -> T {
        self.b[n]
    }

    pub fn c_values(&self) -> &[T] {
        &self.c
    }

    pub fn b_values(&self) -> &[T] {
        &self.b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_by_hand() {
        let t = gl_coefficients(0.5_f64, 3).unwrap();
        assert_eq!(t.c_values(), &[0.5, 0.125, 0.0625]);
        assert_eq!(t.b_values(), &[1.0, 0.5, 0.375, 0.3125]);
    }

    #[test]
    fn unit_order_degenerates() {
        let t = gl_coefficients(1.0_f64, 3).unwrap();
        assert_eq!(t.c_values(), &[1.0, 0.0, 0.0]);
        assert_eq!(t.b_values(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn matches_binomial_definition() {
        // c_k = (-1)^{k+1} Γ(β+1) / (Γ(k+1) Γ(β-k+1)) via the product form
        let beta = 0.37_f64;
        let t = gl_coefficients(beta, 12).unwrap();
        for k in 1..=12usize {
            let mut binom = 1.0;
            for i in 0..k {
                binom *= (beta - i as f64) / (i as f64 + 1.0);
            }
            let expected = if k % 2 == 1 { binom } else { -binom };
            assert!((t.c(k) - expected).abs() < 1e-16, "k={k}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gl_coefficients(0.0_f64, 3).is_err());
        assert!(gl_coefficients(1.5_f64, 3).is_err());
        assert!(gl_coefficients(0.5_f64, 0).is_err());
    }
}
