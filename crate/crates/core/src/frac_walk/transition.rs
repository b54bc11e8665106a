use crate::frac_fd::LatticeConfig;
use crate::scalar::Real;

/// Forward-jump matrix of the implicit walk, the transpose of the inverse
/// of the propagating `M × M` block of Λ.
///
/// Row `i` holds `P_{i,i+m} = μ^m / (1 + μ)^{m+1}` for `i + m < M - 1` and
/// `(μ / (1 + μ))^{M-1-i}` in the last column; the last row is the unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrixP<T> {
    mu: T,
    rows: Vec<Vec<T>>,
}

impl<T: Real> TransitionMatrixP<T> {
    pub fn new(m: usize, mu: T) -> Self {
        let one = T::one();
        let q = mu / (one + mu);
        let rows = (0..m)
            .map(|i| {
                let mut row = vec![T::zero(); m];
                let mut geo = one / (one + mu);
                for j in i..m {
                    if j + 1 == m {
                        row[j] = q.powi((m - 1 - i) as i32);
                    } else {
                        row[j] = geo;
                        geo = geo * q;
                    }
                }
                row
            })
            .collect();
        Self { mu, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.rows[i]
    }

    /// Largest deviation of a row sum from one.
    pub fn row_sum_defect(&self) -> T {
        self.rows
            .iter()
            .map(|r| (r.iter().copied().sum::<T>() - T::one()).abs())
            .fold(T::zero(), T::max)
    }
}

pub fn build_transition_p<T: Real>(lat: &LatticeConfig<T>) -> TransitionMatrixP<T> {
    TransitionMatrixP::new(lat.m, lat.mu)
}
