//! Small dense kernels on row-major square matrices.

use crate::scalar::Real;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum())
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|&v| v * v).sum::<T>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn norm_one(&self) -> T {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.n).map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum()).collect()
    }
}

/// Lower Cholesky factor of a symmetric matrix with `shift` added to the
/// diagonal. `None` when a pivot is not strictly positive.
pub fn cholesky<T: Real>(a: &SquareMatrix<T>, shift: T) -> Option<SquareMatrix<T>> {
    let n = a.dim();
    let mut l = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let (ri, rj) = (i * n, j * n);
            let dot: T = l.data[ri..ri + j].iter().zip(&l.data[rj..rj + j]).map(|(&x, &y)| x * y).sum();
            if i == j {
                let d = a.get(i, i) + shift - dot;
                if !(d > T::zero()) {
                    return None;
                }
                l.data[ri + i] = d.sqrt();
            } else {
                l.data[ri + j] = (a.get(i, j) - dot) / l.data[rj + j];
            }
        }
    }
    Some(l)
}

/// Solves `L y = b` for lower-triangular `L`.
pub fn forward_substitute<T: Real>(l: &SquareMatrix<T>, b: &[T]) -> Vec<T> {
    let n = l.dim();
    let mut y = vec![T::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s = s - l.get(i, k) * y[k];
        }
        y[i] = s / l.get(i, i);
    }
    y
}

/// Solves `Lᵀ x = y` for lower-triangular `L`.
pub fn backward_substitute_transposed<T: Real>(l: &SquareMatrix<T>, y: &[T]) -> Vec<T> {
    let n = l.dim();
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s = s - l.get(k, i) * x[k];
        }
        x[i] = s / l.get(i, i);
    }
    x
}

/// Inverse of `A = L Lᵀ` from its Cholesky factor.
pub fn cholesky_inverse<T: Real>(l: &SquareMatrix<T>) -> SquareMatrix<T> {
    let n = l.dim();
    let mut inv = SquareMatrix::zeros(n);
    for j in 0..n {
        let mut e = vec![T::zero(); n];
        e[j] = T::one();
        let col = backward_substitute_transposed(l, &forward_substitute(l, &e));
        for i in 0..n {
            inv.set(i, j, col[i]);
        }
    }
    inv
}
