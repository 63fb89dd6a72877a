//! Real symmetric tridiagonal coupling matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// H with `diag[n]` on the diagonal and `off[k]` joining `k` and `k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        debug_assert_eq!(off.len() + 1, diag.len());
        Tridiagonal { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for (k, &c) in self.off.iter().enumerate() {
            m[(k, k + 1)] = c;
            m[(k + 1, k)] = c;
        }
        m
    }

    /// Gershgorin bound on the spectral radius.
    pub fn spectral_bound(&self) -> f64 {
        (0..self.dim())
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = self.off.get(i).map_or(0.0, |c| c.abs());
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// `(H x)[i]` for a complex vector.
    #[inline]
    pub fn apply_row(&self, x: &[Complex64], i: usize) -> Complex64 {
        let mut acc = x[i] * self.diag[i];
        if i > 0 {
            acc += x[i - 1] * self.off[i - 1];
        }
        if i + 1 < x.len() {
            acc += x[i + 1] * self.off[i];
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        let d: f64 = self.diag.iter().map(|x| x * x).sum();
        let o: f64 = self.off.iter().map(|x| x * x).sum();
        (d + 2.0 * o).sqrt()
    }
}
