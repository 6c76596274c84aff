//! Small dense matrices and Perron data for nonnegative operators.

use serde::{Deserialize, Serialize};

/// Row-major square matrix. Dimensions here are tiny (cocycle and hidden
/// state sizes), so nothing clever is needed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    /// Builds from rows; `None` if the rows are not square.
    pub fn from_rows(rows: &[Vec<f64>]) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.dim);
        mul_into(&self.data, &other.data, self.dim, &mut out.data);
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn entry_sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data.chunks(self.dim).map(|r| r.iter().sum()).collect()
    }

    /// Largest singular value.
    pub fn operator_two_norm(&self) -> f64 {
        spectral_norm(&self.data, self.dim)
    }

    /// `v^T M` for a row vector `v`.
    pub fn left_mul(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        left_mul_into(v, &self.data, self.dim, &mut out);
        out
    }
}

impl From<Vec<Vec<f64>>> for Matrix {
    fn from(rows: Vec<Vec<f64>>) -> Self {
        // Ragged input is caught by validation in the owning types.
        let dim = rows.len();
        let mut data: Vec<f64> = Vec::with_capacity(dim * dim);
        for r in &rows {
            let mut r = r.clone();
            r.resize(dim, f64::NAN);
            data.extend(r);
        }
        Matrix { dim, data }
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.rows()
    }
}

#[inline]
pub(crate) fn mul_into(a: &[f64], b: &[f64], d: usize, out: &mut [f64]) {
    for i in 0..d {
        for j in 0..d {
            let mut s = 0.0;
            for k in 0..d {
                s += a[i * d + k] * b[k * d + j];
            }
            out[i * d + j] = s;
        }
    }
}

#[inline]
pub(crate) fn left_mul_into(v: &[f64], m: &[f64], d: usize, out: &mut [f64]) {
    for j in 0..d {
        let mut s = 0.0;
        for i in 0..d {
            s += v[i] * m[i * d + j];
        }
        out[j] = s;
    }
}

/// Largest singular value of a `d x d` row-major matrix, via power
/// iteration on `A^T A`.
pub(crate) fn spectral_norm(a: &[f64], d: usize) -> f64 {
    if d == 1 {
        return a[0].abs();
    }
    let mut ata = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            ata[i * d + j] = (0..d).map(|k| a[k * d + i] * a[k * d + j]).sum();
        }
    }
    let mut v = vec![1.0 / (d as f64).sqrt(); d];
    let mut w = vec![0.0; d];
    let mut lambda = 0.0;
    for _ in 0..10_000 {
        for i in 0..d {
            w[i] = (0..d).map(|j| ata[i * d + j] * v[j]).sum();
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        for i in 0..d {
            v[i] = w[i] / norm;
        }
        if (next - lambda).abs() <= 1e-15 * next.abs() {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.max(0.0).sqrt()
}

/// Perron root and vectors of a nonnegative primitive operator.
#[derive(Clone, Debug)]
pub struct PerronData {
    pub root: f64,
    /// Left Perron vector, normalized to max entry 1.
    pub left: Vec<f64>,
    /// Right Perron vector, normalized to max entry 1.
    pub right: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) const PERRON_TOL: f64 = 1e-13;
pub(crate) const PERRON_MAX_ITER: usize = 100_000;

/// Power iteration for an operator given by its action `apply(x, out)`.
///
/// Stops when the Collatz-Wielandt bracket `[min (Mx)_i/x_i, max (Mx)_i/x_i]`
/// is narrower than `PERRON_TOL` relative to the root. Returns the root and
/// the normalized vector.
pub(crate) fn power_iteration<F>(n: usize, mut apply: F) -> (f64, Vec<f64>, usize, bool)
where
    F: FnMut(&[f64], &mut [f64]),
{
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let mut root = 0.0;
    for it in 1..=PERRON_MAX_ITER {
        apply(&x, &mut y);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..n {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let m = y.iter().copied().fold(0.0f64, f64::max);
        for i in 0..n {
            x[i] = y[i] / m;
        }
        root = 0.5 * (lo + hi);
        // Zero entries can appear transiently before primitivity fills the
        // vector; the bracket is meaningless until every entry is positive.
        if x.iter().all(|&v| v > 0.0) && hi - lo <= PERRON_TOL * hi {
            apply(&x, &mut y);
            let m = y.iter().copied().fold(0.0f64, f64::max);
            for i in 0..n {
                x[i] = y[i] / m;
            }
            return (root, x, it, true);
        }
    }
    (root, x, PERRON_MAX_ITER, false)
}
