//! Dense symmetric-positive-definite kernels.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not symmetric: |m[{i}][{j}] - m[{j}][{i}]| = {gap:e}")]
    NotSymmetric { i: usize, j: usize, gap: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("ridge schedule exhausted at eps = {last_eps:e} without positive pivots")]
    RidgeExhausted { last_eps: f64 },
    #[error("factor diagonal {index} = {value:e} is below the pivot floor")]
    SingularFactor { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds from nested rows; panics on ragged input (test/literal helper).
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let a = self.row(i);
            let o = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &aik) in a.iter().enumerate() {
                if aik == T::zero() {
                    continue;
                }
                for (oj, &bkj) in o.iter_mut().zip(other.row(k)) {
                    *oj += aik * bkj;
                }
            }
        }
        Ok(out)
    }

    /// `selfᵀ · self`.
    pub fn gram(&self) -> Self {
        let p = self.cols;
        let mut g = Self::zeros(p, p);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..p {
                let ri = row[i];
                for j in i..p {
                    g.data[i * p + j] += ri * row[j];
                }
            }
        }
        for i in 0..p {
            for j in 0..i {
                g.data[i * p + j] = g.data[j * p + i];
            }
        }
        g
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| U::of(v.to_f64_lossy())).collect() }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Square matrix verified symmetric to `SYM_TOL` relative, stored symmetrized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpdMatrix<T> {
    inner: Matrix<T>,
}

pub const SYM_TOL: f64 = 1e-12;

impl<T: Scalar> SpdMatrix<T> {
    pub fn new(m: Matrix<T>) -> Result<Self, LinalgError> {
        if m.rows != m.cols {
            return Err(LinalgError::NotSquare { rows: m.rows, cols: m.cols });
        }
        let n = m.rows;
        let scale = T::one().max(m.max_abs());
        // f32 cannot resolve 1e-12 relative; use its own epsilon floor.
        let tol = T::of(SYM_TOL).max(T::epsilon() * T::of(4.0)) * scale;
        let mut s = m;
        for i in 0..n {
            for j in (i + 1)..n {
                let a = s[(i, j)];
                let b = s[(j, i)];
                let gap = (a - b).abs();
                if !(gap <= tol) {
                    return Err(LinalgError::NotSymmetric { i, j, gap: gap.to_f64_lossy() });
                }
                let avg = (a + b) * T::of(0.5);
                s[(i, j)] = avg;
                s[(j, i)] = avg;
            }
        }
        Ok(Self { inner: s })
    }

    pub fn identity(n: usize) -> Self {
        Self { inner: Matrix::identity(n) }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.rows
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }

    /// Symmetric update of entry (i,j) and (j,i).
    pub fn set_sym(&mut self, i: usize, j: usize, v: T) {
        self.inner[(i, j)] = v;
        self.inner[(j, i)] = v;
    }
}

impl<T> Index<(usize, usize)> for SpdMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, ij: (usize, usize)) -> &T {
        &self.inner[ij]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeConfig {
    pub schedule: Vec<f64>,
    pub pivot_floor: f64,
}

impl Default for RidgeConfig {
    fn default() -> Self {
        Self { schedule: vec![0.0, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2], pivot_floor: 1e-12 }
    }
}

/// Lower-triangular `L` with `L·Lᵀ = m + ridge·I`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor<T> {
    l: Matrix<T>,
    ridge: f64,
    pivot_floor: f64,
}

impl<T: Scalar> CholeskyFactor<T> {
    #[inline]
    pub fn l(&self) -> &Matrix<T> {
        &self.l
    }

    /// Ridge ε that was added to the diagonal.
    #[inline]
    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.l.rows
    }

    fn check_diag(&self) -> Result<(), LinalgError> {
        let floor = T::of(self.pivot_floor);
        for i in 0..self.dim() {
            let v = self.l[(i, i)];
            if !(v > floor) {
                return Err(LinalgError::SingularFactor { index: i, value: v.to_f64_lossy() });
            }
        }
        Ok(())
    }

    /// Solves `L y = b` in place.
    pub fn forward_solve(&self, b: &mut [T]) {
        let n = self.dim();
        for i in 0..n {
            let row = self.l.row(i);
            let mut s = b[i];
            for k in 0..i {
                s -= row[k] * b[k];
            }
            b[i] = s / row[i];
        }
    }

    /// Solves `Lᵀ x = y` in place.
    pub fn backward_solve(&self, y: &mut [T]) {
        let n = self.dim();
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= self.l[(k, i)] * y[k];
            }
            y[i] = s / self.l[(i, i)];
        }
    }

    /// Solves `(L Lᵀ) x = b` in place.
    pub fn solve(&self, b: &mut [T]) {
        self.forward_solve(b);
        self.backward_solve(b);
    }

    /// Quadratic form `bᵀ (L Lᵀ)⁻¹ b`.
    pub fn inv_quad(&self, b: &[T]) -> T {
        let mut y = b.to_vec();
        self.forward_solve(&mut y);
        y.iter().map(|&v| v * v).sum()
    }
}

fn try_factor<T: Scalar>(m: &Matrix<T>, eps: T, floor: T) -> Option<Matrix<T>> {
    let n = m.rows;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)] + eps;
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > floor) {
            return None;
        }
        let ljj = d.sqrt();
        if !(ljj > floor) {
            return None;
        }
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Some(l)
}

pub fn cholesky_with_ridge<T: Scalar>(m: &SpdMatrix<T>, cfg: &RidgeConfig) -> Result<CholeskyFactor<T>, LinalgError> {
    let floor = T::of(cfg.pivot_floor);
    for &eps in &cfg.schedule {
        if let Some(l) = try_factor(m.matrix(), T::of(eps), floor) {
            if eps > 0.0 {
                log::debug!("cholesky: ridge {eps:e} applied (dim {})", m.dim());
            }
            return Ok(CholeskyFactor { l, ridge: eps, pivot_floor: cfg.pivot_floor });
        }
    }
    Err(LinalgError::RidgeExhausted { last_eps: cfg.schedule.last().copied().unwrap_or(0.0) })
}

/// `(L Lᵀ)⁻¹` via forward and backward substitution on each unit column.
pub fn invert_spd<T: Scalar>(f: &CholeskyFactor<T>) -> Result<SpdMatrix<T>, LinalgError> {
    f.check_diag()?;
    let n = f.dim();
    let mut inv = Matrix::zeros(n, n);
    let mut col = vec![T::zero(); n];
    for j in 0..n {
        col.iter_mut().for_each(|v| *v = T::zero());
        col[j] = T::one();
        f.solve(&mut col);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (inv[(i, j)] + inv[(j, i)]) * T::of(0.5);
            inv[(i, j)] = avg;
            inv[(j, i)] = avg;
        }
    }
    Ok(SpdMatrix { inner: inv })
}

pub fn log_det_spd<T: Scalar>(f: &CholeskyFactor<T>) -> Result<T, LinalgError> {
    f.check_diag()?;
    let s: T = (0..f.dim()).map(|i| f.l[(i, i)].ln()).sum();
    Ok(s + s)
}
