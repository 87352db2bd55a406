//! Dense matrices and an LU factorization with partial (row) pivoting.
//!
//! One factorization answers both `M x = r` and `Mᵀ y = r`, which is what the
//! facet pivot iteration needs: a transpose solve for the entering row
//! expansion and a plain solve for the basic solution.

use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::scalar::{dot, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is singular at pivot {pivot}")]
    SingularMatrix { pivot: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    /// Stacks the selected rows of `self` into a new matrix.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix { rows: indices.len(), cols: self.cols, data }
    }

    pub fn push_row(&mut self, row: &[T]) {
        assert_eq!(row.len(), self.cols, "row length must match column count");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.iter_rows().map(|r| r.to_vec()).collect()
    }

    /// `self * v`
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.cols);
        self.iter_rows().map(|r| dot(r, v)).collect()
    }

    /// `selfᵀ * v`
    pub fn transpose_mul_vec(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (r, &w) in self.iter_rows().zip(v) {
            for (o, &a) in out.iter_mut().zip(r) {
                *o += a * w;
            }
        }
        out
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        self.iter_rows().map(|r| r.iter().map(|x| x.abs()).sum::<T>()).fold(T::zero(), T::max)
    }

    pub fn has_nan(&self) -> bool {
        self.data.iter().any(|x| x.is_nan())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Ok,
    /// Smallest pivot within 10^3 of the singularity threshold.
    NearSingular,
}

/// `P M = L U` with unit lower-triangular `L`, packed in one buffer.
#[derive(Debug, Clone)]
pub struct LuFactorization<T> {
    dim: usize,
    lu: Vec<T>,
    /// `perm[i]` is the original row placed at position `i`.
    perm: Vec<usize>,
    condition: Condition,
    pivot_tolerance: T,
}

impl<T: Scalar> LuFactorization<T> {
    pub fn factor(m: &Matrix<T>) -> Result<Self, LinalgError> {
        Self::factor_with_tolerance(m, T::default_tol_pivot())
    }

    pub fn factor_with_tolerance(m: &Matrix<T>, tol_pivot: T) -> Result<Self, LinalgError> {
        if m.rows() != m.cols() {
            return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        let n = m.rows();
        let threshold = tol_pivot * m.norm_inf();
        let near = threshold * T::lit(1e3);
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut condition = Condition::Ok;

        for k in 0..n {
            // Largest magnitude in column k at or below the diagonal; first one wins ties.
            let mut piv = k;
            let mut best = lu[k * n + k].abs();
            for i in k + 1..n {
                let v = lu[i * n + k].abs();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if !(best > threshold) || best == T::zero() {
                return Err(LinalgError::SingularMatrix { pivot: k });
            }
            if best <= near {
                condition = Condition::NearSingular;
            }
            if piv != k {
                for j in 0..n {
                    lu.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f != T::zero() {
                    for j in k + 1..n {
                        let u = lu[k * n + j];
                        lu[i * n + j] -= f * u;
                    }
                }
            }
        }
        Ok(LuFactorization { dim: n, lu, perm, condition, pivot_tolerance: tol_pivot })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn condition(&self) -> Condition {
        self.condition
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn pivot_tolerance(&self) -> T {
        self.pivot_tolerance
    }

    fn check_len(&self, r: &[T]) -> Result<(), LinalgError> {
        if r.len() != self.dim {
            return Err(LinalgError::DimensionMismatch { expected: self.dim, found: r.len() });
        }
        Ok(())
    }

    /// Solves `M x = r`.
    pub fn solve(&self, r: &[T]) -> Result<Vec<T>, LinalgError> {
        self.check_len(r)?;
        let n = self.dim;
        let lu = &self.lu;
        let mut x: Vec<T> = self.perm.iter().map(|&p| r[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= lu[i * n + j] * x[j];
            }
            x[i] = s / lu[i * n + i];
        }
        Ok(x)
    }

    /// Solves `Mᵀ y = r`.
    pub fn solve_transpose(&self, r: &[T]) -> Result<Vec<T>, LinalgError> {
        self.check_len(r)?;
        let n = self.dim;
        let lu = &self.lu;
        // Mᵀ = Uᵀ Lᵀ P, so solve Uᵀ z = r, then Lᵀ w = z, then y = Pᵀ w.
        let mut z = r.to_vec();
        for i in 0..n {
            let mut s = z[i];
            for j in 0..i {
                s -= lu[j * n + i] * z[j];
            }
            z[i] = s / lu[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for j in i + 1..n {
                s -= lu[j * n + i] * z[j];
            }
            z[i] = s;
        }
        let mut y = vec![T::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            y[p] = z[i];
        }
        Ok(y)
    }
}

/// Numerical rank by Gaussian elimination with complete pivoting.
pub fn rank<T: Scalar>(m: &Matrix<T>, tol: T) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.data.clone();
    let threshold = tol * m.norm_inf().max(T::one());
    let mut rank = 0;
    let mut col_used = vec![false; cols];
    let mut row_used = vec![false; rows];
    loop {
        let mut best = threshold;
        let mut at = None;
        for i in (0..rows).filter(|&i| !row_used[i]) {
            for j in (0..cols).filter(|&j| !col_used[j]) {
                let v = a[i * cols + j].abs();
                if v > best {
                    best = v;
                    at = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = at else { break };
        row_used[pi] = true;
        col_used[pj] = true;
        rank += 1;
        let pivot = a[pi * cols + pj];
        for i in (0..rows).filter(|&i| !row_used[i]) {
            let f = a[i * cols + pj] / pivot;
            if f != T::zero() {
                for j in 0..cols {
                    let u = a[pi * cols + j];
                    a[i * cols + j] -= f * u;
                }
            }
        }
    }
    rank
}
