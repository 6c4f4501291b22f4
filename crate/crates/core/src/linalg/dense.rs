use std::ops::{Index, IndexMut};

use super::{LinalgError, Result, C64};

/// Column vector of complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseVector {
    data: Vec<C64>,
}

impl DenseVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![C64::new(0.0, 0.0); dim],
        }
    }

    /// Unit vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[index] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_vec(data: Vec<C64>) -> Self {
        Self { data }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self {
            data: values.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, C64> {
        self.data.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian inner product `<self|other>`.
    pub fn dot(&self, other: &DenseVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(LinalgError::DimensionMismatch {
                op: "dot",
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scaled(&self, alpha: C64) -> DenseVector {
        DenseVector {
            data: self.data.iter().map(|z| z * alpha).collect(),
        }
    }

    /// `self += alpha * x`
    pub fn axpy(&mut self, alpha: C64, x: &DenseVector) -> Result<()> {
        if self.dim() != x.dim() {
            return Err(LinalgError::DimensionMismatch {
                op: "axpy",
                expected: self.dim(),
                found: x.dim(),
            });
        }
        for (y, xi) in self.data.iter_mut().zip(&x.data) {
            *y += alpha * xi;
        }
        Ok(())
    }

    /// Returns a unit-norm copy; a zero vector stays zero.
    pub fn normalized(&self) -> DenseVector {
        let norm = self.norm();
        if norm == 0.0 {
            return self.clone();
        }
        self.scaled(C64::new(1.0 / norm, 0.0))
    }

    pub fn max_abs_diff(&self, other: &DenseVector) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for DenseVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for DenseVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.data[i]
    }
}

/// Row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                op: "from_row_major",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// `|psi><psi|`
    pub fn outer(psi: &DenseVector) -> Self {
        let n = psi.dim();
        Self::from_fn(n, n, |r, c| psi[r] * psi[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scaled(&self, alpha: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * alpha).collect(),
        }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "matmul",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.data[k * other.cols + c];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &DenseVector) -> Result<DenseVector> {
        if self.cols != v.dim() {
            return Err(LinalgError::DimensionMismatch {
                op: "dense matvec",
                expected: self.cols,
                found: v.dim(),
            });
        }
        let mut out = DenseVector::zeros(self.rows);
        for r in 0..self.rows {
            out[r] = (0..self.cols).map(|c| self[(r, c)] * v[c]).sum();
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                op: "sub",
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M - M^dagger|` over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                err = err.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        err
    }

    /// `(M + M^dagger) / 2`
    pub fn hermitian_part(&self) -> DenseMatrix {
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    /// Column-stacked vectorization: element `(i, j)` lands at `j * rows + i`.
    pub fn to_column_stacked(&self) -> DenseVector {
        let mut v = DenseVector::zeros(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v[j * self.rows + i] = self[(i, j)];
            }
        }
        v
    }

    pub fn from_column_stacked(rows: usize, cols: usize, v: &[C64]) -> Result<Self> {
        if v.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                op: "from_column_stacked",
                expected: rows * cols,
                found: v.len(),
            });
        }
        Ok(Self::from_fn(rows, cols, |i, j| v[j * rows + i]))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}
