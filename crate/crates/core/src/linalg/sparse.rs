use super::{check_finite, DenseMatrix, DenseVector, LinalgError, Result, C64, MAX_DIM, ZERO_THRESHOLD};

/// Complex sparse matrix in compressed-row layout.
///
/// Column indices inside each row are sorted and unique, and entries with
/// magnitude at or below [`ZERO_THRESHOLD`] are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(LinalgError::DimensionOverflow {
            rows,
            cols,
            max: MAX_DIM,
        });
    }
    Ok(())
}

impl SparseOperator {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for (i, &d) in diag.iter().enumerate() {
            if d.norm() > ZERO_THRESHOLD {
                col_idx.push(i);
                values.push(d);
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            rows: n,
            cols: n,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Assembles from coordinate triplets. Duplicates are summed and
    /// near-zero results purged.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, C64)>,
    {
        check_shape(rows, cols)?;
        let mut entries: Vec<(usize, usize, C64)> = triplets.into_iter().collect();
        for &(r, c, v) in &entries {
            if r >= rows || c >= cols {
                return Err(LinalgError::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(LinalgError::NonFinite("sparse triplet"));
            }
        }
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));

        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        let mut i = 0;
        while i < entries.len() {
            let (r, c, mut v) = entries[i];
            i += 1;
            while i < entries.len() && entries[i].0 == r && entries[i].1 == c {
                v += entries[i].2;
                i += 1;
            }
            if v.norm() > ZERO_THRESHOLD {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
            }
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        let mut triplets = Vec::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                triplets.push((r, c, m[(r, c)]));
            }
        }
        Self::from_triplets(m.rows(), m.cols(), triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entries of row `r` as `(col, value)` pairs in column order.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// All stored entries as `(row, col, value)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(pos) => self.values[span.start + pos],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    /// `out = self * x` without allocating.
    pub fn matvec_into(&self, x: &[C64], out: &mut [C64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (r, slot) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *slot = acc;
        }
    }

    pub fn scaled(&self, alpha: C64) -> Result<Self> {
        Self::from_triplets(self.rows, self.cols, self.iter().map(|(r, c, v)| (r, c, v * alpha)))
    }

    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        for v in &mut t.values {
            *v = v.conj();
        }
        t
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.col_idx {
            counts[c + 1] += 1;
        }
        for c in 0..self.cols {
            counts[c + 1] += counts[c];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0; self.nnz()];
        let mut values = vec![C64::new(0.0, 0.0); self.nnz()];
        for r in 0..self.rows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k];
                let dst = next[c];
                col_idx[dst] = r;
                values[dst] = self.values[k];
                next[c] += 1;
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v = v.conj();
        }
        out
    }

    /// `sum_i coeff_i * op_i` for operators of identical shape.
    pub fn linear_combination(terms: &[(C64, &SparseOperator)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(LinalgError::InvalidGrid("empty linear combination".into()));
        };
        let (rows, cols) = (first.rows, first.cols);
        let mut triplets = Vec::with_capacity(terms.iter().map(|(_, op)| op.nnz()).sum());
        for (alpha, op) in terms {
            if op.rows != rows || op.cols != cols {
                return Err(LinalgError::DimensionMismatch {
                    op: "linear_combination",
                    expected: rows * cols,
                    found: op.rows * op.cols,
                });
            }
            triplets.extend(op.iter().map(|(r, c, v)| (r, c, v * alpha)));
        }
        Self::from_triplets(rows, cols, triplets)
    }

    pub fn add(&self, other: &SparseOperator) -> Result<Self> {
        let one = C64::new(1.0, 0.0);
        Self::linear_combination(&[(one, self), (one, other)])
    }

    /// Sparse-sparse product `self * other`.
    pub fn mul(&self, other: &SparseOperator) -> Result<Self> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "sparse mul",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut triplets = Vec::new();
        let mut acc = vec![C64::new(0.0, 0.0); other.cols];
        let mut touched = Vec::new();
        let mut mark = vec![false; other.cols];
        for r in 0..self.rows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !mark[c] {
                        mark[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            for &c in &touched {
                triplets.push((r, c, acc[c]));
                acc[c] = C64::new(0.0, 0.0);
                mark[c] = false;
            }
            touched.clear();
        }
        Self::from_triplets(self.rows, other.cols, triplets)
    }

    /// Largest entrywise difference to another operator of the same shape.
    pub fn max_abs_diff(&self, other: &SparseOperator) -> f64 {
        let mut err: f64 = 0.0;
        for (r, c, v) in self.iter() {
            err = err.max((v - other.get(r, c)).norm());
        }
        for (r, c, v) in other.iter() {
            err = err.max((v - self.get(r, c)).norm());
        }
        err
    }

    /// `max |H - H^dagger|`
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Submatrix on the given (sorted, unique) index set for both rows and columns.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Result<Self> {
        let mut local = vec![usize::MAX; self.cols.max(self.rows)];
        for (i, &g) in indices.iter().enumerate() {
            local[g] = i;
        }
        let mut triplets = Vec::new();
        for (i, &g) in indices.iter().enumerate() {
            for (c, v) in self.row(g) {
                let lc = local[c];
                if lc != usize::MAX {
                    triplets.push((i, lc, v));
                }
            }
        }
        Self::from_triplets(indices.len(), indices.len(), triplets)
    }
}

/// Kronecker product: entry `(i1*rows_b + i2, j1*cols_b + j2) = a[i1,j1] * b[i2,j2]`.
pub fn kron(a: &SparseOperator, b: &SparseOperator) -> Result<SparseOperator> {
    let rows = a.rows.checked_mul(b.rows).unwrap_or(usize::MAX);
    let cols = a.cols.checked_mul(b.cols).unwrap_or(usize::MAX);
    check_shape(rows, cols)?;
    let mut triplets = Vec::with_capacity(a.nnz() * b.nnz());
    for (i1, j1, va) in a.iter() {
        for (i2, j2, vb) in b.iter() {
            triplets.push((i1 * b.rows + i2, j1 * b.cols + j2, va * vb));
        }
    }
    SparseOperator::from_triplets(rows, cols, triplets)
}

pub fn matvec(op: &SparseOperator, v: &DenseVector) -> Result<DenseVector> {
    if op.cols != v.dim() {
        return Err(LinalgError::DimensionMismatch {
            op: "matvec",
            expected: op.cols,
            found: v.dim(),
        });
    }
    check_finite(v.as_slice(), "matvec input")?;
    let mut out = DenseVector::zeros(op.rows);
    op.matvec_into(v.as_slice(), out.as_mut_slice());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn real_diag(d: &[f64]) -> SparseOperator {
        SparseOperator::diagonal(&d.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = kron(&SparseOperator::identity(2), &SparseOperator::identity(3)).unwrap();
        assert_eq!(k, SparseOperator::identity(6));
    }

    #[test]
    fn kron_diagonal_structure() {
        let k = kron(&real_diag(&[1.0, 2.0]), &SparseOperator::identity(2)).unwrap();
        assert_eq!(k, real_diag(&[1.0, 1.0, 2.0, 2.0]));
    }

    #[test]
    fn kron_matches_quadruple_loop() {
        let a = DenseMatrix::from_fn(2, 2, |r, k| c(1.0 + r as f64, 0.5 * k as f64 - 0.25));
        let b = DenseMatrix::from_fn(2, 2, |r, k| c(-(r as f64) + 2.0 * k as f64, 1.0 + r as f64));
        let got = kron(
            &SparseOperator::from_dense(&a).unwrap(),
            &SparseOperator::from_dense(&b).unwrap(),
        )
        .unwrap()
        .to_dense();
        let mut expected = DenseMatrix::zeros(4, 4);
        for i1 in 0..2 {
            for j1 in 0..2 {
                for i2 in 0..2 {
                    for j2 in 0..2 {
                        expected[(i1 * 2 + i2, j1 * 2 + j2)] = a[(i1, j1)] * b[(i2, j2)];
                    }
                }
            }
        }
        assert!(got.max_abs_diff(&expected) == 0.0);
    }

    #[test]
    fn kron_overflow_is_an_error() {
        let big = SparseOperator::zeros(1 << 12, 1 << 12);
        assert!(matches!(
            kron(&big, &big),
            Err(LinalgError::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn triplets_merge_and_purge() {
        let op = SparseOperator::from_triplets(
            2,
            2,
            vec![(0, 1, c(1.0, 0.0)), (0, 1, c(-1.0, 0.0)), (1, 0, c(2.0, 0.0)), (1, 0, c(1.0, 1.0))],
        )
        .unwrap();
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.get(1, 0), c(3.0, 1.0));
        assert!(SparseOperator::from_triplets(2, 2, vec![(2, 0, c(1.0, 0.0))]).is_err());
        assert!(SparseOperator::from_triplets(2, 2, vec![(0, 0, c(f64::NAN, 0.0))]).is_err());
    }

    #[test]
    fn identity_and_zero_matvec() {
        let v = DenseVector::from_vec(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, -1.0)]);
        assert_eq!(matvec(&SparseOperator::identity(3), &v).unwrap(), v);
        assert_eq!(
            matvec(&SparseOperator::zeros(3, 3), &v).unwrap(),
            DenseVector::zeros(3)
        );
        assert!(matvec(&SparseOperator::identity(2), &v).is_err());
    }

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    #[test]
    fn matvec_matches_dense_loop() {
        let mut seed = 17;
        let dense = DenseMatrix::from_fn(8, 8, |_, _| {
            let (x, y) = (lcg(&mut seed), lcg(&mut seed));
            if x.abs() < 0.3 {
                c(0.0, 0.0)
            } else {
                c(x, y)
            }
        });
        let v = DenseVector::from_vec((0..8).map(|_| c(lcg(&mut seed), lcg(&mut seed))).collect());
        let sparse = SparseOperator::from_dense(&dense).unwrap();
        let got = matvec(&sparse, &v).unwrap();
        let mut expected = DenseVector::zeros(8);
        for r in 0..8 {
            for k in 0..8 {
                expected[r] += dense[(r, k)] * v[k];
            }
        }
        assert!(got.max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn product_adjoint_and_submatrix() {
        let a = SparseOperator::from_triplets(2, 2, vec![(0, 1, c(1.0, 1.0)), (1, 1, c(2.0, 0.0))]).unwrap();
        let aa = a.mul(&a.adjoint()).unwrap().to_dense();
        let expected = a.to_dense().matmul(&a.to_dense().adjoint()).unwrap();
        assert!(aa.max_abs_diff(&expected) < 1e-15);
        let sub = a.principal_submatrix(&[1]).unwrap();
        assert_eq!(sub.get(0, 0), c(2.0, 0.0));
    }

    fn small_op() -> impl Strategy<Value = SparseOperator> {
        (1usize..4, 1usize..4, proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16)).prop_map(
            |(r, k, vals)| {
                let trip = (0..r * k).map(|i| (i / k, i % k, c(vals[i].0, vals[i].1)));
                SparseOperator::from_triplets(r, k, trip).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn kron_is_associative(a in small_op(), b in small_op(), d in small_op()) {
            let left = kron(&kron(&a, &b).unwrap(), &d).unwrap();
            let right = kron(&a, &kron(&b, &d).unwrap()).unwrap();
            prop_assert!(left.max_abs_diff(&right) < 1e-15);
        }

        #[test]
        fn matvec_is_linear(
            vals in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 36),
            u in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
            w in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
            alpha in (-2.0f64..2.0, -2.0f64..2.0),
            beta in (-2.0f64..2.0, -2.0f64..2.0),
        ) {
            let op = SparseOperator::from_triplets(6, 6, (0..36).map(|i| (i / 6, i % 6, c(vals[i].0, vals[i].1)))).unwrap();
            let u = DenseVector::from_vec(u.iter().map(|&(x, y)| c(x, y)).collect());
            let w = DenseVector::from_vec(w.iter().map(|&(x, y)| c(x, y)).collect());
            let (alpha, beta) = (c(alpha.0, alpha.1), c(beta.0, beta.1));
            let mut combo = u.scaled(alpha);
            combo.axpy(beta, &w).unwrap();
            let lhs = matvec(&op, &combo).unwrap();
            let mut rhs = matvec(&op, &u).unwrap().scaled(alpha);
            rhs.axpy(beta, &matvec(&op, &w).unwrap()).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-13);
        }
    }
}
