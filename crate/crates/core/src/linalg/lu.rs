//! Sparse LU factorization with partial pivoting.
//!
//! Left-looking (Gilbert–Peierls) elimination: each column is computed by a
//! sparse triangular solve against the already-factored part of `L`, whose
//! nonzero pattern is found by a depth-first reach. Columns are visited in
//! minimum-degree order of the symmetrized pattern; within a column the
//! diagonal is kept as pivot whenever it is within [`PIVOT_THRESHOLD`] of the
//! largest candidate, which keeps the fill close to the symbolic prediction.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{DenseVector, LinalgError, Result, SparseOperator, C64};

/// Relative size the diagonal candidate needs to be preferred as pivot.
pub const PIVOT_THRESHOLD: f64 = 0.1;

/// Pivots smaller than this multiple of the largest matrix entry count as zero.
const SINGULAR_RATIO: f64 = 1e-13;

/// Bound on `||A x - b|| / max(1, ||b||)` accepted by [`solve_sparse`].
pub const RESIDUAL_BOUND: f64 = 1e-10;

const UNSET: usize = usize::MAX;

/// Fill-reducing column order from greedy minimum degree on the pattern of `A + A^T`.
pub fn minimum_degree_ordering(a: &SparseOperator) -> Vec<usize> {
    let n = a.rows().max(a.cols());
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (r, c, _) in a.iter() {
        if r != c {
            adj[r].push(c);
            adj[c].push(r);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }

    let mut eliminated = vec![false; n];
    let mut mark = vec![0usize; n];
    let mut stamp = 0usize;
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..n).map(|v| Reverse((adj[v].len(), v))).collect();
    let mut order = Vec::with_capacity(n);

    while let Some(Reverse((deg, v))) = heap.pop() {
        if eliminated[v] || deg != adj[v].len() {
            continue;
        }
        eliminated[v] = true;
        order.push(v);
        let nbrs: Vec<usize> = adj[v].iter().copied().filter(|&u| !eliminated[u]).collect();
        for &u in &nbrs {
            stamp += 1;
            let mut merged = Vec::with_capacity(adj[u].len() + nbrs.len());
            for &w in adj[u].iter().chain(nbrs.iter()) {
                if w != u && !eliminated[w] && mark[w] != stamp {
                    mark[w] = stamp;
                    merged.push(w);
                }
            }
            adj[u] = merged;
            heap.push(Reverse((adj[u].len(), u)));
        }
        adj[v] = Vec::new();
    }
    order
}

/// `P A Q = L U` with unit lower-triangular `L`.
#[derive(Clone, Debug)]
pub struct SparseLu {
    n: usize,
    l_ptr: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<C64>,
    u_ptr: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<C64>,
    u_diag: Vec<C64>,
    /// original row -> elimination step
    pinv: Vec<usize>,
    /// elimination step -> original column
    q: Vec<usize>,
}

impl SparseLu {
    pub fn factor(a: &SparseOperator) -> Result<Self> {
        let order = minimum_degree_ordering(a);
        Self::factor_with_ordering(a, &order)
    }

    pub fn factor_with_ordering(a: &SparseOperator, q: &[usize]) -> Result<Self> {
        if !a.is_square() {
            return Err(LinalgError::DimensionMismatch {
                op: "sparse lu (square)",
                expected: a.rows(),
                found: a.cols(),
            });
        }
        let n = a.rows();
        if q.len() != n {
            return Err(LinalgError::DimensionMismatch {
                op: "sparse lu ordering",
                expected: n,
                found: q.len(),
            });
        }
        let a_norm = a.iter().map(|(_, _, v)| v.norm()).fold(0.0, f64::max);
        // columns of A are the rows of A^T
        let cols = a.transpose();

        let mut lu = SparseLu {
            n,
            l_ptr: vec![0],
            l_idx: Vec::new(),
            l_val: Vec::new(),
            u_ptr: vec![0],
            u_idx: Vec::new(),
            u_val: Vec::new(),
            u_diag: Vec::with_capacity(n),
            pinv: vec![UNSET; n],
            q: q.to_vec(),
        };

        let mut x = vec![C64::new(0.0, 0.0); n];
        let mut visited = vec![UNSET; n];
        let mut topo: Vec<usize> = Vec::with_capacity(n);
        let mut dfs_stack: Vec<(usize, usize)> = Vec::new();

        for (k, &col) in q.iter().enumerate() {
            // symbolic reach of column `col` through the graph of L
            topo.clear();
            for (i, _) in cols.row(col) {
                if visited[i] == k {
                    continue;
                }
                visited[i] = k;
                dfs_stack.push((i, 0));
                while let Some(&mut (node, ref mut child)) = dfs_stack.last_mut() {
                    let step = lu.pinv[node];
                    let mut pushed = false;
                    if step != UNSET {
                        let span = lu.l_ptr[step]..lu.l_ptr[step + 1];
                        while span.start + *child < span.end {
                            let next = lu.l_idx[span.start + *child];
                            *child += 1;
                            if visited[next] != k {
                                visited[next] = k;
                                dfs_stack.push((next, 0));
                                pushed = true;
                                break;
                            }
                        }
                    }
                    if !pushed {
                        topo.push(node);
                        dfs_stack.pop();
                    }
                }
            }

            // numeric sparse triangular solve, reach visited in topological order
            for &i in &topo {
                x[i] = C64::new(0.0, 0.0);
            }
            for (i, v) in cols.row(col) {
                x[i] = v;
            }
            for &i in topo.iter().rev() {
                let step = lu.pinv[i];
                if step == UNSET {
                    continue;
                }
                let xi = x[i];
                lu.u_idx.push(step);
                lu.u_val.push(xi);
                if xi == C64::new(0.0, 0.0) {
                    continue;
                }
                for p in lu.l_ptr[step]..lu.l_ptr[step + 1] {
                    x[lu.l_idx[p]] -= lu.l_val[p] * xi;
                }
            }
            lu.u_ptr.push(lu.u_idx.len());

            // pivot choice among rows not yet used
            let mut best = UNSET;
            let mut best_abs = -1.0;
            for &i in &topo {
                if lu.pinv[i] == UNSET {
                    let m = x[i].norm();
                    if m > best_abs {
                        best_abs = m;
                        best = i;
                    }
                }
            }
            if best == UNSET || best_abs <= SINGULAR_RATIO * a_norm || best_abs == 0.0 {
                return Err(LinalgError::Singular {
                    step: k,
                    pivot: best_abs.max(0.0),
                });
            }
            if lu.pinv[col] == UNSET && visited[col] == k && x[col].norm() >= PIVOT_THRESHOLD * best_abs {
                best = col;
            }
            let pivot = x[best];
            lu.pinv[best] = k;
            lu.u_diag.push(pivot);
            for &i in &topo {
                if lu.pinv[i] == UNSET && x[i] != C64::new(0.0, 0.0) {
                    lu.l_idx.push(i);
                    lu.l_val.push(x[i] / pivot);
                }
            }
            lu.l_ptr.push(lu.l_idx.len());
        }

        for r in &mut lu.l_idx {
            *r = lu.pinv[*r];
        }
        Ok(lu)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Stored entries of `L` and `U` (a measure of fill).
    pub fn factor_nnz(&self) -> usize {
        self.l_idx.len() + self.u_idx.len() + self.n
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        if b.len() != self.n {
            return Err(LinalgError::DimensionMismatch {
                op: "lu solve",
                expected: self.n,
                found: b.len(),
            });
        }
        let mut x = vec![C64::new(0.0, 0.0); self.n];
        for (i, &bi) in b.iter().enumerate() {
            x[self.pinv[i]] = bi;
        }
        for j in 0..self.n {
            let xj = x[j];
            if xj == C64::new(0.0, 0.0) {
                continue;
            }
            for p in self.l_ptr[j]..self.l_ptr[j + 1] {
                x[self.l_idx[p]] -= self.l_val[p] * xj;
            }
        }
        for j in (0..self.n).rev() {
            x[j] /= self.u_diag[j];
            let xj = x[j];
            if xj == C64::new(0.0, 0.0) {
                continue;
            }
            for p in self.u_ptr[j]..self.u_ptr[j + 1] {
                x[self.u_idx[p]] -= self.u_val[p] * xj;
            }
        }
        let mut out = vec![C64::new(0.0, 0.0); self.n];
        for (j, &col) in self.q.iter().enumerate() {
            out[col] = x[j];
        }
        Ok(out)
    }
}

fn relative_residual(a: &SparseOperator, x: &[C64], b: &[C64], r: &mut [C64]) -> f64 {
    a.matvec_into(x, r);
    let mut num = 0.0;
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
        num += ri.norm_sqr();
    }
    let bnorm: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    num.sqrt() / bnorm.max(1.0)
}

/// Direct solve of `a x = rhs` with one round of iterative refinement.
pub fn solve_sparse(a: &SparseOperator, rhs: &DenseVector) -> Result<DenseVector> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_sparse (square)",
            expected: a.rows(),
            found: a.cols(),
        });
    }
    if rhs.dim() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_sparse rhs",
            expected: a.rows(),
            found: rhs.dim(),
        });
    }
    super::check_finite(rhs.as_slice(), "solve_sparse rhs")?;
    let lu = SparseLu::factor(a)?;
    let b = rhs.as_slice();
    let mut x = lu.solve(b)?;
    let mut r = vec![C64::new(0.0, 0.0); b.len()];
    let mut residual = relative_residual(a, &x, b, &mut r);
    if residual > f64::EPSILON {
        let dx = lu.solve(&r)?;
        let refined: Vec<C64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
        let mut r2 = vec![C64::new(0.0, 0.0); b.len()];
        let refined_residual = relative_residual(a, &refined, b, &mut r2);
        if refined_residual < residual {
            x = refined;
            residual = refined_residual;
        }
    }
    if !(residual <= RESIDUAL_BOUND) {
        return Err(LinalgError::ResidualTooLarge {
            residual,
            bound: RESIDUAL_BOUND,
        });
    }
    Ok(DenseVector::from_vec(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    /// Dense Gaussian elimination with partial pivoting (test oracle).
    fn dense_solve(a: &DenseMatrix, b: &[C64]) -> Vec<C64> {
        let n = a.rows();
        let mut m: Vec<Vec<C64>> = (0..n)
            .map(|r| {
                let mut row: Vec<C64> = (0..n).map(|c| a[(r, c)]).collect();
                row.push(b[r]);
                row
            })
            .collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| m[i][k].norm().partial_cmp(&m[j][k].norm()).unwrap())
                .unwrap();
            m.swap(k, p);
            for i in k + 1..n {
                let f = m[i][k] / m[k][k];
                for j in k..=n {
                    let t = m[k][j];
                    m[i][j] -= f * t;
                }
            }
        }
        let mut x = vec![c(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut s = m[i][n];
            for j in i + 1..n {
                s -= m[i][j] * x[j];
            }
            x[i] = s / m[i][i];
        }
        x
    }

    #[test]
    fn identity_system_returns_rhs() {
        let b = DenseVector::from_vec(vec![c(1.0, -1.0), c(2.0, 0.5), c(0.0, 3.0)]);
        let x = solve_sparse(&SparseOperator::identity(3), &b).unwrap();
        assert!(x.max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn diagonal_system() {
        let a = SparseOperator::diagonal(&[c(2.0, 0.0), c(4.0, 0.0)]);
        let x = solve_sparse(&a, &DenseVector::from_real(&[2.0, 4.0])).unwrap();
        assert!(x.max_abs_diff(&DenseVector::from_real(&[1.0, 1.0])) < 1e-15);
    }

    #[test]
    fn random_well_conditioned_matches_dense_elimination() {
        let mut seed = 99;
        let n = 50;
        let dense = DenseMatrix::from_fn(n, n, |r, k| {
            let (x, y) = (lcg(&mut seed), lcg(&mut seed));
            if r == k {
                c(8.0 + x, y)
            } else if x.abs() < 0.25 {
                c(x, y)
            } else {
                c(0.0, 0.0)
            }
        });
        let b: Vec<C64> = (0..n).map(|_| c(lcg(&mut seed), lcg(&mut seed))).collect();
        let a = SparseOperator::from_dense(&dense).unwrap();
        let x = solve_sparse(&a, &DenseVector::from_vec(b.clone())).unwrap();
        let oracle = dense_solve(&dense, &b);
        let diff = x.iter().zip(&oracle).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-9, "max diff {diff}");
    }

    #[test]
    fn zero_diagonal_needs_off_diagonal_pivot() {
        let a = SparseOperator::from_triplets(
            3,
            3,
            vec![(0, 1, c(1.0, 0.0)), (1, 0, c(2.0, 0.0)), (1, 2, c(1.0, 0.0)), (2, 2, c(3.0, 1.0))],
        )
        .unwrap();
        let b = DenseVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0)]);
        let x = solve_sparse(&a, &b).unwrap();
        let oracle = dense_solve(&a.to_dense(), b.as_slice());
        assert!(x.iter().zip(&oracle).all(|(p, q)| (p - q).norm() < 1e-14));
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = SparseOperator::from_triplets(
            2,
            2,
            vec![(0, 0, c(1.0, 0.0)), (0, 1, c(2.0, 0.0)), (1, 0, c(2.0, 0.0)), (1, 1, c(4.0, 0.0))],
        )
        .unwrap();
        assert!(matches!(
            solve_sparse(&a, &DenseVector::from_real(&[1.0, 1.0])),
            Err(LinalgError::Singular { .. })
        ));
    }

    #[test]
    fn minimum_degree_is_a_permutation() {
        let mut seed = 3;
        let dense = DenseMatrix::from_fn(30, 30, |r, k| {
            if r == k || lcg(&mut seed).abs() < 0.1 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let mut order = minimum_degree_ordering(&SparseOperator::from_dense(&dense).unwrap());
        order.sort_unstable();
        assert_eq!(order, (0..30).collect::<Vec<_>>());
    }

    #[test]
    fn arrow_matrix_ordering_avoids_fill() {
        // dense first row/column: eliminating the hub first fills everything
        let n = 40;
        let mut trip = Vec::new();
        for i in 0..n {
            trip.push((i, i, c(4.0, 0.0)));
            if i > 0 {
                trip.push((0, i, c(1.0, 0.0)));
                trip.push((i, 0, c(1.0, 0.0)));
            }
        }
        let a = SparseOperator::from_triplets(n, n, trip).unwrap();
        let lu = SparseLu::factor(&a).unwrap();
        assert!(lu.factor_nnz() <= 3 * n);
        let natural = SparseLu::factor_with_ordering(&a, &(0..n).collect::<Vec<_>>()).unwrap();
        assert!(natural.factor_nnz() > lu.factor_nnz());
    }
}
