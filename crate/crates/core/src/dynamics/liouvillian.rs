use std::sync::OnceLock;

use crate::linalg::{kron, DenseMatrix, SparseOperator, C64};
use crate::model::{Basis, ModelConfig, OperatorSet};

use super::{DynamicsError, Result};

/// Connected components of the Liouvillian's sparsity graph.
///
/// The generator is block diagonal over these components, so every
/// propagation or linear solve can be restricted to the components that
/// support its initial data.
#[derive(Clone, Debug)]
pub struct Blocks {
    label: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Blocks {
    fn from_operator(op: &SparseOperator) -> Self {
        let n = op.rows();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (r, c, _) in op.iter() {
            let (a, b) = (find(&mut parent, r), find(&mut parent, c));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut root_to_label = vec![usize::MAX; n];
        let mut label = vec![0; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            if root_to_label[r] == usize::MAX {
                root_to_label[r] = members.len();
                members.push(Vec::new());
            }
            label[i] = root_to_label[r];
            members[label[i]].push(i);
        }
        Self { label, members }
    }

    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn label(&self, index: usize) -> usize {
        self.label[index]
    }

    pub fn members(&self, block: usize) -> &[usize] {
        &self.members[block]
    }

    /// Sorted union of the blocks that contain any of `indices`.
    pub fn closure(&self, indices: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut hit = vec![false; self.members.len()];
        for i in indices {
            hit[self.label[i]] = true;
        }
        let mut out: Vec<usize> = hit
            .iter()
            .enumerate()
            .filter(|(_, &h)| h)
            .flat_map(|(b, _)| self.members[b].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

/// Column-stacked Lindblad generator: `vec(A rho B^dagger) = (conj(B) ⊗ A) vec(rho)`.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    superop: SparseOperator,
    dim: usize,
    model: Option<(ModelConfig, Basis)>,
    blocks: OnceLock<Blocks>,
}

pub fn build_liouvillian(ops: &OperatorSet, cfg: &ModelConfig) -> Result<Liouvillian> {
    if ops.basis != Basis::new(cfg.trunc_a, cfg.trunc_b) {
        return Err(DynamicsError::InvalidState(
            "operator set and configuration use different truncations".into(),
        ));
    }
    let mut l = Liouvillian::from_parts(
        &ops.h_int,
        &[(cfg.kappa_a, &ops.a), (cfg.kappa_b, &ops.b), (cfg.gamma, &ops.sigma_minus)],
    )?;
    l.model = Some((cfg.clone(), ops.basis));
    Ok(l)
}

impl Liouvillian {
    /// `-i[H, .] + sum_k rate_k D[o_k]` with `D[o] rho = o rho o† - {o†o, rho}/2`.
    pub fn from_parts(h: &SparseOperator, channels: &[(f64, &SparseOperator)]) -> Result<Self> {
        let dim = h.rows();
        if !h.is_square() {
            return Err(DynamicsError::InvalidState("Hamiltonian must be square".into()));
        }
        let id = SparseOperator::identity(dim);
        let mi = C64::new(0.0, -1.0);
        let left_h = kron(&id, h)?;
        let right_h = kron(&h.transpose(), &id)?;
        let mut terms: Vec<(C64, SparseOperator)> = vec![(mi, left_h), (-mi, right_h)];
        for &(rate, o) in channels {
            if rate < 0.0 || !rate.is_finite() {
                return Err(DynamicsError::InvalidState(format!("invalid decay rate {rate}")));
            }
            if rate == 0.0 {
                continue;
            }
            if o.rows() != dim || o.cols() != dim {
                return Err(DynamicsError::InvalidState("jump operator shape mismatch".into()));
            }
            let odo = o.adjoint().mul(o)?;
            let r = C64::new(rate, 0.0);
            terms.push((r, kron(&o.conj(), o)?));
            terms.push((-0.5 * r, kron(&id, &odo)?));
            terms.push((-0.5 * r, kron(&odo.transpose(), &id)?));
        }
        let refs: Vec<(C64, &SparseOperator)> = terms.iter().map(|(c, op)| (*c, op)).collect();
        let superop = SparseOperator::linear_combination(&refs)?;
        Ok(Self {
            superop,
            dim,
            model: None,
            blocks: OnceLock::new(),
        })
    }

    pub fn superop(&self) -> &SparseOperator {
        &self.superop
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn config(&self) -> Option<&ModelConfig> {
        self.model.as_ref().map(|(c, _)| c)
    }

    pub fn basis(&self) -> Option<Basis> {
        self.model.as_ref().map(|(_, b)| *b)
    }

    pub fn blocks(&self) -> &Blocks {
        self.blocks.get_or_init(|| Blocks::from_operator(&self.superop))
    }

    /// Column-stacked indices of the diagonal entries `rho_ii`.
    pub fn diagonal_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).map(move |i| i * self.dim + i)
    }

    /// `L[rho]`
    pub fn apply(&self, rho: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_shape(rho)?;
        let v = rho.to_column_stacked();
        let mut out = vec![C64::new(0.0, 0.0); v.dim()];
        self.superop.matvec_into(v.as_slice(), &mut out);
        Ok(DenseMatrix::from_column_stacked(self.dim, self.dim, &out)?)
    }

    pub(crate) fn check_shape(&self, rho: &DenseMatrix) -> Result<()> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(DynamicsError::InvalidState(format!(
                "density matrix is {}x{}, expected {}x{}",
                rho.rows(),
                rho.cols(),
                self.dim,
                self.dim
            )));
        }
        Ok(())
    }
}
