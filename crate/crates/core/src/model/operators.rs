use crate::linalg::{kron, SparseOperator, C64};

use super::basis::Basis;
use super::config::ModelConfig;
use super::{falling_sqrt, Result};

/// Sparse operators on TLS ⊗ mode a ⊗ mode b.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    pub cfg: ModelConfig,
    pub basis: Basis,
    pub a: SparseOperator,
    pub a_dag: SparseOperator,
    pub b: SparseOperator,
    pub b_dag: SparseOperator,
    pub sigma_minus: SparseOperator,
    pub sigma_plus: SparseOperator,
    pub sigma_z: SparseOperator,
    pub sigma_x: SparseOperator,
    pub num_a: SparseOperator,
    pub num_b: SparseOperator,
    /// `σ₊σ₋`, the excited-state projector.
    pub sigma_ee: SparseOperator,
    /// `aⁿ bᵐ σ₊`
    pub coupling: SparseOperator,
    pub h_int: SparseOperator,
    pub h0_prime: SparseOperator,
}

/// `aᵖ` on a single truncated mode, built from exact matrix elements.
pub fn ladder_power(trunc: usize, p: usize) -> Result<SparseOperator> {
    let levels = trunc + 1;
    let triplets = (p..levels).map(|k| (k - p, k, C64::new(falling_sqrt(k, p), 0.0)));
    Ok(SparseOperator::from_triplets(levels, levels, triplets)?)
}

fn tls(entries: &[(usize, usize, f64)]) -> Result<SparseOperator> {
    Ok(SparseOperator::from_triplets(
        2,
        2,
        entries.iter().map(|&(r, c, v)| (r, c, C64::new(v, 0.0))),
    )?)
}

fn embed(s: &SparseOperator, a: &SparseOperator, b: &SparseOperator) -> Result<SparseOperator> {
    Ok(kron(&kron(s, a)?, b)?)
}

pub fn build_operators(cfg: &ModelConfig) -> Result<OperatorSet> {
    cfg.validate()?;
    let basis = Basis::new(cfg.trunc_a, cfg.trunc_b);
    let ia = SparseOperator::identity(basis.levels_a());
    let ib = SparseOperator::identity(basis.levels_b());
    let i2 = SparseOperator::identity(2);

    let a1 = ladder_power(cfg.trunc_a, 1)?;
    let b1 = ladder_power(cfg.trunc_b, 1)?;
    let an = ladder_power(cfg.trunc_a, cfg.n as usize)?;
    let bm = ladder_power(cfg.trunc_b, cfg.m as usize)?;
    let sm2 = tls(&[(0, 1, 1.0)])?;
    let sp2 = tls(&[(1, 0, 1.0)])?;

    let a = embed(&i2, &a1, &ib)?;
    let b = embed(&i2, &ia, &b1)?;
    let sigma_minus = embed(&sm2, &ia, &ib)?;
    let sigma_plus = embed(&sp2, &ia, &ib)?;
    let sigma_z = embed(&tls(&[(0, 0, -1.0), (1, 1, 1.0)])?, &ia, &ib)?;
    let sigma_x = embed(&tls(&[(0, 1, 1.0), (1, 0, 1.0)])?, &ia, &ib)?;
    let sigma_ee = embed(&tls(&[(1, 1, 1.0)])?, &ia, &ib)?;
    let a_dag = a.adjoint();
    let b_dag = b.adjoint();
    let num_a = a_dag.mul(&a)?;
    let num_b = b_dag.mul(&b)?;
    let coupling = embed(&sp2, &an, &bm)?;
    let coupling_dag = coupling.adjoint();

    let re = |x: f64| C64::new(x, 0.0);
    let h0_prime = SparseOperator::linear_combination(&[
        (re(0.5 * cfg.delta_sigma), &sigma_z),
        (re(cfg.delta_a), &num_a),
        (re(cfg.delta_b), &num_b),
        (re(cfg.omega_l), &sigma_x),
    ])?;
    let h_int = SparseOperator::linear_combination(&[
        (re(1.0), &h0_prime),
        (re(cfg.g), &coupling),
        (re(cfg.g), &coupling_dag),
    ])?;

    Ok(OperatorSet {
        cfg: cfg.clone(),
        basis,
        a,
        a_dag,
        b,
        b_dag,
        sigma_minus,
        sigma_plus,
        sigma_z,
        sigma_x,
        num_a,
        num_b,
        sigma_ee,
        coupling,
        h_int,
        h0_prime,
    })
}

impl OperatorSet {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// `aᵏ bˡ` on the full space.
    pub fn mode_product(&self, k: usize, l: usize) -> Result<SparseOperator> {
        let ak = ladder_power(self.basis.trunc_a, k)?;
        let bl = ladder_power(self.basis.trunc_b, l)?;
        embed(&SparseOperator::identity(2), &ak, &bl)
    }
}
