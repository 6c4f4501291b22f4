use crate::linalg::{DenseMatrix, DormandPrince, OdeControl, SparseLu, SparseOperator, C64};
use crate::model::dressed_basis;

use super::liouvillian::Liouvillian;
use super::state::{EvolutionRecord, PopulationFrame, QuantumState};
use super::{DynamicsError, Result};

/// Bound on `||L vec(rho_ss)||_2`.
pub const STEADY_RESIDUAL_BOUND: f64 = 1e-9;

/// Trace drift above which a master-equation run is rejected.
pub const TRACE_DRIFT_BOUND: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub struct SteadyState {
    pub rho: DenseMatrix,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyStateOptions {
    /// Solve a second bordered system with a different constraint row and
    /// require both candidates to agree.
    pub check_uniqueness: bool,
    pub uniqueness_tol: f64,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        Self {
            check_uniqueness: false,
            uniqueness_tol: 1e-8,
        }
    }
}

pub fn solve_steady_state(liou: &Liouvillian) -> Result<SteadyState> {
    solve_steady_state_with(liou, &SteadyStateOptions::default())
}

fn bordered_solve(sub: &SparseOperator, block: &[usize], diag_pos: &[usize], replace: usize) -> Result<Vec<C64>> {
    let n = block.len();
    let mut triplets: Vec<(usize, usize, C64)> = sub.iter().filter(|&(r, _, _)| r != replace).collect();
    triplets.extend(diag_pos.iter().map(|&p| (replace, p, C64::new(1.0, 0.0))));
    let a = SparseOperator::from_triplets(n, n, triplets)?;
    let mut rhs = vec![C64::new(0.0, 0.0); n];
    rhs[replace] = C64::new(1.0, 0.0);
    let lu = SparseLu::factor(&a).map_err(|e| {
        DynamicsError::DegenerateSteadyState(format!("bordered system could not be factored ({e})"))
    })?;
    let mut x = lu.solve(&rhs)?;
    // One step of iterative refinement.
    let mut ax = vec![C64::new(0.0, 0.0); n];
    a.matvec_into(&x, &mut ax);
    let r: Vec<C64> = rhs.iter().zip(&ax).map(|(b, y)| b - y).collect();
    let dx = lu.solve(&r)?;
    for (xi, d) in x.iter_mut().zip(dx) {
        *xi += d;
    }
    Ok(x)
}

/// Stationary state from the bordered system in which one diagonal row of
/// `L` is replaced by the trace constraint. Only the block of `L` that holds
/// the diagonal of `rho` is factored.
pub fn solve_steady_state_with(liou: &Liouvillian, opts: &SteadyStateOptions) -> Result<SteadyState> {
    let dim = liou.dim();
    let blocks = liou.blocks();
    let diag: Vec<usize> = liou.diagonal_indices().collect();
    let first = blocks.label(diag[0]);
    if let Some(&other) = diag.iter().find(|&&d| blocks.label(d) != first) {
        let i = other / dim;
        return Err(DynamicsError::DegenerateSteadyState(format!(
            "populations of basis states 0 and {i} are dynamically decoupled"
        )));
    }
    let block = blocks.members(first);
    let sub = liou.superop().principal_submatrix(block)?;
    let diag_pos: Vec<usize> = diag
        .iter()
        .map(|d| block.binary_search(d).expect("diagonal index lies in its own block"))
        .collect();

    let x = bordered_solve(&sub, block, &diag_pos, diag_pos[0])?;
    if opts.check_uniqueness && diag_pos.len() > 1 {
        let y = bordered_solve(&sub, block, &diag_pos, *diag_pos.last().unwrap())?;
        let diff = x.iter().zip(&y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if diff > opts.uniqueness_tol {
            return Err(DynamicsError::DegenerateSteadyState(format!(
                "two bordered candidates differ by {diff:e}"
            )));
        }
    }

    let mut full = vec![C64::new(0.0, 0.0); dim * dim];
    for (&gi, &v) in block.iter().zip(&x) {
        full[gi] = v;
    }
    let rho = DenseMatrix::from_column_stacked(dim, dim, &full)?.hermitian_part();
    let tr = rho.trace().re;
    let rho = rho.scaled(C64::new(1.0 / tr, 0.0));
    let residual = liou.apply(&rho)?.frobenius_norm();
    if !(residual <= STEADY_RESIDUAL_BOUND) {
        return Err(DynamicsError::SteadyStateResidual {
            residual,
            bound: STEADY_RESIDUAL_BOUND,
            block: block.len(),
        });
    }
    Ok(SteadyState { rho, residual })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MasterOptions {
    pub ctrl: OdeControl,
    pub keep_states: bool,
}

impl Default for MasterOptions {
    fn default() -> Self {
        Self {
            ctrl: OdeControl::with_tolerances(1e-9, 1e-11),
            keep_states: true,
        }
    }
}

pub fn evolve_master(liou: &Liouvillian, rho0: &DenseMatrix, t_grid: &[f64]) -> Result<EvolutionRecord> {
    evolve_master_with(liou, rho0, t_grid, &MasterOptions::default())
}

/// Restricted propagation `d vec(rho)/dt = L vec(rho)` on the blocks that
/// support `v0`. Calls `visit(t, full_vector)` at each grid point.
pub(crate) fn propagate_restricted(
    liou: &Liouvillian,
    v0: &[C64],
    t_grid: &[f64],
    ctrl: &OdeControl,
    mut visit: impl FnMut(f64, &[C64]) -> Result<()>,
) -> Result<()> {
    crate::linalg::ode::validate_grid(t_grid)?;
    let support = liou
        .blocks()
        .closure(v0.iter().enumerate().filter(|(_, z)| z.norm() > 0.0).map(|(i, _)| i));
    let sub = liou.superop().principal_submatrix(&support)?;
    let y0: Vec<C64> = support.iter().map(|&i| v0[i]).collect();
    let rhs = |_t: f64, y: &[C64], dy: &mut [C64]| sub.matvec_into(y, dy);
    let mut stepper = DormandPrince::new(rhs, t_grid[0], &y0, *ctrl)?;
    let mut full = vec![C64::new(0.0, 0.0); v0.len()];
    for &t in t_grid {
        while stepper.t() < t {
            stepper.step(t)?;
        }
        for (&gi, &v) in support.iter().zip(stepper.y()) {
            full[gi] = v;
        }
        visit(t, &full)?;
    }
    Ok(())
}

pub fn evolve_master_with(
    liou: &Liouvillian,
    rho0: &DenseMatrix,
    t_grid: &[f64],
    opts: &MasterOptions,
) -> Result<EvolutionRecord> {
    liou.check_shape(rho0)?;
    let dim = liou.dim();
    let tr0 = rho0.trace();
    if (tr0.re - 1.0).abs() > 1e-10 || tr0.im.abs() > 1e-10 {
        return Err(DynamicsError::InvalidState(format!("initial trace {tr0} is not 1")));
    }
    if rho0.hermiticity_error() > 1e-10 {
        return Err(DynamicsError::InvalidState("initial density matrix is not Hermitian".into()));
    }
    let dressed = liou.config().and_then(|c| dressed_basis(c).ok());
    let basis = liou.basis();
    let frame = match (&dressed, basis) {
        (Some(_), Some(_)) => PopulationFrame::Dressed,
        _ => PopulationFrame::Bare,
    };
    let mut record = EvolutionRecord {
        times: t_grid.to_vec(),
        states: Vec::new(),
        populations: Vec::with_capacity(t_grid.len()),
        frame,
        basis,
    };
    let v0 = rho0.to_column_stacked();
    propagate_restricted(liou, v0.as_slice(), t_grid, &opts.ctrl, |t, v| {
        let trace: f64 = (0..dim).map(|i| v[i * dim + i].re).sum();
        let drift = (trace - 1.0).abs();
        if drift > TRACE_DRIFT_BOUND {
            return Err(DynamicsError::TraceDrift { t, drift });
        }
        let rho = DenseMatrix::from_column_stacked(dim, dim, v)?;
        let pops = match (&dressed, basis) {
            (Some(d), Some(b)) => d.populations_density(&b, &rho),
            _ => (0..dim).map(|i| rho[(i, i)].re).collect(),
        };
        record.populations.push(pops);
        if opts.keep_states {
            record.states.push(QuantumState::Density(rho));
        }
        Ok(())
    })?;
    Ok(record)
}
