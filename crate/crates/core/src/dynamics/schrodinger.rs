use crate::linalg::{DenseVector, DormandPrince, OdeControl, C64};
use crate::model::{dressed_basis, DressedBasis, OperatorSet};

use super::state::{EvolutionRecord, PopulationFrame, QuantumState};
use super::{DynamicsError, Result};

/// Norm drift above which a unitary run is rejected.
pub const NORM_DRIFT_BOUND: f64 = 1e-5;

pub(crate) fn default_unitary_control() -> OdeControl {
    OdeControl::with_tolerances(1e-11, 1e-13)
}

/// Solves `i d|psi>/dt = H_int |psi>` and samples dressed-basis populations.
pub fn evolve_schrodinger(ops: &OperatorSet, psi0: &DenseVector, t_grid: &[f64]) -> Result<EvolutionRecord> {
    evolve_schrodinger_with(ops, psi0, t_grid, &default_unitary_control())
}

pub(crate) fn population_frame(ops: &OperatorSet) -> (PopulationFrame, Option<DressedBasis>) {
    match dressed_basis(&ops.cfg) {
        Ok(d) => (PopulationFrame::Dressed, Some(d)),
        Err(_) => (PopulationFrame::Bare, None),
    }
}

pub fn evolve_schrodinger_with(
    ops: &OperatorSet,
    psi0: &DenseVector,
    t_grid: &[f64],
    ctrl: &OdeControl,
) -> Result<EvolutionRecord> {
    if psi0.dim() != ops.dim() {
        return Err(DynamicsError::InvalidState(format!(
            "initial state has dimension {}, expected {}",
            psi0.dim(),
            ops.dim()
        )));
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(DynamicsError::InvalidState(format!(
            "initial state norm {} is not 1",
            psi0.norm()
        )));
    }
    crate::linalg::ode::validate_grid(t_grid)?;
    let (frame, dressed) = population_frame(ops);
    let basis = ops.basis;
    let h = &ops.h_int;
    let rhs = |_t: f64, y: &[C64], dy: &mut [C64]| {
        h.matvec_into(y, dy);
        for d in dy.iter_mut() {
            *d = C64::new(d.im, -d.re);
        }
    };
    let mut stepper = DormandPrince::new(rhs, t_grid[0], psi0.as_slice(), *ctrl)?;

    let mut record = EvolutionRecord {
        times: t_grid.to_vec(),
        states: Vec::with_capacity(t_grid.len()),
        populations: Vec::with_capacity(t_grid.len()),
        frame,
        basis: Some(basis),
    };
    for &t in t_grid {
        while stepper.t() < t {
            stepper.step(t)?;
        }
        let y = stepper.y();
        let drift = (y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() - 1.0).abs();
        if drift > NORM_DRIFT_BOUND {
            return Err(DynamicsError::NormDrift { t, drift });
        }
        let pops = match &dressed {
            Some(d) => d.populations_pure(&basis, y),
            None => y.iter().map(|z| z.norm_sqr()).collect(),
        };
        record.populations.push(pops);
        record.states.push(QuantumState::Pure(DenseVector::from_vec(y.to_vec())));
    }
    Ok(record)
}
