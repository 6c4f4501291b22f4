use crate::linalg::{DenseMatrix, OdeControl, SparseOperator, C64};

use super::liouvillian::Liouvillian;
use super::steady::{propagate_restricted, SteadyState};
use super::{DynamicsError, Result};

/// Imaginary part tolerated in a correlator, relative to the collapsed weight.
pub const IMAGINARY_RESIDUE_BOUND: f64 = 1e-10;

pub(crate) fn default_regression_control() -> OdeControl {
    OdeControl::with_tolerances(1e-9, 1e-12)
}

/// `C rho C^dagger`
pub(crate) fn sandwich(c: &SparseOperator, rho: &DenseMatrix) -> DenseMatrix {
    let n = rho.rows();
    let mut left = DenseMatrix::zeros(n, n);
    for (r, k, v) in c.iter() {
        for j in 0..n {
            left[(r, j)] += v * rho[(k, j)];
        }
    }
    let mut out = DenseMatrix::zeros(n, n);
    for (r, k, v) in c.iter() {
        let vc = v.conj();
        for i in 0..n {
            out[(i, r)] += left[(i, k)] * vc;
        }
    }
    out
}

/// `Tr(M X)` for a column-stacked `X`.
pub(crate) fn trace_product(m: &SparseOperator, x: &[C64], dim: usize) -> C64 {
    m.iter().map(|(i, j, v)| v * x[i * dim + j]).sum()
}

pub fn regression_correlator(
    liou: &Liouvillian,
    rho_ss: &SteadyState,
    collapse_left: &SparseOperator,
    measure: &SparseOperator,
    tau_grid: &[f64],
) -> Result<Vec<f64>> {
    regression_correlator_with(liou, rho_ss, collapse_left, measure, tau_grid, &default_regression_control())
}

/// `Tr[M e^{L tau}(C rho_ss C^dagger)]` on a non-negative increasing grid.
///
/// The collapsed state is normalized before propagation and the weight
/// restored afterwards.
pub fn regression_correlator_with(
    liou: &Liouvillian,
    rho_ss: &SteadyState,
    collapse_left: &SparseOperator,
    measure: &SparseOperator,
    tau_grid: &[f64],
    ctrl: &OdeControl,
) -> Result<Vec<f64>> {
    let dim = liou.dim();
    liou.check_shape(&rho_ss.rho)?;
    for op in [collapse_left, measure] {
        if op.rows() != dim || op.cols() != dim {
            return Err(DynamicsError::InvalidState("correlator operator shape mismatch".into()));
        }
    }
    if tau_grid.first().is_some_and(|&t| t < 0.0) {
        return Err(DynamicsError::InvalidState("delay grid must be non-negative".into()));
    }
    crate::linalg::ode::validate_grid(tau_grid)?;
    let prepend = tau_grid[0] > 0.0;
    let mut grid = Vec::with_capacity(tau_grid.len() + 1);
    if prepend {
        grid.push(0.0);
    }
    grid.extend_from_slice(tau_grid);

    let collapsed = sandwich(collapse_left, &rho_ss.rho);
    let weight = collapsed.trace().re;
    if !(weight > 1e-300) {
        return Err(DynamicsError::VanishingCollapse(weight));
    }
    let v0 = collapsed.scaled(C64::new(1.0 / weight, 0.0)).to_column_stacked();
    let mut values = Vec::with_capacity(grid.len());
    let mut residue: f64 = 0.0;
    let mut scale: f64 = 0.0;
    propagate_restricted(liou, v0.as_slice(), &grid, ctrl, |_, v| {
        let z = trace_product(measure, v, dim);
        residue = residue.max(z.im.abs());
        scale = scale.max(z.re.abs());
        values.push(z.re * weight);
        Ok(())
    })?;
    let bound = IMAGINARY_RESIDUE_BOUND * scale.max(1.0);
    if residue > bound {
        return Err(DynamicsError::ImaginaryResidue { residue, bound });
    }
    if prepend {
        values.remove(0);
    }
    Ok(values)
}
