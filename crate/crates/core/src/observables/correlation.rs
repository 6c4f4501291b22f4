use crate::dynamics::{regression_correlator, Liouvillian, SteadyState};
use crate::linalg::{DenseMatrix, SparseOperator, C64};
use crate::model::OperatorSet;

use super::{ObservablesError, Result};

const IMAG_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrelationKind {
    EqualTimeKl,
    DelayedPair,
    DelayedBundle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationCurve {
    pub abscissa: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: CorrelationKind,
    pub labels: (usize, usize),
    /// Bundle window; `None` for pair correlations.
    pub tau_min: Option<f64>,
    /// Rows inside the ill-defined window `tau < tau_min`.
    pub below_tau_min: Vec<bool>,
}

fn expect(op: &SparseOperator, rho: &DenseMatrix) -> C64 {
    op.iter().map(|(i, j, v)| v * rho[(j, i)]).sum()
}

fn real_part(z: C64, what: &str) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * z.re.abs().max(1.0) {
        return Err(ObservablesError::ImaginaryResidue(z.im));
    }
    if !z.re.is_finite() {
        return Err(ObservablesError::UndefinedCorrelation(format!("{what} is not finite")));
    }
    Ok(z.re)
}

/// `(<a†a>, <b†b>)`
pub fn mean_photon_numbers(ops: &OperatorSet, rho: &DenseMatrix) -> Result<(f64, f64)> {
    check_dim(ops, rho)?;
    Ok((
        real_part(expect(&ops.num_a, rho), "<a†a>")?,
        real_part(expect(&ops.num_b, rho), "<b†b>")?,
    ))
}

fn check_dim(ops: &OperatorSet, rho: &DenseMatrix) -> Result<()> {
    if rho.rows() != ops.dim() || rho.cols() != ops.dim() {
        return Err(ObservablesError::InvalidArgument(format!(
            "density matrix is {}x{}, operator dimension is {}",
            rho.rows(),
            rho.cols(),
            ops.dim()
        )));
    }
    Ok(())
}

/// `Tr(X rho X†)`
fn sandwich_trace(x: &SparseOperator, rho: &DenseMatrix) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for r in 0..x.rows() {
        let row: Vec<(usize, C64)> = x.row(r).collect();
        for &(p, xp) in &row {
            for &(q, xq) in &row {
                acc += xp * rho[(p, q)] * xq.conj();
            }
        }
    }
    acc
}

/// `Tr(a†ᵏ b†ˡ bˡ aᵏ rho) / (<a†a>ᵏ <b†b>ˡ)`
pub fn g_equal_time(ops: &OperatorSet, rho: &DenseMatrix, k: usize, l: usize) -> Result<f64> {
    check_dim(ops, rho)?;
    let (na, nb) = mean_photon_numbers(ops, rho)?;
    if (k > 0 && na <= 0.0) || (l > 0 && nb <= 0.0) {
        return Err(ObservablesError::UndefinedCorrelation(format!(
            "mean photon numbers ({na:e}, {nb:e}) vanish"
        )));
    }
    let x = ops.mode_product(k, l)?;
    let num = real_part(sandwich_trace(&x, rho), "numerator")?;
    let den = na.powi(k as i32) * nb.powi(l as i32);
    if !(den > 0.0) {
        return Err(ObservablesError::UndefinedCorrelation(format!("denominator {den:e}")));
    }
    Ok(num / den)
}

/// Bundle window `sum_{k<=N} 1/(k·kappa_a) + sum_{l<=M} 1/(l·kappa_b)`.
pub fn tau_min(n: usize, m: usize, kappa_a: f64, kappa_b: f64) -> Result<f64> {
    if n + m == 0 {
        return Err(ObservablesError::InvalidArgument("N + M must be positive".into()));
    }
    if (n > 0 && !(kappa_a > 0.0)) || (m > 0 && !(kappa_b > 0.0)) {
        return Err(ObservablesError::InvalidArgument("decay rates must be positive".into()));
    }
    let sa: f64 = (1..=n).map(|k| 1.0 / (k as f64 * kappa_a)).sum();
    let sb: f64 = (1..=m).map(|l| 1.0 / (l as f64 * kappa_b)).sum();
    Ok(sa + sb)
}

fn check_delay_grid(tau_grid: &[f64]) -> Result<()> {
    if tau_grid.is_empty() || tau_grid[0] < 0.0 || tau_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ObservablesError::InvalidArgument(
            "delay grid must be non-negative and strictly increasing".into(),
        ));
    }
    Ok(())
}

fn mode_op(ops: &OperatorSet, mode: Mode) -> (&SparseOperator, &SparseOperator) {
    match mode {
        Mode::A => (&ops.a, &ops.num_a),
        Mode::B => (&ops.b, &ops.num_b),
    }
}

/// `<i†(0) j†(tau) j(tau) i(0)> / (<i†i><j†j>)`
pub fn g2_delayed(
    ops: &OperatorSet,
    liou: &Liouvillian,
    rho_ss: &SteadyState,
    i: Mode,
    j: Mode,
    tau_grid: &[f64],
) -> Result<CorrelationCurve> {
    check_dim(ops, &rho_ss.rho)?;
    check_delay_grid(tau_grid)?;
    let (ci, ni) = mode_op(ops, i);
    let (_, nj) = mode_op(ops, j);
    let den = real_part(expect(ni, &rho_ss.rho), "<i†i>")? * real_part(expect(nj, &rho_ss.rho), "<j†j>")?;
    if !(den > 0.0) {
        return Err(ObservablesError::UndefinedCorrelation(format!("denominator {den:e}")));
    }
    let raw = regression_correlator(liou, rho_ss, ci, nj, tau_grid)?;
    let labels = (mode_index(i), mode_index(j));
    Ok(CorrelationCurve {
        abscissa: tau_grid.to_vec(),
        values: raw.into_iter().map(|v| v / den).collect(),
        kind: CorrelationKind::DelayedPair,
        labels,
        tau_min: None,
        below_tau_min: vec![false; tau_grid.len()],
    })
}

fn mode_index(m: Mode) -> usize {
    match m {
        Mode::A => 0,
        Mode::B => 1,
    }
}

/// Delayed correlation of the `aᴺbᴹ` bundle, normalized by `G(0)²`.
pub fn g2_bundle(
    ops: &OperatorSet,
    liou: &Liouvillian,
    rho_ss: &SteadyState,
    n: usize,
    m: usize,
    tau_grid: &[f64],
) -> Result<CorrelationCurve> {
    check_dim(ops, &rho_ss.rho)?;
    check_delay_grid(tau_grid)?;
    let cfg = liou
        .config()
        .ok_or_else(|| ObservablesError::InvalidArgument("Liouvillian carries no model configuration".into()))?;
    let window = tau_min(n, m, cfg.kappa_a, cfg.kappa_b)?;
    let c = ops.mode_product(n, m)?;
    let measure = c.adjoint().mul(&c)?;
    let g0 = real_part(expect(&measure, &rho_ss.rho), "G(0)")?;
    if !(g0 > 0.0) {
        return Err(ObservablesError::UndefinedCorrelation(format!("G(0) = {g0:e}")));
    }
    let raw = regression_correlator(liou, rho_ss, &c, &measure, tau_grid)?;
    Ok(CorrelationCurve {
        abscissa: tau_grid.to_vec(),
        values: raw.into_iter().map(|v| v / (g0 * g0)).collect(),
        kind: CorrelationKind::DelayedBundle,
        labels: (n, m),
        tau_min: Some(window),
        below_tau_min: tau_grid.iter().map(|&t| t < window).collect(),
    })
}
