//! Numerical substrate: complex dense vectors and matrices, compressed-row
//! sparse operators, an adaptive Dormand–Prince integrator, a sparse LU
//! solver and a small Hermitian eigenvalue routine for diagnostics.
//!
//! Nothing in here knows about the physics layered on top.

pub mod dense;
pub mod eigen;
pub mod lu;
pub mod ode;
pub mod sparse;

pub use num_complex::Complex64 as C64;

pub use dense::{DenseMatrix, DenseVector};
pub use eigen::{hermitian_eigenvalues, trace_distance};
pub use lu::{minimum_degree_ordering, solve_sparse, SparseLu};
pub use ode::{integrate_ode, DormandPrince, OdeControl};
pub use sparse::{kron, matvec, SparseOperator};

use thiserror::Error;

/// Magnitude at or below which sparse entries are dropped after arithmetic.
pub const ZERO_THRESHOLD: f64 = 1e-14;

/// Largest row or column count any operator may have.
pub const MAX_DIM: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("operator of shape {rows}x{cols} exceeds the maximum dimension {max}; reduce the Fock truncation")]
    DimensionOverflow { rows: usize, cols: usize, max: usize },
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} operator")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("integrator step size underflow at t = {t} (h = {h:e}); the problem is too stiff for the requested tolerances")]
    StepUnderflow { t: f64, h: f64 },
    #[error("integrator exceeded {steps} steps before reaching t = {t}")]
    TooManySteps { t: f64, steps: usize },
    #[error("matrix is singular to working precision at elimination step {step} (pivot magnitude {pivot:e})")]
    Singular { step: usize, pivot: f64 },
    #[error("linear solve residual {residual:e} exceeds bound {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

pub(crate) fn check_finite(values: &[C64], context: &'static str) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(LinalgError::NonFinite(context))
    }
}
