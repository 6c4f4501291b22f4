//! Unitary and Lindblad propagation, steady states and two-time correlators.

pub mod liouvillian;
pub mod regression;
pub mod schrodinger;
pub mod state;
pub mod steady;

pub use liouvillian::{build_liouvillian, Blocks, Liouvillian};
pub use regression::{regression_correlator, regression_correlator_with};
pub use schrodinger::{evolve_schrodinger, evolve_schrodinger_with};
pub use state::{
    truncation_check, EvolutionRecord, PopulationFrame, QuantumState, TailReport, TailStatus,
    TAIL_ERROR, TAIL_WARN,
};
pub use steady::{
    evolve_master, evolve_master_with, solve_steady_state, solve_steady_state_with, MasterOptions,
    SteadyState, SteadyStateOptions, STEADY_RESIDUAL_BOUND,
};

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::model::ModelError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("norm drifted by {drift:e} at t = {t}; tighten the integrator tolerances")]
    NormDrift { t: f64, drift: f64 },
    #[error("trace drifted by {drift:e} at t = {t}; tighten the integrator tolerances")]
    TraceDrift { t: f64, drift: f64 },
    #[error("steady state residual {residual:e} exceeds {bound:e} (bordered block of size {block})")]
    SteadyStateResidual { residual: f64, bound: f64, block: usize },
    #[error("steady state is not unique: {0}")]
    DegenerateSteadyState(String),
    #[error("collapsed state has vanishing weight {0:e}")]
    VanishingCollapse(f64),
    #[error("correlation has imaginary residue {residue:e} above {bound:e}")]
    ImaginaryResidue { residue: f64, bound: f64 },
    #[error("population {tail:e} in the highest Fock level of mode {mode} exceeds {bound:e}")]
    TruncationTail { mode: char, tail: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, DynamicsError>;
