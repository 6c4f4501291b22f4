//! Monte-Carlo wave-function unraveling of the master equation.

mod ensemble;
mod mcwf;

pub use ensemble::{bundle_statistic, ensemble_average, BundleStatistic, EnsembleAverage};
pub use mcwf::{
    run_trajectory, run_trajectory_with, trajectory_seed, JumpChannel, JumpEvent, Trajectory,
    TrajectoryOptions,
};

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::linalg::LinalgError;
use crate::model::ModelError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrajectoryError {
    #[error("invalid trajectory input: {0}")]
    InvalidInput(String),
    #[error("jump time bracketing failed near t = {t} after {iterations} bisection steps (norm gap {gap:e})")]
    Bracketing { t: f64, iterations: usize, gap: f64 },
    #[error("no jump channel carries weight at t = {0}")]
    NoChannel(f64),
    #[error("ensemble is empty")]
    EmptyEnsemble,
    #[error("trajectories use different time grids")]
    GridMismatch,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

pub type Result<T> = std::result::Result<T, TrajectoryError>;
