//! Photon-number distributions and intensity correlation functions.

mod correlation;
mod distribution;
mod peaks;

pub use correlation::{
    g2_bundle, g2_delayed, g_equal_time, mean_photon_numbers, tau_min, CorrelationCurve,
    CorrelationKind, Mode,
};
pub use distribution::{joint_distribution, JointDistribution, CLAMP_FLOOR};
pub use peaks::{extremum_near, local_maxima, local_minima, Extremum};

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::linalg::LinalgError;
use crate::model::ModelError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObservablesError {
    #[error("correlation is undefined: {0}")]
    UndefinedCorrelation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("correlation has imaginary residue {0:e}")]
    ImaginaryResidue(f64),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, ObservablesError>;
