//! Physics layer for the driven nondegenerate multiphoton Jaynes–Cummings
//! model: parameters, basis indexing, operators, dressed states, resonance
//! conditions and the effective two-level description.

pub mod basis;
pub mod config;
pub mod dressed;
pub mod effective;
pub mod operators;
pub mod resonance;

pub use basis::{Basis, BasisIndex, TlsLabel};
pub use config::{default_truncation, ModelConfig};
pub use dressed::{dressed_basis, DressedBasis};
pub use effective::{effective_two_level, omega_eff};
pub use operators::{build_operators, OperatorSet};
pub use resonance::{
    delta_a_for_sum, higher_order_detuning_sums, resonance_detunings, same_state_delta_a, Branch,
};

use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid model configuration: {0}")]
    InvalidConfig(String),
    #[error("mode {mode} truncation {trunc} is below the minimum {min} required for n = {photons}")]
    TruncationTooSmall {
        mode: char,
        trunc: usize,
        min: usize,
        photons: u32,
    },
    #[error("resonance condition is singular: big_delta_a + big_delta_b = 0")]
    SingularResonance,
    #[error("the {requested:?} resonance branch is unreachable for big_delta_a + big_delta_b = {sum}")]
    BranchUnreachable { requested: Branch, sum: f64 },
    #[error("higher-order resonance requires mu >= 2, got {0}")]
    InvalidOrder(u32),
    #[error("dressed basis is degenerate: delta_sigma = 0 and omega_l = 0")]
    DegenerateDressing,
    #[error("effective super-Rabi description has a pole (denominator {denominator:e})")]
    EffectivePole { denominator: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, ModelError>;

/// `sqrt(k! / (k - p)!)`, zero when `p > k`.
pub(crate) fn falling_sqrt(k: usize, p: usize) -> f64 {
    if p > k {
        return 0.0;
    }
    let mut prod = 1.0f64;
    for j in (k - p + 1)..=k {
        prod *= j as f64;
    }
    prod.sqrt()
}

pub(crate) fn factorial(p: u32) -> f64 {
    (1..=p).map(f64::from).product()
}
