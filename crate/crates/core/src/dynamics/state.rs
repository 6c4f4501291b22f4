use crate::linalg::{DenseMatrix, DenseVector};
use crate::model::{Basis, ModelConfig, TlsLabel};

use super::{DynamicsError, Result};

pub const TAIL_WARN: f64 = 1e-5;
pub const TAIL_ERROR: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure(DenseVector),
    Density(DenseMatrix),
}

impl QuantumState {
    pub fn dim(&self) -> usize {
        match self {
            QuantumState::Pure(v) => v.dim(),
            QuantumState::Density(m) => m.rows(),
        }
    }

    /// `<i|state|i>`
    pub fn diagonal(&self) -> Vec<f64> {
        match self {
            QuantumState::Pure(v) => v.iter().map(|z| z.norm_sqr()).collect(),
            QuantumState::Density(m) => (0..m.rows()).map(|i| m[(i, i)].re).collect(),
        }
    }

    /// Squared norm of a pure state or trace of a density matrix.
    pub fn weight(&self) -> f64 {
        match self {
            QuantumState::Pure(v) => v.norm_sqr(),
            QuantumState::Density(m) => m.trace().re,
        }
    }

    pub fn to_density(&self) -> DenseMatrix {
        match self {
            QuantumState::Pure(v) => DenseMatrix::outer(v),
            QuantumState::Density(m) => m.clone(),
        }
    }
}

/// Basis in which [`EvolutionRecord::populations`] is expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PopulationFrame {
    /// `|k,l,±>`; slot 0 holds `+`.
    Dressed,
    /// `|k,l,g/e>`, used when the dressing is degenerate or no model is attached.
    Bare,
}

#[derive(Clone, Debug)]
pub struct EvolutionRecord {
    pub times: Vec<f64>,
    /// Sampled states; empty when the caller asked not to keep them.
    pub states: Vec<QuantumState>,
    /// `populations[t][flat]` in `frame`.
    pub populations: Vec<Vec<f64>>,
    pub frame: PopulationFrame,
    pub basis: Option<Basis>,
}

impl EvolutionRecord {
    /// Time series of the population of `|k,l,s>`.
    pub fn population(&self, k: usize, l: usize, s: TlsLabel) -> Option<Vec<f64>> {
        let basis = self.basis?;
        match (self.frame, s.is_dressed()) {
            (PopulationFrame::Dressed, true) | (PopulationFrame::Bare, false) => {}
            _ => return None,
        }
        let i = basis.index(k, l, s)?;
        Some(self.populations.iter().map(|p| p[i]).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailStatus {
    Ok,
    Warning,
}

/// Population in the highest Fock level of each mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailReport {
    pub tail_a: f64,
    pub tail_b: f64,
    pub status: TailStatus,
}

pub fn truncation_check(state: &QuantumState, cfg: &ModelConfig) -> Result<TailReport> {
    let basis = Basis::new(cfg.trunc_a, cfg.trunc_b);
    if state.dim() != basis.dim() {
        return Err(DynamicsError::InvalidState(format!(
            "state dimension {} does not match the configured basis dimension {}",
            state.dim(),
            basis.dim()
        )));
    }
    let diag = state.diagonal();
    let mut tail_a = 0.0;
    let mut tail_b = 0.0;
    for lbl in basis.labels() {
        if lbl.k == cfg.trunc_a {
            tail_a += diag[lbl.flat];
        }
        if lbl.l == cfg.trunc_b {
            tail_b += diag[lbl.flat];
        }
    }
    for (mode, tail) in [('a', tail_a), ('b', tail_b)] {
        if tail > TAIL_ERROR {
            return Err(DynamicsError::TruncationTail {
                mode,
                tail,
                bound: TAIL_ERROR,
            });
        }
    }
    let status = if tail_a.max(tail_b) > TAIL_WARN {
        TailStatus::Warning
    } else {
        TailStatus::Ok
    };
    Ok(TailReport {
        tail_a,
        tail_b,
        status,
    })
}
