//! Built-in scenarios, one per subcommand.

mod g2tau;
mod rabi;
mod resonance;
mod sweep;
mod trajectory;

pub use g2tau::G2Tau;
pub use rabi::Rabi;
pub use resonance::Resonance;
pub use sweep::{sweep_point, Sweep, SweepPoint};
pub use trajectory::TrajectoryRun;

use mpjc_core::dynamics::PopulationFrame;
use mpjc_core::linalg::DenseVector;
use mpjc_core::model::{dressed_basis, ModelConfig, OperatorSet, TlsLabel};

use crate::config::{InitialState, RunConfig};
use crate::error::CliError;

pub(crate) fn initial_vector(ops: &OperatorSet, cfg: &ModelConfig, spec: &InitialState) -> Result<DenseVector, CliError> {
    let label = TlsLabel::from(spec.tls);
    let v = if label.is_dressed() {
        dressed_basis(cfg)
            .map_err(|e| CliError::Config(format!("initial state: {e}")))?
            .product_state(&ops.basis, spec.k, spec.l, label)
    } else {
        ops.basis
            .index(spec.k, spec.l, label)
            .map(|i| DenseVector::basis(ops.dim(), i))
    };
    v.ok_or_else(|| CliError::Config("initial state lies outside the truncated space".into()))
}

pub(crate) fn initial_spec(cfg: &RunConfig) -> InitialState {
    cfg.initial_state.clone().unwrap_or_default()
}

/// Column suffix for the TLS slot `s` in a population frame.
pub(crate) fn slot_name(frame: PopulationFrame, slot: usize) -> &'static str {
    match (frame, slot) {
        (PopulationFrame::Dressed, 0) => "plus",
        (PopulationFrame::Dressed, _) => "minus",
        (PopulationFrame::Bare, 0) => "g",
        (PopulationFrame::Bare, _) => "e",
    }
}
