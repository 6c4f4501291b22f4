//! JSON run configuration.
//!
//! The key schema is published in `schema/run_config.schema.json`. Unknown keys
//! are rejected at every level.

use std::fs;
use std::path::{Path, PathBuf};

use mpjc_core::model::{default_truncation, Branch, ModelConfig, TlsLabel};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Resonance,
    Rabi,
    Sweep,
    G2tau,
    Trajectory,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Resonance => "resonance",
            ScenarioKind::Rabi => "rabi",
            ScenarioKind::Sweep => "sweep",
            ScenarioKind::G2tau => "g2tau",
            ScenarioKind::Trajectory => "trajectory",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchSpec {
    Plus,
    Minus,
}

impl From<BranchSpec> for Branch {
    fn from(b: BranchSpec) -> Self {
        match b {
            BranchSpec::Plus => Branch::PlusStart,
            BranchSpec::Minus => Branch::MinusStart,
        }
    }
}

/// Model parameters in units of a common rate. Detunings are given either as
/// `big_delta_a`, `big_delta_b` and `branch`, or explicitly as `delta_a`,
/// `delta_b` and `delta_sigma`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub n: u32,
    pub m: u32,
    pub g: f64,
    pub omega_l: f64,
    #[serde(default)]
    pub kappa_a: f64,
    #[serde(default)]
    pub kappa_b: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_delta_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub big_delta_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<BranchSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc_a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc_b: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    DeltaA,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delay: Option<GridSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub n_traj: usize,
    pub base_seed: u64,
    /// Also integrate the master equation and report its populations.
    #[serde(default)]
    pub compare_master: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TlsSpec {
    G,
    E,
    Plus,
    Minus,
}

impl From<TlsSpec> for TlsLabel {
    fn from(s: TlsSpec) -> Self {
        match s {
            TlsSpec::G => TlsLabel::Ground,
            TlsSpec::E => TlsLabel::Excited,
            TlsSpec::Plus => TlsLabel::Plus,
            TlsSpec::Minus => TlsLabel::Minus,
        }
    }
}

/// Product state `|k>_a |l>_b |tls>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    pub k: usize,
    pub l: usize,
    pub tls: TlsSpec,
}

impl Default for InitialState {
    fn default() -> Self {
        Self {
            k: 0,
            l: 0,
            tls: TlsSpec::Plus,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Observables {
    /// Joint photon-number probabilities `P_{k,l}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub populations: Vec<[usize; 2]>,
    /// Equal-time correlations `g^{(k,l)}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub correlations: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    pub model: ModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<InitialState>,
    #[serde(default)]
    pub observables: Observables,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (points - 1) as f64;
            (0..points)
                .map(|i| if i + 1 == points { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let cfg: RunConfig = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Pretty-printed JSON with a trailing newline.
pub fn emit_config(cfg: &RunConfig) -> String {
    let mut s = serde_json::to_string_pretty(cfg).expect("run config serializes");
    s.push('\n');
    s
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn check_grid(name: &str, start: f64, stop: f64, points: usize, allow_single: bool) -> Result<(), CliError> {
    if !start.is_finite() || !stop.is_finite() {
        return Err(config_err(format!("{name}: bounds must be finite")));
    }
    if points == 1 && allow_single {
        if start != stop {
            return Err(config_err(format!("{name}: a single point needs start == stop")));
        }
        return Ok(());
    }
    if points < 2 {
        return Err(config_err(format!("{name}.points must be at least 2")));
    }
    if stop <= start {
        return Err(config_err(format!("{name}: stop must exceed start")));
    }
    Ok(())
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let model = self.model_config()?;
        if let Some(s) = &self.sweep {
            check_grid("sweep", s.start, s.stop, s.points, true)?;
        }
        if let Some(t) = &self.grids.time {
            check_grid("grids.time", t.start, t.stop, t.points, false)?;
            if t.start < 0.0 {
                return Err(config_err("grids.time must start at or after 0"));
            }
        }
        if let Some(d) = &self.grids.delay {
            check_grid("grids.delay", d.start, d.stop, d.points, false)?;
            if d.start < 0.0 {
                return Err(config_err("grids.delay must be non-negative"));
            }
        }
        if let Some(e) = &self.ensemble {
            if e.n_traj == 0 {
                return Err(config_err("ensemble.n_traj must be at least 1"));
            }
        }
        let within = |[k, l]: [usize; 2]| k <= model.trunc_a && l <= model.trunc_b;
        for &order in &self.observables.populations {
            if !within(order) {
                return Err(config_err(format!("population {order:?} exceeds the truncation")));
            }
        }
        for &order in &self.observables.correlations {
            if !within(order) {
                return Err(config_err(format!("correlation order {order:?} exceeds the truncation")));
            }
            if order == [0, 0] {
                return Err(config_err("correlation order (0, 0) is trivial"));
            }
        }
        if let Some(s) = &self.initial_state {
            if s.k > model.trunc_a || s.l > model.trunc_b {
                return Err(config_err("initial state lies outside the truncated space"));
            }
        }
        let need = |what: bool, field: &str| {
            if what {
                Ok(())
            } else {
                Err(config_err(format!("scenario {} needs {field}", self.scenario.name())))
            }
        };
        match self.scenario {
            ScenarioKind::Resonance => need(self.model.big_delta_a.is_some(), "big_delta_a/big_delta_b/branch")?,
            ScenarioKind::Rabi => need(self.grids.time.is_some(), "grids.time")?,
            ScenarioKind::Sweep => need(self.sweep.is_some(), "sweep")?,
            ScenarioKind::G2tau => need(self.grids.delay.is_some(), "grids.delay")?,
            ScenarioKind::Trajectory => {
                need(self.grids.time.is_some(), "grids.time")?;
                need(self.ensemble.is_some(), "ensemble")?;
            }
        }
        Ok(())
    }

    /// Resolved model configuration with defaults applied and validated.
    pub fn model_config(&self) -> Result<ModelConfig, CliError> {
        let s = &self.model;
        let trunc_a = s.trunc_a.unwrap_or_else(|| default_truncation(s.n));
        let trunc_b = s.trunc_b.unwrap_or_else(|| default_truncation(s.m));
        let base = ModelConfig::new(s.n, s.m, s.g, s.omega_l)
            .with_decay(s.kappa_a, s.kappa_b, s.gamma)
            .with_truncation(trunc_a, trunc_b);
        let resonance = (s.big_delta_a, s.big_delta_b, s.branch);
        let explicit = (s.delta_a, s.delta_b, s.delta_sigma);
        let cfg = match (resonance, explicit) {
            ((Some(da), Some(db), Some(branch)), (None, None, None)) => base
                .at_resonance(da, db, branch.into())
                .map_err(|e| config_err(format!("model: {e}")))?,
            ((None, None, None), (Some(a), Some(b), Some(sigma))) => base.with_detunings(a, b, sigma),
            _ => {
                return Err(config_err(
                    "model: give either big_delta_a, big_delta_b and branch, or delta_a, delta_b and delta_sigma",
                ))
            }
        };
        cfg.validate().map_err(|e| config_err(format!("model: {e}")))?;
        Ok(cfg)
    }
}
