use std::collections::BTreeMap;

use crate::config::{RunConfig, ScenarioKind};
use crate::error::CliError;
use crate::scenarios;
use crate::table::OutputTable;

/// One output file produced by a scenario, written as `<stem>.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedTable {
    pub stem: String,
    pub table: OutputTable,
}

impl NamedTable {
    pub fn new(stem: impl Into<String>, table: OutputTable) -> Self {
        Self {
            stem: stem.into(),
            table,
        }
    }
}

pub trait Scenario: Send + Sync {
    fn kind(&self) -> ScenarioKind;

    fn about(&self) -> &'static str;

    /// Whether the output depends on `ensemble.base_seed`.
    fn stochastic(&self) -> bool {
        false
    }

    fn run(&self, cfg: &RunConfig) -> Result<Vec<NamedTable>, CliError>;

    fn name(&self) -> &'static str {
        self.kind().name()
    }
}

/// Scenarios keyed by subcommand name.
pub struct ScenarioRegistry {
    entries: BTreeMap<&'static str, Box<dyn Scenario>>,
}

impl ScenarioRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(scenarios::Resonance));
        r.register(Box::new(scenarios::Rabi));
        r.register(Box::new(scenarios::Sweep));
        r.register(Box::new(scenarios::G2Tau));
        r.register(Box::new(scenarios::TrajectoryRun));
        r
    }

    /// Replaces any scenario already registered under the same name.
    pub fn register(&mut self, scenario: Box<dyn Scenario>) {
        self.entries.insert(scenario.name(), scenario);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Scenario> {
        self.entries.get(name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Scenario> {
        self.entries.values().map(|s| s.as_ref())
    }
}

impl Default for ScenarioRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}
