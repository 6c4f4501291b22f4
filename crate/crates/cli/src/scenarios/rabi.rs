use mpjc_core::dynamics::evolve_schrodinger;
use mpjc_core::model::{build_operators, omega_eff, TlsLabel};

use super::{initial_spec, initial_vector};
use crate::config::{RunConfig, ScenarioKind};
use crate::error::CliError;
use crate::scenario::{NamedTable, Scenario};
use crate::table::OutputTable;

/// Closed-system populations of `|0,0,+>` and `|n,m,->` next to `sin²(Ω_eff t)`.
pub struct Rabi;

impl Scenario for Rabi {
    fn kind(&self) -> ScenarioKind {
        ScenarioKind::Rabi
    }

    fn about(&self) -> &'static str {
        "Unitary super-Rabi oscillation between |0,0,+> and |n,m,->"
    }

    fn run(&self, cfg: &RunConfig) -> Result<Vec<NamedTable>, CliError> {
        let model = cfg.model_config()?;
        let ops = build_operators(&model).map_err(CliError::numerical)?;
        let psi0 = initial_vector(&ops, &model, &initial_spec(cfg))?;
        let grid = cfg.grids.time.as_ref().expect("validated").values();
        let record = evolve_schrodinger(&ops, &psi0, &grid).map_err(CliError::numerical)?;
        let (n, m) = (model.n as usize, model.m as usize);
        let missing = || CliError::Numerical("dressed populations are unavailable for this drive".into());
        let p_start = record.population(0, 0, TlsLabel::Plus).ok_or_else(missing)?;
        let p_target = record.population(n, m, TlsLabel::Minus).ok_or_else(missing)?;
        let w = omega_eff(&model).map_err(CliError::numerical)?;

        let mut table = OutputTable::new(["t", "p_0_0_plus", &format!("p_{n}_{m}_minus"), "analytic"])?;
        for (i, &t) in grid.iter().enumerate() {
            let s = (w * t).sin();
            table.push_row(vec![t.into(), p_start[i].into(), p_target[i].into(), (s * s).into()])?;
        }
        table.add_metadata("omega_eff", format!("{w:.16e}"));
        Ok(vec![NamedTable::new("rabi", table)])
    }
}
