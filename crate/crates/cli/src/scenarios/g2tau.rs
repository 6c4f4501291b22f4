use mpjc_core::dynamics::{build_liouvillian, solve_steady_state};
use mpjc_core::model::build_operators;
use mpjc_core::observables::{g2_bundle, g2_delayed, Mode};

use crate::config::{RunConfig, ScenarioKind};
use crate::error::CliError;
use crate::scenario::{NamedTable, Scenario};
use crate::table::{Cell, OutputTable};

/// Delayed pair and bundle correlations in the steady state.
pub struct G2Tau;

impl Scenario for G2Tau {
    fn kind(&self) -> ScenarioKind {
        ScenarioKind::G2tau
    }

    fn about(&self) -> &'static str {
        "Time-delayed second-order correlations of single photons and bundles"
    }

    fn run(&self, cfg: &RunConfig) -> Result<Vec<NamedTable>, CliError> {
        let model = cfg.model_config()?;
        let ops = build_operators(&model).map_err(CliError::numerical)?;
        let liou = build_liouvillian(&ops, &model).map_err(CliError::numerical)?;
        let ss = solve_steady_state(&liou).map_err(CliError::numerical)?;
        let tau = cfg.grids.delay.as_ref().expect("validated").values();
        let pair = |i, j| g2_delayed(&ops, &liou, &ss, i, j, &tau).map_err(CliError::numerical);
        let aa = pair(Mode::A, Mode::A)?;
        let bb = pair(Mode::B, Mode::B)?;
        let ab = pair(Mode::A, Mode::B)?;
        let bundle = g2_bundle(&ops, &liou, &ss, model.n as usize, model.m as usize, &tau).map_err(CliError::numerical)?;

        let mut table = OutputTable::new(["tau", "g2_aa", "g2_bb", "g2_ab", "g2_bundle", "below_tau_min"])?;
        for (i, &t) in tau.iter().enumerate() {
            table.push_row(vec![
                t.into(),
                aa.values[i].into(),
                bb.values[i].into(),
                ab.values[i].into(),
                bundle.values[i].into(),
                Cell::Int(bundle.below_tau_min[i] as i64),
            ])?;
        }
        if let Some(w) = bundle.tau_min {
            table.add_metadata("tau_min", format!("{w:.16e}"));
        }
        Ok(vec![NamedTable::new("g2tau", table)])
    }
}
