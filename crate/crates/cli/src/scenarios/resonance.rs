use mpjc_core::model::{delta_a_for_sum, higher_order_detuning_sums, omega_eff, same_state_delta_a};

use crate::config::{RunConfig, ScenarioKind};
use crate::error::CliError;
use crate::scenario::{NamedTable, Scenario};
use crate::table::{Cell, OutputTable};

/// Resonant detunings, effective coupling and higher-order resonance positions.
pub struct Resonance;

impl Scenario for Resonance {
    fn kind(&self) -> ScenarioKind {
        ScenarioKind::Resonance
    }

    fn about(&self) -> &'static str {
        "Resonant detunings, effective Rabi frequency and higher-order resonances"
    }

    fn run(&self, cfg: &RunConfig) -> Result<Vec<NamedTable>, CliError> {
        let model = cfg.model_config()?;
        let (big_a, big_b) = match (model.big_delta_a, model.big_delta_b) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(CliError::Config("resonance needs big_delta_a and big_delta_b".into())),
        };
        let mut header = vec![
            "big_delta_a",
            "big_delta_b",
            "delta_a",
            "delta_b",
            "delta_sigma",
            "omega",
            "omega_eff",
            "same_state_delta_a",
        ];
        let mut row: Vec<Cell> = vec![
            big_a.into(),
            big_b.into(),
            model.delta_a.into(),
            model.delta_b.into(),
            model.delta_sigma.into(),
            model.omega_gen().into(),
            omega_eff(&model).map_err(CliError::numerical)?.into(),
            same_state_delta_a(model.n, model.m, model.delta_b)
                .map_err(CliError::numerical)?
                .into(),
        ];
        header.extend(["mu2_delta_a_plus", "mu2_delta_a_minus", "mu3_delta_a_plus", "mu3_delta_a_minus"]);
        for mu in [2, 3] {
            let (sp, sm) = higher_order_detuning_sums(big_a, big_b, model.omega_l, mu).map_err(CliError::numerical)?;
            for s in [sp, sm] {
                row.push(
                    delta_a_for_sum(model.n, model.m, s, model.delta_b)
                        .map_err(CliError::numerical)?
                        .into(),
                );
            }
        }
        let mut table = OutputTable::new(header)?;
        table.push_row(row)?;
        Ok(vec![NamedTable::new("resonance", table)])
    }
}
