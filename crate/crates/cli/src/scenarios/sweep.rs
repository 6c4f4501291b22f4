use mpjc_core::dynamics::{build_liouvillian, solve_steady_state};
use mpjc_core::model::{build_operators, ModelConfig};
use mpjc_core::observables::{g_equal_time, joint_distribution};
use rayon::prelude::*;

use crate::config::{linspace, RunConfig, ScenarioKind};
use crate::error::CliError;
use crate::scenario::{NamedTable, Scenario};
use crate::table::{Cell, OutputTable};

/// Steady-state observables at one detuning.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub delta_a: f64,
    pub delta_sigma: f64,
    pub populations: Vec<f64>,
    pub correlations: Vec<f64>,
    pub residual: f64,
}

/// Steady state of `base` with `delta_a` replaced; `delta_sigma` follows
/// when `base` carries resonance detunings.
pub fn sweep_point(
    base: &ModelConfig,
    delta_a: f64,
    populations: &[[usize; 2]],
    correlations: &[[usize; 2]],
) -> Result<SweepPoint, String> {
    let cfg = base.clone().with_delta_a(delta_a);
    let ops = build_operators(&cfg).map_err(|e| e.to_string())?;
    let liou = build_liouvillian(&ops, &cfg).map_err(|e| e.to_string())?;
    let ss = solve_steady_state(&liou).map_err(|e| e.to_string())?;
    let dist = joint_distribution(&ss.rho, &ops.basis).map_err(|e| e.to_string())?;
    let pops = populations
        .iter()
        .map(|&[k, l]| dist.reported(k, l).ok_or_else(|| format!("P({k},{l}) outside truncation")))
        .collect::<Result<Vec<_>, _>>()?;
    let corrs = correlations
        .iter()
        .map(|&[k, l]| g_equal_time(&ops, &ss.rho, k, l).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepPoint {
        delta_a,
        delta_sigma: cfg.delta_sigma,
        populations: pops,
        correlations: corrs,
        residual: ss.residual,
    })
}

/// Steady-state photon statistics over a detuning grid.
pub struct Sweep;

impl Scenario for Sweep {
    fn kind(&self) -> ScenarioKind {
        ScenarioKind::Sweep
    }

    fn about(&self) -> &'static str {
        "Steady-state P(k,l) and g(k,l) versus delta_a"
    }

    fn run(&self, cfg: &RunConfig) -> Result<Vec<NamedTable>, CliError> {
        let model = cfg.model_config()?;
        let spec = cfg.sweep.as_ref().expect("validated");
        let (mut pops, mut corrs) = (cfg.observables.populations.clone(), cfg.observables.correlations.clone());
        if pops.is_empty() && corrs.is_empty() {
            let order = [model.n as usize, model.m as usize];
            pops.push(order);
            corrs.push(order);
        }
        let grid = linspace(spec.start, spec.stop, spec.points);
        let results: Vec<Result<SweepPoint, String>> = grid
            .par_iter()
            .map(|&x| sweep_point(&model, x, &pops, &corrs))
            .collect();

        let mut header = vec!["delta_a".to_string(), "delta_sigma".to_string()];
        header.extend(pops.iter().map(|[k, l]| format!("p_{k}_{l}")));
        header.extend(corrs.iter().map(|[k, l]| format!("g_{k}_{l}")));
        header.extend(["residual".to_string(), "error".to_string()]);
        let mut table = OutputTable::new(header)?;
        let width = pops.len() + corrs.len();
        let mut failures = 0;
        for (i, (x, r)) in grid.iter().zip(results).enumerate() {
            let row: Vec<Cell> = match r {
                Ok(p) => {
                    let mut row: Vec<Cell> = vec![p.delta_a.into(), p.delta_sigma.into()];
                    row.extend(p.populations.iter().chain(&p.correlations).map(|&v| Cell::Float(v)));
                    row.extend([p.residual.into(), Cell::Int(0)]);
                    row
                }
                Err(msg) => {
                    failures += 1;
                    table.add_metadata(format!("error_row_{i}"), msg);
                    let sigma = model.clone().with_delta_a(*x).delta_sigma;
                    let mut row: Vec<Cell> = vec![(*x).into(), sigma.into()];
                    row.extend(std::iter::repeat_n(Cell::Float(f64::NAN), width + 1));
                    row.push(Cell::Int(1));
                    row
                }
            };
            table.push_row(row)?;
        }
        table.add_metadata("failed_points", failures.to_string());
        Ok(vec![NamedTable::new("sweep", table)])
    }
}
