use mpjc_core::dynamics::{build_liouvillian, evolve_master_with, MasterOptions};
use mpjc_core::linalg::DenseMatrix;
use mpjc_core::model::build_operators;
use mpjc_core::trajectories::{ensemble_average, run_trajectory, trajectory_seed, Trajectory};
use rayon::prelude::*;

use super::{initial_spec, initial_vector, slot_name};
use crate::config::{RunConfig, ScenarioKind};
use crate::error::CliError;
use crate::scenario::{NamedTable, Scenario};
use crate::table::{Cell, OutputTable};

/// Quantum-jump ensemble: mean populations with standard errors, and the
/// full jump record.
pub struct TrajectoryRun;

impl Scenario for TrajectoryRun {
    fn kind(&self) -> ScenarioKind {
        ScenarioKind::Trajectory
    }

    fn about(&self) -> &'static str {
        "Quantum-jump trajectories: populations and jump records"
    }

    fn stochastic(&self) -> bool {
        true
    }

    fn run(&self, cfg: &RunConfig) -> Result<Vec<NamedTable>, CliError> {
        let model = cfg.model_config()?;
        let ops = build_operators(&model).map_err(CliError::numerical)?;
        let psi0 = initial_vector(&ops, &model, &initial_spec(cfg))?;
        let grid = cfg.grids.time.as_ref().expect("validated").values();
        let ens = cfg.ensemble.as_ref().expect("validated");

        let trajs: Vec<Trajectory> = (0..ens.n_traj)
            .into_par_iter()
            .map(|i| run_trajectory(&ops, &model, &psi0, &grid, trajectory_seed(ens.base_seed, i)))
            .collect::<Result<_, _>>()
            .map_err(CliError::numerical)?;
        let avg = ensemble_average(&trajs).map_err(CliError::numerical)?;
        let master = if ens.compare_master {
            let liou = build_liouvillian(&ops, &model).map_err(CliError::numerical)?;
            let opts = MasterOptions {
                keep_states: false,
                ..Default::default()
            };
            Some(evolve_master_with(&liou, &DenseMatrix::outer(&psi0), &grid, &opts).map_err(CliError::numerical)?)
        } else {
            None
        };

        let frame = avg.mean.frame;
        let basis = ops.basis;
        let mut tracked = Vec::new();
        for k in 0..=(model.n as usize).min(basis.trunc_a) {
            for l in 0..=(model.m as usize).min(basis.trunc_b) {
                for slot in 0..2 {
                    let flat = slot * basis.sector_dim() + k * basis.levels_b() + l;
                    tracked.push((format!("{k}_{l}_{}", slot_name(frame, slot)), flat));
                }
            }
        }
        let mut header = vec!["t".to_string()];
        for (name, _) in &tracked {
            header.push(format!("p_{name}"));
            header.push(format!("se_{name}"));
            if master.is_some() {
                header.push(format!("master_{name}"));
            }
        }
        let mut pops = OutputTable::new(header)?;
        for (ti, &t) in grid.iter().enumerate() {
            let mut row: Vec<Cell> = vec![t.into()];
            for (_, flat) in &tracked {
                row.push(avg.mean.populations[ti][*flat].into());
                row.push(avg.std_error[ti][*flat].into());
                if let Some(me) = &master {
                    row.push(me.populations[ti][*flat].into());
                }
            }
            pops.push_row(row)?;
        }
        pops.add_metadata("n_traj", ens.n_traj.to_string());

        let mut jumps = OutputTable::new([
            "trajectory",
            "seed",
            "time",
            "channel",
            "pre_jump_norm",
            "source_k",
            "source_l",
        ])?;
        for (i, traj) in trajs.iter().enumerate() {
            for j in &traj.jumps {
                jumps.push_row(vec![
                    Cell::Int(i as i64),
                    Cell::Text(traj.seed.to_string()),
                    j.time.into(),
                    Cell::Text(j.channel.name().into()),
                    j.pre_jump_norm.into(),
                    Cell::Int(j.source_sector.0 as i64),
                    Cell::Int(j.source_sector.1 as i64),
                ])?;
            }
        }
        Ok(vec![
            NamedTable::new("trajectory_populations", pops),
            NamedTable::new("trajectory_jumps", jumps),
        ])
    }
}
