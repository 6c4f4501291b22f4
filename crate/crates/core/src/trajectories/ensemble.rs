use crate::dynamics::EvolutionRecord;

use super::mcwf::{JumpChannel, Trajectory};
use super::{Result, TrajectoryError};

#[derive(Clone, Debug)]
pub struct EnsembleAverage {
    /// Mean populations; `states` is left empty.
    pub mean: EvolutionRecord,
    /// `std_error[t][flat]` = sample standard deviation / sqrt(N).
    pub std_error: Vec<Vec<f64>>,
    pub n_traj: usize,
}

pub fn ensemble_average(trajs: &[Trajectory]) -> Result<EnsembleAverage> {
    let first = trajs.first().ok_or(TrajectoryError::EmptyEnsemble)?;
    if trajs
        .iter()
        .any(|t| t.times != first.times || t.frame != first.frame || t.basis != first.basis)
    {
        return Err(TrajectoryError::GridMismatch);
    }
    let n = trajs.len() as f64;
    let n_t = first.times.len();
    let width = first.populations.first().map_or(0, Vec::len);
    let mut mean = vec![vec![0.0; width]; n_t];
    let mut err = vec![vec![0.0; width]; n_t];
    for ti in 0..n_t {
        for s in 0..width {
            let m = trajs.iter().map(|t| t.populations[ti][s]).sum::<f64>() / n;
            mean[ti][s] = m;
            if trajs.len() > 1 {
                let var = trajs.iter().map(|t| (t.populations[ti][s] - m).powi(2)).sum::<f64>() / (n - 1.0);
                err[ti][s] = (var / n).sqrt();
            }
        }
    }
    Ok(EnsembleAverage {
        mean: EvolutionRecord {
            times: first.times.clone(),
            states: Vec::new(),
            populations: mean,
            frame: first.frame,
            basis: Some(first.basis),
        },
        std_error: err,
        n_traj: trajs.len(),
    })
}

/// Outcome of conditioning on cavity jumps out of the `(n, m)` photon sector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BundleStatistic {
    /// Conditioning events with a complete follow-up.
    pub events: usize,
    /// Events whose `n + m` jumps were `n` mode-a and `m` mode-b jumps.
    pub bundles: usize,
    /// Events dropped because the trajectory ended first.
    pub censored: usize,
}

impl BundleStatistic {
    pub fn fraction(&self) -> Option<f64> {
        (self.events > 0).then(|| self.bundles as f64 / self.events as f64)
    }
}

/// A conditioning event is a cavity jump leaving the `(n, m)` sector. It
/// counts as a bundle when that jump and the following ones, `n + m` in
/// total, consist of exactly `n` mode-a and `m` mode-b jumps with no TLS
/// jump. Jumps consumed by an event are not re-used as new conditions.
pub fn bundle_statistic(trajs: &[Trajectory], n: usize, m: usize) -> BundleStatistic {
    let size = n + m;
    let mut stat = BundleStatistic {
        events: 0,
        bundles: 0,
        censored: 0,
    };
    for traj in trajs {
        let jumps = &traj.jumps;
        let mut i = 0;
        while i < jumps.len() {
            let j = &jumps[i];
            let cavity = matches!(j.channel, JumpChannel::ModeA | JumpChannel::ModeB);
            if !(cavity && j.source_sector == (n, m)) {
                i += 1;
                continue;
            }
            if i + size > jumps.len() {
                stat.censored += 1;
                break;
            }
            let window = &jumps[i..i + size];
            let na = window.iter().filter(|e| e.channel == JumpChannel::ModeA).count();
            let nb = window.iter().filter(|e| e.channel == JumpChannel::ModeB).count();
            stat.events += 1;
            if na == n && nb == m {
                stat.bundles += 1;
            }
            i += size;
        }
    }
    stat
}
