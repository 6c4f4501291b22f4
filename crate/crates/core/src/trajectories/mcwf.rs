use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::PopulationFrame;
use crate::linalg::{DenseVector, DormandPrince, OdeControl, SparseOperator, C64};
use crate::model::{dressed_basis, Basis, ModelConfig, OperatorSet};

use super::{Result, TrajectoryError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JumpChannel {
    ModeA,
    ModeB,
    Tls,
}

impl JumpChannel {
    pub fn name(self) -> &'static str {
        match self {
            JumpChannel::ModeA => "mode_a",
            JumpChannel::ModeB => "mode_b",
            JumpChannel::Tls => "tls",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpEvent {
    pub time: f64,
    pub channel: JumpChannel,
    /// Squared norm of the unnormalized state when the jump fired.
    pub pre_jump_norm: f64,
    /// Photon sector `(k, l)` that contributed most to the jump rate.
    pub source_sector: (usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub seed: u64,
    pub times: Vec<f64>,
    /// `populations[t][flat]` of the normalized state in `frame`.
    pub populations: Vec<Vec<f64>>,
    pub frame: PopulationFrame,
    pub basis: Basis,
    pub jumps: Vec<JumpEvent>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryOptions {
    pub ctrl: OdeControl,
    /// Required `|norm² - threshold|` at a located jump.
    pub bracket_tol: f64,
    pub max_bisections: usize,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        Self {
            ctrl: OdeControl::with_tolerances(1e-9, 1e-11),
            bracket_tol: 1e-8,
            max_bisections: 60,
        }
    }
}

/// Seed of trajectory `index` in an ensemble started from `base_seed`.
pub fn trajectory_seed(base_seed: u64, index: usize) -> u64 {
    base_seed.wrapping_add(index as u64)
}

pub fn run_trajectory(
    ops: &OperatorSet,
    cfg: &ModelConfig,
    psi0: &DenseVector,
    t_grid: &[f64],
    seed: u64,
) -> Result<Trajectory> {
    run_trajectory_with(ops, cfg, psi0, t_grid, seed, &TrajectoryOptions::default())
}

struct Channel<'a> {
    kind: JumpChannel,
    rate: f64,
    op: &'a SparseOperator,
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn draw_threshold(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let r: f64 = rng.random();
        if r > 0.0 {
            return r;
        }
    }
}

/// Norm-threshold quantum-jump trajectory under
/// `H_eff = H_int - (i/2)(kappa_a a†a + kappa_b b†b + gamma σ₊σ₋)`.
pub fn run_trajectory_with(
    ops: &OperatorSet,
    cfg: &ModelConfig,
    psi0: &DenseVector,
    t_grid: &[f64],
    seed: u64,
    opts: &TrajectoryOptions,
) -> Result<Trajectory> {
    let dim = ops.dim();
    if psi0.dim() != dim {
        return Err(TrajectoryError::InvalidInput(format!(
            "initial state has dimension {}, expected {dim}",
            psi0.dim()
        )));
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(TrajectoryError::InvalidInput(format!("initial norm {} is not 1", psi0.norm())));
    }
    crate::linalg::ode::validate_grid(t_grid)?;

    let channels: Vec<Channel> = [
        (JumpChannel::ModeA, cfg.kappa_a, &ops.a),
        (JumpChannel::ModeB, cfg.kappa_b, &ops.b),
        (JumpChannel::Tls, cfg.gamma, &ops.sigma_minus),
    ]
    .into_iter()
    .filter(|&(_, rate, _)| rate > 0.0)
    .map(|(kind, rate, op)| Channel { kind, rate, op })
    .collect();

    let half = C64::new(0.5, 0.0);
    let mut damping: Vec<(C64, &SparseOperator)> = Vec::new();
    for (rate, op) in [(cfg.kappa_a, &ops.num_a), (cfg.kappa_b, &ops.num_b), (cfg.gamma, &ops.sigma_ee)] {
        if rate > 0.0 {
            damping.push((-half * rate, op));
        }
    }
    // d psi/dt = -i H_int psi - (1/2) sum rate o†o psi
    let mut terms = vec![(C64::new(0.0, -1.0), &ops.h_int)];
    terms.extend(damping);
    let generator = SparseOperator::linear_combination(&terms)?;

    let (frame, dressed) = match dressed_basis(cfg) {
        Ok(d) => (PopulationFrame::Dressed, Some(d)),
        Err(_) => (PopulationFrame::Bare, None),
    };
    let basis = ops.basis;
    let sample = |psi: &[C64]| -> Vec<f64> {
        let n = norm_sqr(psi);
        match &dressed {
            Some(d) => d.populations_pure(&basis, psi).into_iter().map(|p| p / n).collect(),
            None => psi.iter().map(|z| z.norm_sqr() / n).collect(),
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut threshold = draw_threshold(&mut rng);
    let rhs = |_t: f64, y: &[C64], dy: &mut [C64]| generator.matvec_into(y, dy);
    let mut stepper = DormandPrince::new(rhs, t_grid[0], psi0.as_slice(), opts.ctrl)?.with_dense_output();

    let mut populations = Vec::with_capacity(t_grid.len());
    let mut jumps = Vec::new();
    let mut scratch = vec![C64::new(0.0, 0.0); dim];
    let mut jumped = vec![C64::new(0.0, 0.0); dim];
    populations.push(sample(stepper.y()));

    for &target in &t_grid[1..] {
        while stepper.t() < target {
            let t_prev = stepper.t();
            stepper.step(target)?;
            let t_new = stepper.t();
            if norm_sqr(stepper.y()) > threshold {
                continue;
            }
            // Bisection on the continuous extension for the crossing time.
            let (mut lo, mut hi) = (t_prev, t_new);
            let mut t_jump = t_new;
            let mut gap = norm_sqr(stepper.y()) - threshold;
            let mut converged = gap.abs() < opts.bracket_tol;
            let mut iterations = 0;
            while !converged && iterations < opts.max_bisections {
                iterations += 1;
                let mid = 0.5 * (lo + hi);
                stepper.dense_output(mid, &mut scratch);
                gap = norm_sqr(&scratch) - threshold;
                t_jump = mid;
                if gap.abs() < opts.bracket_tol {
                    converged = true;
                } else if gap > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if !converged {
                return Err(TrajectoryError::Bracketing {
                    t: t_jump,
                    iterations,
                    gap,
                });
            }
            if t_jump < t_new {
                stepper.dense_output(t_jump, &mut scratch);
            } else {
                scratch.copy_from_slice(stepper.y());
            }
            let pre_norm = norm_sqr(&scratch);

            let weights: Vec<f64> = channels
                .iter()
                .map(|c| {
                    c.op.matvec_into(&scratch, &mut jumped);
                    c.rate * norm_sqr(&jumped)
                })
                .collect();
            let total: f64 = weights.iter().sum();
            if !(total > 0.0) {
                return Err(TrajectoryError::NoChannel(t_jump));
            }
            let pick = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = channels.len() - 1;
            for (i, w) in weights.iter().enumerate() {
                acc += w;
                if pick < acc {
                    chosen = i;
                    break;
                }
            }
            let ch = &channels[chosen];
            let source_sector = dominant_sector(ch.op, &scratch, &basis);
            ch.op.matvec_into(&scratch, &mut jumped);
            let n = norm_sqr(&jumped).sqrt();
            for z in jumped.iter_mut() {
                *z /= n;
            }
            jumps.push(JumpEvent {
                time: t_jump,
                channel: ch.kind,
                pre_jump_norm: pre_norm,
                source_sector,
            });
            stepper.reset(t_jump, &jumped)?;
            threshold = draw_threshold(&mut rng);
        }
        populations.push(sample(stepper.y()));
    }

    Ok(Trajectory {
        seed,
        times: t_grid.to_vec(),
        populations,
        frame,
        basis,
        jumps,
    })
}

/// Sector `(k, l)` of the source amplitudes carrying the largest share of `||o psi||²`.
fn dominant_sector(op: &SparseOperator, psi: &[C64], basis: &Basis) -> (usize, usize) {
    let mut weight = vec![0.0; basis.sector_dim()];
    let mut col_norm = vec![0.0; psi.len()];
    for (_, c, v) in op.iter() {
        col_norm[c] += v.norm_sqr();
    }
    for (j, z) in psi.iter().enumerate() {
        weight[j % basis.sector_dim()] += z.norm_sqr() * col_norm[j];
    }
    let best = weight
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &w)| if w > acc.1 { (i, w) } else { acc })
        .0;
    (best / basis.levels_b(), best % basis.levels_b())
}
