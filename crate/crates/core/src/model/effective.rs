use crate::linalg::{DenseMatrix, C64};

use super::config::ModelConfig;
use super::dressed::dressed_basis;
use super::{factorial, ModelError, Result};

struct Parts {
    omega_eff: f64,
    eps1: f64,
    eps2: f64,
}

fn parts(cfg: &ModelConfig) -> Result<Parts> {
    let d = dressed_basis(cfg)?;
    let nm = factorial(cfg.n) * factorial(cfg.m);
    let s = cfg.detuning_sum();
    let cp2 = d.c_plus * d.c_plus;
    let cm2 = d.c_minus * d.c_minus;
    let x = (s + d.e_plus) * d.e_minus;
    let g2 = cfg.g * cfg.g;
    let l = g2 * nm * cm2 * cm2 - x;
    let scale = (g2 * nm * cm2 * cm2).abs().max(x.abs()).max(f64::MIN_POSITIVE);
    if l.abs() <= 1e-12 * scale {
        return Err(ModelError::EffectivePole { denominator: l });
    }
    let mixed = g2 * nm * cp2 * cm2 / l;
    Ok(Parts {
        omega_eff: nm.sqrt() * cfg.g * cp2 * x / l,
        eps1: mixed * d.e_minus + d.e_plus,
        eps2: mixed * (s + d.e_plus) + s + d.e_minus,
    })
}

/// Effective super-Rabi coupling between `|0,0,+>` and `|n,m,->`.
pub fn omega_eff(cfg: &ModelConfig) -> Result<f64> {
    Ok(parts(cfg)?.omega_eff)
}

/// Effective Hamiltonian in the basis `(|0,0,+>, |n,m,->)`.
pub fn effective_two_level(cfg: &ModelConfig) -> Result<DenseMatrix> {
    let p = parts(cfg)?;
    let data = vec![
        C64::new(p.eps1, 0.0),
        C64::new(p.omega_eff, 0.0),
        C64::new(p.omega_eff, 0.0),
        C64::new(p.eps2, 0.0),
    ];
    Ok(DenseMatrix::from_row_major(2, 2, data)?)
}
