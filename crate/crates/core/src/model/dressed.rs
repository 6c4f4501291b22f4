use crate::linalg::{DenseMatrix, DenseVector, C64};

use super::basis::{Basis, TlsLabel};
use super::config::ModelConfig;
use super::{ModelError, Result};

/// Eigen-system of the driven two-level Hamiltonian
/// `(delta_sigma/2)·σz + omega_l·σx`.
///
/// `|+> = c₊|e> + c₋|g>` and `|-> = c₋|e> − c₊|g>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedBasis {
    pub e_plus: f64,
    pub e_minus: f64,
    pub omega_gen: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub a_pp: f64,
    pub a_pm: f64,
    pub a_mp: f64,
    pub a_mm: f64,
}

pub fn dressed_basis(cfg: &ModelConfig) -> Result<DressedBasis> {
    DressedBasis::new(cfg.delta_sigma, cfg.omega_l)
}

impl DressedBasis {
    pub fn new(delta_sigma: f64, omega_l: f64) -> Result<Self> {
        if !(delta_sigma.is_finite() && omega_l.is_finite()) || omega_l < 0.0 {
            return Err(ModelError::InvalidConfig(
                "dressing needs finite delta_sigma and non-negative omega_l".into(),
            ));
        }
        let omega = (delta_sigma * delta_sigma + 4.0 * omega_l * omega_l).sqrt();
        if omega == 0.0 {
            return Err(ModelError::DegenerateDressing);
        }
        // Pick the cancellation-free form of each squared coefficient.
        let w = 2.0 * omega_l * omega_l;
        let (cp2, cm2) = if delta_sigma >= 0.0 {
            ((omega + delta_sigma) / (2.0 * omega), w / (omega * (omega + delta_sigma)))
        } else {
            (w / (omega * (omega - delta_sigma)), (omega - delta_sigma) / (2.0 * omega))
        };
        let c_plus = cp2.sqrt();
        let c_minus = cm2.sqrt();
        Ok(Self {
            e_plus: 0.5 * omega,
            e_minus: -0.5 * omega,
            omega_gen: omega,
            c_plus,
            c_minus,
            a_pp: c_plus * c_minus,
            a_pm: c_minus * c_minus,
            a_mp: -c_plus * c_plus,
            a_mm: -c_plus * c_minus,
        })
    }

    /// Components `(ground, excited)` of a dressed state.
    pub fn components(&self, s: TlsLabel) -> (f64, f64) {
        match s {
            TlsLabel::Plus => (self.c_minus, self.c_plus),
            TlsLabel::Minus => (-self.c_plus, self.c_minus),
            TlsLabel::Ground => (1.0, 0.0),
            TlsLabel::Excited => (0.0, 1.0),
        }
    }

    pub fn energy(&self, s: TlsLabel) -> Option<f64> {
        match s {
            TlsLabel::Plus => Some(self.e_plus),
            TlsLabel::Minus => Some(self.e_minus),
            _ => None,
        }
    }

    /// `|k>_a |l>_b |s>` embedded in the full space.
    pub fn product_state(&self, basis: &Basis, k: usize, l: usize, s: TlsLabel) -> Option<DenseVector> {
        let ig = basis.index(k, l, TlsLabel::Ground)?;
        let ie = basis.index(k, l, TlsLabel::Excited)?;
        let (cg, ce) = self.components(s);
        let mut v = DenseVector::zeros(basis.dim());
        v[ig] = C64::new(cg, 0.0);
        v[ie] = C64::new(ce, 0.0);
        Some(v)
    }

    /// Amplitudes `(<k,l,+|psi>, <k,l,-|psi>)` from bare amplitudes.
    pub fn rotate(&self, ground: C64, excited: C64) -> (C64, C64) {
        (
            ground * self.c_minus + excited * self.c_plus,
            -ground * self.c_plus + excited * self.c_minus,
        )
    }

    /// Populations of a pure state in the dressed product basis, laid out
    /// with the same flat indexing as the bare basis (`+` in slot 0).
    pub fn populations_pure(&self, basis: &Basis, psi: &[C64]) -> Vec<f64> {
        let sector = basis.sector_dim();
        let mut out = vec![0.0; basis.dim()];
        for i in 0..sector {
            let (p, m) = self.rotate(psi[i], psi[i + sector]);
            out[i] = p.norm_sqr();
            out[i + sector] = m.norm_sqr();
        }
        out
    }

    /// Dressed-basis populations `<k,l,s|rho|k,l,s>` of a density matrix.
    pub fn populations_density(&self, basis: &Basis, rho: &DenseMatrix) -> Vec<f64> {
        let sector = basis.sector_dim();
        let mut out = vec![0.0; basis.dim()];
        for i in 0..sector {
            let j = i + sector;
            let gg = rho[(i, i)].re;
            let ee = rho[(j, j)].re;
            let ge = rho[(i, j)];
            let cross = 2.0 * self.c_plus * self.c_minus * ge.re;
            out[i] = self.c_minus * self.c_minus * gg + self.c_plus * self.c_plus * ee + cross;
            out[j] = self.c_plus * self.c_plus * gg + self.c_minus * self.c_minus * ee - cross;
        }
        out
    }
}
