use crate::linalg::DenseMatrix;
use crate::model::{Basis, TlsLabel};

use super::{ObservablesError, Result};

/// Magnitude below which negative probabilities are treated as roundoff.
pub const CLAMP_FLOOR: f64 = 1e-12;

/// `P_{k,l}` with the two-level system traced out.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    probs: Vec<Vec<f64>>,
}

pub fn joint_distribution(rho: &DenseMatrix, basis: &Basis) -> Result<JointDistribution> {
    if rho.rows() != basis.dim() || rho.cols() != basis.dim() {
        return Err(ObservablesError::InvalidArgument(format!(
            "density matrix is {}x{}, basis dimension is {}",
            rho.rows(),
            rho.cols(),
            basis.dim()
        )));
    }
    let probs = (0..basis.levels_a())
        .map(|k| {
            (0..basis.levels_b())
                .map(|l| {
                    [TlsLabel::Ground, TlsLabel::Excited]
                        .iter()
                        .map(|&s| {
                            let i = basis.index(k, l, s).expect("index within truncation");
                            rho[(i, i)].re
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(JointDistribution { probs })
}

impl JointDistribution {
    /// Raw probability; `None` outside the truncation.
    pub fn get(&self, k: usize, l: usize) -> Option<f64> {
        self.probs.get(k).and_then(|row| row.get(l)).copied()
    }

    /// Probability with roundoff-level negatives clamped to zero.
    pub fn reported(&self, k: usize, l: usize) -> Option<f64> {
        self.get(k, l).map(|p| if p < 0.0 && p >= -CLAMP_FLOOR { 0.0 } else { p })
    }

    pub fn levels(&self) -> (usize, usize) {
        (self.probs.len(), self.probs.first().map_or(0, Vec::len))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().flatten().sum()
    }

    pub fn marginal_a(&self) -> Vec<f64> {
        self.probs.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn marginal_b(&self) -> Vec<f64> {
        let (_, nb) = self.levels();
        (0..nb).map(|l| self.probs.iter().map(|row| row[l]).sum()).collect()
    }

    pub fn min(&self) -> f64 {
        self.probs.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }
}
