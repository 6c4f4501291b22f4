use super::resonance::{resonance_detunings, Branch};
use super::{ModelError, Result};

/// Default Fock cutoff for a mode carrying `photons` quanta per transition.
pub fn default_truncation(photons: u32) -> usize {
    (2 * photons as usize + 2).max(6)
}

/// Physical parameters and Fock truncations.
///
/// The detunings `delta_a`, `delta_b`, `delta_sigma` are always populated.
/// `big_delta_a` and `big_delta_b` are kept when the configuration was
/// derived from them; they are then checked against
/// `delta_sigma = big_delta_a + big_delta_b + n·delta_a + m·delta_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub n: u32,
    pub m: u32,
    pub g: f64,
    pub omega_l: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    pub delta_sigma: f64,
    pub big_delta_a: Option<f64>,
    pub big_delta_b: Option<f64>,
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub gamma: f64,
    pub trunc_a: usize,
    pub trunc_b: usize,
}

impl ModelConfig {
    /// Zero detunings, no dissipation, default truncation.
    pub fn new(n: u32, m: u32, g: f64, omega_l: f64) -> Self {
        Self {
            n,
            m,
            g,
            omega_l,
            delta_a: 0.0,
            delta_b: 0.0,
            delta_sigma: 0.0,
            big_delta_a: None,
            big_delta_b: None,
            kappa_a: 0.0,
            kappa_b: 0.0,
            gamma: 0.0,
            trunc_a: default_truncation(n),
            trunc_b: default_truncation(m),
        }
    }

    pub fn with_detunings(mut self, delta_a: f64, delta_b: f64, delta_sigma: f64) -> Self {
        self.delta_a = delta_a;
        self.delta_b = delta_b;
        self.delta_sigma = delta_sigma;
        self.big_delta_a = None;
        self.big_delta_b = None;
        self
    }

    pub fn with_decay(mut self, kappa_a: f64, kappa_b: f64, gamma: f64) -> Self {
        self.kappa_a = kappa_a;
        self.kappa_b = kappa_b;
        self.gamma = gamma;
        self
    }

    pub fn with_truncation(mut self, trunc_a: usize, trunc_b: usize) -> Self {
        self.trunc_a = trunc_a;
        self.trunc_b = trunc_b;
        self
    }

    /// Detunings on the resonance of the chosen branch for the given
    /// `big_delta_a`, `big_delta_b`.
    pub fn at_resonance(mut self, big_delta_a: f64, big_delta_b: f64, branch: Branch) -> Result<Self> {
        let (da, db) = resonance_detunings(self.n, self.m, big_delta_a, big_delta_b, self.omega_l, branch)?;
        self.delta_a = da;
        self.delta_b = db;
        self.big_delta_a = Some(big_delta_a);
        self.big_delta_b = Some(big_delta_b);
        self.delta_sigma = big_delta_a + big_delta_b + self.detuning_sum();
        Ok(self)
    }

    /// Replaces `delta_a`, keeping `delta_b` and the big detunings fixed and
    /// recomputing `delta_sigma` from them when they are known.
    pub fn with_delta_a(mut self, delta_a: f64) -> Self {
        self.delta_a = delta_a;
        if let (Some(da), Some(db)) = (self.big_delta_a, self.big_delta_b) {
            self.delta_sigma = da + db + self.detuning_sum();
        }
        self
    }

    /// `n·delta_a + m·delta_b`
    pub fn detuning_sum(&self) -> f64 {
        f64::from(self.n) * self.delta_a + f64::from(self.m) * self.delta_b
    }

    /// Generalized Rabi frequency `sqrt(delta_sigma² + 4·omega_l²)`.
    pub fn omega_gen(&self) -> f64 {
        (self.delta_sigma * self.delta_sigma + 4.0 * self.omega_l * self.omega_l).sqrt()
    }

    pub fn dim(&self) -> usize {
        2 * (self.trunc_a + 1) * (self.trunc_b + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n + self.m == 0 {
            return Err(ModelError::InvalidConfig("n + m must be positive".into()));
        }
        if self.n > 12 || self.m > 12 {
            return Err(ModelError::InvalidConfig("n and m must not exceed 12".into()));
        }
        let reals = [
            ("g", self.g),
            ("omega_l", self.omega_l),
            ("delta_a", self.delta_a),
            ("delta_b", self.delta_b),
            ("delta_sigma", self.delta_sigma),
            ("kappa_a", self.kappa_a),
            ("kappa_b", self.kappa_b),
            ("gamma", self.gamma),
        ];
        for (name, v) in reals {
            if !v.is_finite() {
                return Err(ModelError::InvalidConfig(format!("{name} must be finite")));
            }
        }
        for (name, v) in [("kappa_a", self.kappa_a), ("kappa_b", self.kappa_b), ("gamma", self.gamma)] {
            if v < 0.0 {
                return Err(ModelError::InvalidConfig(format!("{name} must be non-negative")));
            }
        }
        if self.omega_l < 0.0 {
            return Err(ModelError::InvalidConfig("omega_l must be non-negative".into()));
        }
        let min_a = 2 * self.n as usize + 1;
        if self.trunc_a < min_a {
            return Err(ModelError::TruncationTooSmall {
                mode: 'a',
                trunc: self.trunc_a,
                min: min_a,
                photons: self.n,
            });
        }
        let min_b = 2 * self.m as usize + 1;
        if self.trunc_b < min_b {
            return Err(ModelError::TruncationTooSmall {
                mode: 'b',
                trunc: self.trunc_b,
                min: min_b,
                photons: self.m,
            });
        }
        match (self.big_delta_a, self.big_delta_b) {
            (Some(da), Some(db)) => {
                if !(da.is_finite() && db.is_finite()) {
                    return Err(ModelError::InvalidConfig("big detunings must be finite".into()));
                }
                let expected = da + db + self.detuning_sum();
                let scale = 1.0_f64.max(expected.abs()).max(self.delta_sigma.abs());
                if (expected - self.delta_sigma).abs() > 1e-9 * scale {
                    return Err(ModelError::InvalidConfig(format!(
                        "delta_sigma = {} is inconsistent with big_delta_a + big_delta_b + n*delta_a + m*delta_b = {}",
                        self.delta_sigma, expected
                    )));
                }
            }
            (None, None) => {}
            _ => {
                return Err(ModelError::InvalidConfig(
                    "big_delta_a and big_delta_b must be given together".into(),
                ))
            }
        }
        Ok(())
    }
}
