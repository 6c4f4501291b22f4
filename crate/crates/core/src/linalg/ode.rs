//! Adaptive Dormand–Prince 5(4) integration for complex-valued linear and
//! nonlinear systems `dy/dt = f(t, y)`.

use super::{check_finite, DenseVector, LinalgError, Result, C64};

/// Tolerance settings for the adaptive integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_step: f64::INFINITY,
            max_steps: 50_000_000,
        }
    }
}

impl OdeControl {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn with_max_step(mut self, max_step: f64) -> Self {
        self.max_step = max_step;
        self
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Continuous extension (Hairer & Wanner, order 4).
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Single-step driver. Callers that need to react to events inside a step
/// (quantum jumps) use this directly together with [`DormandPrince::dense_output`].
pub struct DormandPrince<F> {
    f: F,
    t: f64,
    y: Vec<C64>,
    h: f64,
    ctrl: OdeControl,
    k: Vec<Vec<C64>>,
    ytmp: Vec<C64>,
    ynew: Vec<C64>,
    dense: Option<DenseStep>,
    keep_dense: bool,
    steps: usize,
}

struct DenseStep {
    t0: f64,
    h: f64,
    coeffs: [Vec<C64>; 5],
}

impl<F> DormandPrince<F>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    pub fn new(mut f: F, t0: f64, y0: &[C64], ctrl: OdeControl) -> Result<Self> {
        check_finite(y0, "ode initial state")?;
        let n = y0.len();
        let mut k = vec![vec![C64::new(0.0, 0.0); n]; 7];
        f(t0, y0, &mut k[0]);
        check_finite(&k[0], "ode derivative")?;
        let mut s = Self {
            f,
            t: t0,
            y: y0.to_vec(),
            h: 0.0,
            ctrl,
            k,
            ytmp: vec![C64::new(0.0, 0.0); n],
            ynew: vec![C64::new(0.0, 0.0); n],
            dense: None,
            keep_dense: false,
            steps: 0,
        };
        s.h = s.initial_step();
        Ok(s)
    }

    /// Keep the continuous-extension coefficients of every accepted step.
    pub fn with_dense_output(mut self) -> Self {
        self.keep_dense = true;
        self
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[C64] {
        &self.y
    }

    /// Start of the most recent accepted step.
    pub fn last_step_start(&self) -> Option<f64> {
        self.dense.as_ref().map(|d| d.t0)
    }

    fn weighted_rms(&self, v: &[C64], scale_a: &[C64], scale_b: &[C64]) -> f64 {
        if v.is_empty() {
            return 0.0;
        }
        let sum: f64 = v
            .iter()
            .zip(scale_a.iter().zip(scale_b))
            .map(|(e, (a, b))| {
                let sc = self.ctrl.abs_tol + self.ctrl.rel_tol * a.norm().max(b.norm());
                (e.norm() / sc).powi(2)
            })
            .sum();
        (sum / v.len() as f64).sqrt()
    }

    fn initial_step(&self) -> f64 {
        let d0 = self.weighted_rms(&self.y, &self.y, &self.y);
        let d1 = self.weighted_rms(&self.k[0], &self.y, &self.y);
        let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h.min(self.ctrl.max_step)
    }

    /// Restart from a new state, e.g. after a discontinuous jump.
    pub fn reset(&mut self, t: f64, y: &[C64]) -> Result<()> {
        check_finite(y, "ode reset state")?;
        self.t = t;
        self.y.copy_from_slice(y);
        (self.f)(t, &self.y, &mut self.k[0]);
        self.dense = None;
        Ok(())
    }

    fn combine(&mut self, h: f64, coeffs: &[(usize, f64)]) {
        for (i, out) in self.ytmp.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &(s, a) in coeffs {
                acc += self.k[s][i] * a;
            }
            *out = self.y[i] + acc * h;
        }
    }

    fn eval_stage(&mut self, stage: usize, t: f64) {
        let Self { f, ytmp, k, .. } = self;
        f(t, ytmp, &mut k[stage]);
    }

    /// Takes one accepted step that ends no later than `t_limit`, landing
    /// exactly on it when it is within reach.
    pub fn step(&mut self, t_limit: f64) -> Result<()> {
        let remaining = t_limit - self.t;
        if remaining <= 0.0 {
            return Ok(());
        }
        let mut rejected = false;
        loop {
            self.steps += 1;
            if self.steps > self.ctrl.max_steps {
                return Err(LinalgError::TooManySteps {
                    t: self.t,
                    steps: self.ctrl.max_steps,
                });
            }
            let proposal = self.h.min(self.ctrl.max_step);
            let remaining = t_limit - self.t;
            let (h, clipped) = if proposal >= remaining * (1.0 - 1e-10) {
                (remaining, true)
            } else {
                (proposal, false)
            };
            if h < 16.0 * f64::EPSILON * self.t.abs().max(1.0) {
                return Err(LinalgError::StepUnderflow { t: self.t, h });
            }
            let t = self.t;

            self.combine(h, &[(0, A21)]);
            self.eval_stage(1, t + C2 * h);
            self.combine(h, &[(0, A31), (1, A32)]);
            self.eval_stage(2, t + C3 * h);
            self.combine(h, &[(0, A41), (1, A42), (2, A43)]);
            self.eval_stage(3, t + C4 * h);
            self.combine(h, &[(0, A51), (1, A52), (2, A53), (3, A54)]);
            self.eval_stage(4, t + C5 * h);
            self.combine(h, &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)]);
            self.eval_stage(5, t + h);
            self.combine(h, &[(0, A71), (2, A73), (3, A74), (4, A75), (5, A76)]);
            std::mem::swap(&mut self.ytmp, &mut self.ynew);
            {
                let Self { f, ynew, k, .. } = self;
                f(t + h, ynew, &mut k[6]);
            }

            let err: Vec<C64> = (0..self.y.len())
                .map(|i| {
                    let k = &self.k;
                    (k[0][i] * E1 + k[2][i] * E3 + k[3][i] * E4 + k[4][i] * E5 + k[5][i] * E6
                        + k[6][i] * E7)
                        * h
                })
                .collect();
            let err_norm = self.weighted_rms(&err, &self.y, &self.ynew);
            if !err_norm.is_finite() {
                return Err(LinalgError::NonFinite("ode step"));
            }

            if err_norm <= 1.0 {
                check_finite(&self.ynew, "ode state")?;
                if self.keep_dense {
                    self.store_dense(t, h);
                }
                self.t = if clipped { t_limit } else { t + h };
                std::mem::swap(&mut self.y, &mut self.ynew);
                self.k.swap(0, 6);
                let mut factor = if err_norm == 0.0 {
                    5.0
                } else {
                    (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
                };
                if rejected {
                    factor = factor.min(1.0);
                }
                let mut next = h * factor;
                if clipped {
                    next = next.max(proposal);
                }
                self.h = next;
                return Ok(());
            }
            rejected = true;
            self.h = h * (0.9 * err_norm.powf(-0.2)).max(0.2);
        }
    }

    fn store_dense(&mut self, t0: f64, h: f64) {
        let n = self.y.len();
        let k = &self.k;
        let mut coeffs: [Vec<C64>; 5] = Default::default();
        for c in coeffs.iter_mut() {
            c.reserve_exact(n);
        }
        for i in 0..n {
            let ydiff = self.ynew[i] - self.y[i];
            let bspl = k[0][i] * h - ydiff;
            coeffs[0].push(self.y[i]);
            coeffs[1].push(ydiff);
            coeffs[2].push(bspl);
            coeffs[3].push(ydiff - k[6][i] * h - bspl);
            coeffs[4].push(
                (k[0][i] * D1 + k[2][i] * D3 + k[3][i] * D4 + k[4][i] * D5 + k[5][i] * D6
                    + k[6][i] * D7)
                    * h,
            );
        }
        self.dense = Some(DenseStep { t0, h, coeffs });
    }

    /// Evaluates the continuous extension of the last accepted step at `t`.
    /// Returns `false` when no dense step is available.
    pub fn dense_output(&self, t: f64, out: &mut [C64]) -> bool {
        let Some(d) = &self.dense else {
            return false;
        };
        let theta = ((t - d.t0) / d.h).clamp(0.0, 1.0);
        let theta1 = 1.0 - theta;
        for (i, o) in out.iter_mut().enumerate() {
            *o = d.coeffs[0][i]
                + (d.coeffs[1][i]
                    + (d.coeffs[2][i] + (d.coeffs[3][i] + d.coeffs[4][i] * theta1) * theta)
                        * theta1)
                    * theta;
        }
        true
    }
}

pub(crate) fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(LinalgError::InvalidGrid("empty grid".into()));
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(LinalgError::InvalidGrid("non-finite grid point".into()));
    }
    if let Some(w) = t_grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(LinalgError::InvalidGrid(format!(
            "grid not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Integrates `dy/dt = f(t, y)` from `t_grid[0]` and samples the solution on
/// every grid point (the first sample is `y0` itself).
pub fn integrate_ode<F>(f: F, y0: &DenseVector, t_grid: &[f64], ctrl: &OdeControl) -> Result<Vec<DenseVector>>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    validate_grid(t_grid)?;
    let mut stepper = DormandPrince::new(f, t_grid[0], y0.as_slice(), *ctrl)?;
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(y0.clone());
    for &t in &t_grid[1..] {
        while stepper.t() < t {
            stepper.step(t)?;
        }
        out.push(DenseVector::from_vec(stepper.y().to_vec()));
    }
    Ok(out)
}
