use super::{ModelError, Result};

/// Which dressed state the resonant transition starts from:
/// `|0,0,+> -> |n,m,->` or `|0,0,-> -> |n,m,+>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    PlusStart,
    MinusStart,
}

/// Detunings `(delta_a, delta_b)` that put `|0,0,±>` and `|n,m,∓>` on resonance.
///
/// With `D = big_delta_a + big_delta_b` the pair satisfies
/// `n·delta_a + m·delta_b = -(D² + 4·omega_l²) / (2D)`, which equals `+Ω`
/// for `D < 0` (plus branch) and `-Ω` for `D > 0` (minus branch).
pub fn resonance_detunings(
    n: u32,
    m: u32,
    big_delta_a: f64,
    big_delta_b: f64,
    omega_l: f64,
    branch: Branch,
) -> Result<(f64, f64)> {
    if n == 0 || m == 0 {
        return Err(ModelError::InvalidConfig(
            "the resonance condition needs n >= 1 and m >= 1".into(),
        ));
    }
    let d = big_delta_a + big_delta_b;
    if d == 0.0 || !d.is_finite() {
        return Err(ModelError::SingularResonance);
    }
    let reachable = match branch {
        Branch::PlusStart => d < 0.0,
        Branch::MinusStart => d > 0.0,
    };
    if !reachable {
        return Err(ModelError::BranchUnreachable {
            requested: branch,
            sum: d,
        });
    }
    let w = 4.0 * omega_l * omega_l;
    let delta_a = ((big_delta_b - 3.0 * big_delta_a) * d - w) / (4.0 * f64::from(n) * d);
    let delta_b = ((big_delta_a - 3.0 * big_delta_b) * d - w) / (4.0 * f64::from(m) * d);
    Ok((delta_a, delta_b))
}

/// Roots `(s_plus, s_minus)` for `s = n·delta_a + m·delta_b` of the
/// order-`mu` resonance `mu·s ∓ Ω = 0`, where
/// `delta_sigma = big_delta_a + big_delta_b + s`.
pub fn higher_order_detuning_sums(
    big_delta_a: f64,
    big_delta_b: f64,
    omega_l: f64,
    mu: u32,
) -> Result<(f64, f64)> {
    if mu < 2 {
        return Err(ModelError::InvalidOrder(mu));
    }
    let d = big_delta_a + big_delta_b;
    let mu2 = f64::from(mu) * f64::from(mu);
    let root = (mu2 * d * d + 4.0 * (mu2 - 1.0) * omega_l * omega_l).sqrt();
    Ok(((d + root) / (mu2 - 1.0), (d - root) / (mu2 - 1.0)))
}

/// `delta_a` realising the detuning sum `s` with `delta_b` held fixed.
pub fn delta_a_for_sum(n: u32, m: u32, sum: f64, delta_b: f64) -> Result<f64> {
    if n == 0 {
        return Err(ModelError::InvalidConfig("delta_a is undetermined for n = 0".into()));
    }
    Ok((sum - f64::from(m) * delta_b) / f64::from(n))
}

/// `delta_a` where `|0,0,±>` and `|n,m,±>` are degenerate (`s = 0`).
pub fn same_state_delta_a(n: u32, m: u32, delta_b: f64) -> Result<f64> {
    delta_a_for_sum(n, m, 0.0, delta_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_and_unreachable() {
        assert_eq!(
            resonance_detunings(1, 1, 5.0, -5.0, 1.0, Branch::PlusStart),
            Err(ModelError::SingularResonance)
        );
        assert!(matches!(
            resonance_detunings(1, 1, 5.0, 6.0, 1.0, Branch::PlusStart),
            Err(ModelError::BranchUnreachable { .. })
        ));
        assert!(resonance_detunings(1, 1, 5.0, 6.0, 1.0, Branch::MinusStart).is_ok());
        assert_eq!(higher_order_detuning_sums(1.0, 1.0, 1.0, 1), Err(ModelError::InvalidOrder(1)));
    }

    #[test]
    fn higher_order_roots_satisfy_condition() {
        let (da, db, ol) = (-16.5, -21.0, 27.0);
        for mu in 2..5 {
            let (sp, sm) = higher_order_detuning_sums(da, db, ol, mu).unwrap();
            for (s, sign) in [(sp, 1.0), (sm, -1.0)] {
                let ds: f64 = da + db + s;
                let omega = (ds * ds + 4.0 * ol * ol).sqrt();
                assert!((f64::from(mu) * s - sign * omega).abs() < 1e-9 * omega);
            }
        }
    }
}
