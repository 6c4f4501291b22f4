use mpjc_core::dynamics::{build_liouvillian, solve_steady_state, SteadyState};
use mpjc_core::linalg::{DenseMatrix, DenseVector, C64};
use mpjc_core::model::{build_operators, Basis, Branch, ModelConfig, OperatorSet, TlsLabel};
use mpjc_core::observables::*;
use proptest::prelude::*;

fn fock_density(basis: &Basis, k: usize, l: usize, s: TlsLabel) -> DenseMatrix {
    let idx = basis.index(k, l, s).unwrap();
    DenseMatrix::outer(&DenseVector::basis(basis.dim(), idx))
}

fn coherent(trunc: usize, alpha: f64) -> Vec<f64> {
    let mut amp = vec![0.0; trunc + 1];
    let mut c = (-alpha * alpha / 2.0).exp();
    for (k, a) in amp.iter_mut().enumerate() {
        if k > 0 {
            c *= alpha / (k as f64).sqrt();
        }
        *a = c;
    }
    let norm: f64 = amp.iter().map(|x| x * x).sum::<f64>().sqrt();
    amp.iter().map(|x| x / norm).collect()
}

fn resonant(n: u32, m: u32, omega_l: f64, da: f64, db: f64) -> (ModelConfig, OperatorSet) {
    let cfg = ModelConfig::new(n, m, 0.3, omega_l)
        .with_decay(1.0, 1.0, 0.1)
        .at_resonance(da, db, Branch::PlusStart)
        .unwrap();
    let ops = build_operators(&cfg).unwrap();
    (cfg, ops)
}

fn steady(cfg: &ModelConfig, ops: &OperatorSet) -> (mpjc_core::dynamics::Liouvillian, SteadyState) {
    let liou = build_liouvillian(ops, cfg).unwrap();
    let ss = solve_steady_state(&liou).unwrap();
    (liou, ss)
}

#[test]
fn fock_state_distribution_is_a_point_mass() {
    let basis = Basis::new(4, 4);
    let rho = fock_density(&basis, 1, 1, TlsLabel::Ground);
    let p = joint_distribution(&rho, &basis).unwrap();
    assert_eq!(p.get(1, 1), Some(1.0));
    assert!((p.total() - 1.0).abs() < 1e-15);
    for k in 0..=4 {
        for l in 0..=4 {
            if (k, l) != (1, 1) {
                assert_eq!(p.get(k, l), Some(0.0));
            }
        }
    }
    assert_eq!(p.marginal_a()[1], 1.0);
    assert_eq!(p.marginal_b()[0], 0.0);
    assert!(p.get(5, 0).is_none());
}

#[test]
fn distribution_sums_tls_sectors() {
    let basis = Basis::new(2, 3);
    let dim = basis.dim();
    let mut psi = DenseVector::zeros(dim);
    psi[basis.index(2, 0, TlsLabel::Ground).unwrap()] = C64::new(0.6, 0.0);
    psi[basis.index(2, 0, TlsLabel::Excited).unwrap()] = C64::new(0.0, 0.48);
    psi[basis.index(0, 3, TlsLabel::Excited).unwrap()] = C64::new(0.64, 0.0);
    let p = joint_distribution(&DenseMatrix::outer(&psi), &basis).unwrap();
    assert!((p.get(2, 0).unwrap() - (0.36 + 0.2304)).abs() < 1e-14);
    assert!((p.get(0, 3).unwrap() - 0.4096).abs() < 1e-14);
    assert!((p.total() - 1.0).abs() < 1e-14);
}

#[test]
fn reported_values_clamp_roundoff_only() {
    let basis = Basis::new(1, 1);
    let mut rho = fock_density(&basis, 0, 0, TlsLabel::Ground);
    rho[(basis.index(1, 0, TlsLabel::Ground).unwrap(), basis.index(1, 0, TlsLabel::Ground).unwrap())] =
        C64::new(-5e-13, 0.0);
    rho[(basis.index(0, 1, TlsLabel::Excited).unwrap(), basis.index(0, 1, TlsLabel::Excited).unwrap())] =
        C64::new(-1e-6, 0.0);
    let p = joint_distribution(&rho, &basis).unwrap();
    assert_eq!(p.reported(1, 0), Some(0.0));
    assert!(p.reported(0, 1).unwrap() < 0.0);
    assert!(p.min() < 0.0);
}

#[test]
fn equal_time_correlation_of_coherent_product_is_one() {
    let cfg = ModelConfig::new(1, 1, 0.3, 1.0).with_truncation(24, 24);
    let ops = build_operators(&cfg).unwrap();
    let ca = coherent(24, 1.2);
    let cb = coherent(24, 0.7);
    let mut psi = DenseVector::zeros(ops.dim());
    for k in 0..=24 {
        for l in 0..=24 {
            psi[ops.basis.index(k, l, TlsLabel::Ground).unwrap()] = C64::new(ca[k] * cb[l], 0.0);
        }
    }
    let rho = DenseMatrix::outer(&psi);
    for (k, l) in [(1, 1), (2, 0), (0, 2), (2, 1), (2, 2)] {
        let g = g_equal_time(&ops, &rho, k, l).unwrap();
        assert!((g - 1.0).abs() < 1e-8, "g({k},{l}) = {g}");
    }
}

#[test]
fn equal_time_correlation_of_single_photon_pair() {
    let cfg = ModelConfig::new(1, 1, 0.3, 1.0).with_truncation(4, 4);
    let ops = build_operators(&cfg).unwrap();
    let rho = fock_density(&ops.basis, 1, 1, TlsLabel::Excited);
    assert!((g_equal_time(&ops, &rho, 1, 1).unwrap() - 1.0).abs() < 1e-14);
    assert_eq!(g_equal_time(&ops, &rho, 2, 2).unwrap(), 0.0);
    let (na, nb) = mean_photon_numbers(&ops, &rho).unwrap();
    assert_eq!((na, nb), (1.0, 1.0));
}

#[test]
fn vacuum_correlation_is_undefined() {
    let cfg = ModelConfig::new(1, 1, 0.3, 1.0).with_truncation(4, 4);
    let ops = build_operators(&cfg).unwrap();
    let rho = fock_density(&ops.basis, 0, 0, TlsLabel::Ground);
    assert!(matches!(
        g_equal_time(&ops, &rho, 1, 1),
        Err(ObservablesError::UndefinedCorrelation(_))
    ));
}

#[test]
fn bundle_window_values() {
    assert!((tau_min(1, 1, 1.0, 1.0).unwrap() - 2.0).abs() < 1e-15);
    assert!((tau_min(2, 1, 1.0, 1.0).unwrap() - 2.5).abs() < 1e-15);
    assert!((tau_min(1, 2, 1.0, 1.0).unwrap() - 2.5).abs() < 1e-15);
    assert!((tau_min(2, 2, 1.0, 1.0).unwrap() - 3.0).abs() < 1e-15);
    assert!((tau_min(1, 1, 2.0, 0.5).unwrap() - 2.5).abs() < 1e-15);
    assert!(tau_min(0, 0, 1.0, 1.0).is_err());
}

#[test]
fn delayed_correlation_at_zero_matches_equal_time_expectation() {
    let (cfg, ops) = resonant(1, 1, 27.0, -16.5, -21.0);
    let (liou, ss) = steady(&cfg, &ops);
    let grid = [0.0, 0.5];
    let ab = g2_delayed(&ops, &liou, &ss, Mode::A, Mode::B, &grid).unwrap();
    let direct = g_equal_time(&ops, &ss.rho, 1, 1).unwrap();
    assert!((ab.values[0] - direct).abs() <= 1e-10 * direct.abs().max(1.0));

    let aa = g2_delayed(&ops, &liou, &ss, Mode::A, Mode::A, &grid).unwrap();
    let direct_aa = g_equal_time(&ops, &ss.rho, 2, 0).unwrap();
    assert!((aa.values[0] - direct_aa).abs() <= 1e-10 * direct_aa.abs().max(1.0));
    assert_eq!(aa.labels, (0, 0));
    assert_eq!(ab.kind, CorrelationKind::DelayedPair);
}

#[test]
fn delayed_correlations_decorrelate() {
    let (cfg, ops) = resonant(1, 1, 27.0, -16.5, -21.0);
    let (liou, ss) = steady(&cfg, &ops);
    let grid = [0.0, 80.0];
    for (i, j) in [(Mode::A, Mode::A), (Mode::A, Mode::B), (Mode::B, Mode::B)] {
        let c = g2_delayed(&ops, &liou, &ss, i, j, &grid).unwrap();
        assert!((c.values[1] - 1.0).abs() < 1e-2, "{:?}{:?}: {}", i, j, c.values[1]);
    }
    let bundle = g2_bundle(&ops, &liou, &ss, 1, 1, &grid).unwrap();
    assert!((bundle.values[1] - 1.0).abs() < 1e-2);
}

#[test]
fn pair_emission_is_bunched_across_modes_and_antibunched_within() {
    let (cfg, ops) = resonant(1, 1, 27.0, -16.5, -21.0);
    let (liou, ss) = steady(&cfg, &ops);
    let grid = [0.0];
    let ab = g2_delayed(&ops, &liou, &ss, Mode::A, Mode::B, &grid).unwrap().values[0];
    let aa = g2_delayed(&ops, &liou, &ss, Mode::A, Mode::A, &grid).unwrap().values[0];
    let bb = g2_delayed(&ops, &liou, &ss, Mode::B, Mode::B, &grid).unwrap().values[0];
    assert!(ab > 1.0);
    assert!(aa < 1.0 && bb < 1.0);
    assert!(ab > aa && ab > bb);
}

#[test]
fn bundle_curve_flags_window() {
    let (cfg, ops) = resonant(1, 1, 27.0, -16.5, -21.0);
    let (liou, ss) = steady(&cfg, &ops);
    let grid: Vec<f64> = (0..=8).map(|i| i as f64 * 0.5).collect();
    let c = g2_bundle(&ops, &liou, &ss, 1, 1, &grid).unwrap();
    assert_eq!(c.tau_min, Some(2.0));
    assert_eq!(c.below_tau_min, vec![true, true, true, true, false, false, false, false, false]);
    assert_eq!(c.kind, CorrelationKind::DelayedBundle);
    assert!(c.values.iter().all(|v| v.is_finite() && *v >= 0.0));
}

#[test]
fn delay_grid_must_increase() {
    let (cfg, ops) = resonant(1, 1, 27.0, -16.5, -21.0);
    let (liou, ss) = steady(&cfg, &ops);
    assert!(g2_delayed(&ops, &liou, &ss, Mode::A, Mode::B, &[1.0, 0.5]).is_err());
    assert!(g2_delayed(&ops, &liou, &ss, Mode::A, Mode::B, &[-1.0, 0.5]).is_err());
}

#[test]
fn peak_finders() {
    let x: Vec<f64> = (0..7).map(|i| i as f64).collect();
    let y = [0.0, 2.0, 1.0, 1.0, 3.0, 0.5, 0.7];
    assert_eq!(local_maxima(&y), vec![1, 4]);
    assert_eq!(local_minima(&y), vec![5]);
    assert_eq!(extremum_near(&x, &y, 3.6, 1.0, Extremum::Maximum), Some(4));
    assert_eq!(extremum_near(&x, &y, 2.5, 0.2, Extremum::Maximum), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn distribution_of_random_mixture_is_normalized(
        weights in prop::collection::vec(0.0f64..1.0, 18),
        phases in prop::collection::vec(0.0..std::f64::consts::TAU, 18),
    ) {
        let basis = Basis::new(2, 2);
        prop_assume!(weights.iter().sum::<f64>() > 1e-3);
        let psi = DenseVector::from_vec(
            weights.iter().zip(&phases).map(|(w, p)| C64::from_polar(w.sqrt(), *p)).collect(),
        ).normalized();
        let p = joint_distribution(&DenseMatrix::outer(&psi), &basis).unwrap();
        prop_assert!((p.total() - 1.0).abs() < 1e-12);
        prop_assert!(p.min() >= -1e-15);
        let ma: f64 = p.marginal_a().iter().sum();
        prop_assert!((ma - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bundle_window_is_monotone(n in 1usize..5, m in 1usize..5, ka in 0.2f64..3.0, kb in 0.2f64..3.0) {
        let base = tau_min(n, m, ka, kb).unwrap();
        prop_assert!(tau_min(n + 1, m, ka, kb).unwrap() > base);
        prop_assert!(tau_min(n, m + 1, ka, kb).unwrap() > base);
        prop_assert!(tau_min(n, m, ka * 2.0, kb * 2.0).unwrap() < base);
    }
}
