use mpjc_core::linalg::{matvec, DenseVector, C64};
use mpjc_core::model::{
    build_operators, delta_a_for_sum, dressed_basis, effective_two_level, higher_order_detuning_sums,
    omega_eff, resonance_detunings, same_state_delta_a, Basis, Branch, DressedBasis, ModelConfig,
    ModelError, TlsLabel,
};
use proptest::prelude::*;

fn fig3(n: u32, m: u32, da: f64, db: f64, ol: f64) -> ModelConfig {
    ModelConfig::new(n, m, 0.3, ol)
        .with_decay(1.0, 1.0, 0.1)
        .at_resonance(da, db, Branch::PlusStart)
        .unwrap()
}

fn eq10_by_hand(n: f64, m: f64, da: f64, db: f64, ol: f64) -> (f64, f64) {
    let d = da + db;
    let x = ((db - 3.0 * da) * d - 4.0 * ol * ol) / (4.0 * n * d);
    let y = ((da - 3.0 * db) * d - 4.0 * ol * ol) / (4.0 * m * d);
    (x, y)
}

#[test]
fn coupling_matrix_elements() {
    let ops = build_operators(&ModelConfig::new(1, 1, 1.0, 0.0)).unwrap();
    let bs = ops.basis;
    let e00 = bs.index(0, 0, TlsLabel::Excited).unwrap();
    let g11 = bs.index(1, 1, TlsLabel::Ground).unwrap();
    assert!((ops.h_int.get(e00, g11) - C64::new(1.0, 0.0)).norm() < 1e-15);

    let ops = build_operators(&ModelConfig::new(2, 1, 1.0, 0.0)).unwrap();
    let bs = ops.basis;
    let e00 = bs.index(0, 0, TlsLabel::Excited).unwrap();
    let g21 = bs.index(2, 1, TlsLabel::Ground).unwrap();
    assert!((ops.h_int.get(e00, g21).re - 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn hamiltonian_matches_dyadic_assembly() {
    let mut cfg = ModelConfig::new(1, 1, 0.7, 1.3).with_detunings(0.4, -0.9, 2.1);
    cfg.trunc_a = 3;
    cfg.trunc_b = 3;
    let ops = build_operators(&cfg).unwrap();
    let bs = Basis::new(3, 3);
    let dim = bs.dim();
    let mut h = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    let add = |h: &mut Vec<Vec<C64>>, r: usize, c: usize, v: f64| h[r][c] += C64::new(v, 0.0);
    for s in 0..2 {
        for k in 0..4 {
            for l in 0..4 {
                let tl = if s == 0 { TlsLabel::Ground } else { TlsLabel::Excited };
                let i = bs.index(k, l, tl).unwrap();
                let sz = if s == 0 { -1.0 } else { 1.0 };
                add(&mut h, i, i, 0.5 * 2.1 * sz + 0.4 * k as f64 - 0.9 * l as f64);
                let j = bs.index(k, l, if s == 0 { TlsLabel::Excited } else { TlsLabel::Ground }).unwrap();
                add(&mut h, i, j, 1.3);
            }
        }
    }
    for k in 1..4 {
        for l in 1..4 {
            let e = bs.index(k - 1, l - 1, TlsLabel::Excited).unwrap();
            let g = bs.index(k, l, TlsLabel::Ground).unwrap();
            let amp = 0.7 * ((k * l) as f64).sqrt();
            add(&mut h, e, g, amp);
            add(&mut h, g, e, amp);
        }
    }
    for r in 0..dim {
        for c in 0..dim {
            assert!((ops.h_int.get(r, c) - h[r][c]).norm() < 1e-14, "({r},{c})");
        }
    }
}

#[test]
fn multiphoton_ladder_elements() {
    let cfg = ModelConfig::new(3, 2, 1.0, 0.0).with_truncation(8, 6);
    let ops = build_operators(&cfg).unwrap();
    let x = ops.mode_product(3, 2).unwrap();
    let bs = ops.basis;
    for k in 3..=8usize {
        for l in 2..=6usize {
            let fa: f64 = ((k - 2)..=k).map(|j| j as f64).product();
            let fb: f64 = ((l - 1)..=l).map(|j| j as f64).product();
            let r = bs.index(k - 3, l - 2, TlsLabel::Ground).unwrap();
            let c = bs.index(k, l, TlsLabel::Ground).unwrap();
            assert!((x.get(r, c).re - (fa * fb).sqrt()).abs() < 1e-12);
        }
    }
    let vac = DenseVector::basis(bs.dim(), bs.index(0, 3, TlsLabel::Excited).unwrap());
    assert!(matvec(&ops.a, &vac).unwrap().norm() == 0.0);
}

#[test]
fn hamiltonians_are_hermitian() {
    let cfg = fig3(2, 2, -34.5, -43.5, 33.0);
    let ops = build_operators(&cfg).unwrap();
    assert!(ops.h_int.hermiticity_error() < 1e-13);
    assert!(ops.h0_prime.hermiticity_error() < 1e-13);
    assert_eq!(ops.dim(), 98);
}

#[test]
fn truncation_below_minimum_is_rejected() {
    let cfg = ModelConfig::new(2, 1, 1.0, 1.0).with_truncation(4, 3);
    assert!(matches!(build_operators(&cfg), Err(ModelError::TruncationTooSmall { mode: 'a', .. })));
}

#[test]
fn resonance_values_first_case() {
    let (da, db) = resonance_detunings(1, 1, -16.5, -21.0, 27.0, Branch::PlusStart).unwrap();
    assert!((da - 26.565).abs() < 1e-9);
    assert!((db - 31.065).abs() < 1e-9);
    let (x, y) = eq10_by_hand(1.0, 1.0, -16.5, -21.0, 27.0);
    assert!((da - x).abs() < 1e-12 && (db - y).abs() < 1e-12);
}

#[test]
fn resonance_value_second_case() {
    let (da, _) = resonance_detunings(2, 1, -34.5, -21.0, 30.0, Branch::PlusStart).unwrap();
    assert!((da - 18.42).abs() < 0.01);
}

#[test]
fn higher_order_roots_first_case() {
    let (_, db) = resonance_detunings(1, 1, -16.5, -21.0, 27.0, Branch::PlusStart).unwrap();
    let (sp, sm) = higher_order_detuning_sums(-16.5, -21.0, 27.0, 2).unwrap();
    assert!((delta_a_for_sum(1, 1, sp, db).unwrap() + 3.60).abs() < 0.01);
    assert!((delta_a_for_sum(1, 1, sm, db).unwrap() + 83.53).abs() < 0.01);
    let (sp, sm) = higher_order_detuning_sums(-16.5, -21.0, 27.0, 3).unwrap();
    assert!((delta_a_for_sum(1, 1, sp, db).unwrap() + 12.04).abs() < 0.01);
    assert!((delta_a_for_sum(1, 1, sm, db).unwrap() + 59.46).abs() < 0.01);
}

#[test]
fn higher_order_roots_fourth_case() {
    let (_, db) = resonance_detunings(2, 2, -34.5, -43.5, 33.0, Branch::PlusStart).unwrap();
    let (sp, sm) = higher_order_detuning_sums(-34.5, -43.5, 33.0, 2).unwrap();
    assert!((delta_a_for_sum(2, 2, sp, db).unwrap() - 0.25).abs() < 0.01);
    assert!((delta_a_for_sum(2, 2, sm, db).unwrap() + 64.21).abs() < 0.01);
    assert!((same_state_delta_a(2, 2, db).unwrap() + 18.98).abs() < 0.01);
}

#[test]
fn resonance_closes_on_generalized_rabi_frequency() {
    for &(n, m, da, db, ol) in &[
        (1, 1, -16.5, -21.0, 27.0),
        (2, 1, -34.5, -21.0, 30.0),
        (1, 2, -16.5, -43.5, 30.0),
        (2, 2, -34.5, -43.5, 33.0),
        (1, 1, -55.0, -70.0, 90.0),
    ] {
        let cfg = ModelConfig::new(n, m, 1.0, ol).at_resonance(da, db, Branch::PlusStart).unwrap();
        let om = cfg.omega_gen();
        assert!((cfg.detuning_sum() - om).abs() < 1e-9 * om);
    }
}

#[test]
fn dressed_eigenstates_at_rabi_parameters() {
    let cfg = ModelConfig::new(1, 1, 1.0, 90.0).at_resonance(-55.0, -70.0, Branch::PlusStart).unwrap();
    assert!((cfg.delta_a - 88.55).abs() < 1e-9);
    let d = dressed_basis(&cfg).unwrap();
    let ops = build_operators(&cfg).unwrap();
    let sub = DressedBasis::new(cfg.delta_sigma, cfg.omega_l).unwrap();
    assert_eq!(d, sub);
    for s in [TlsLabel::Plus, TlsLabel::Minus] {
        let v = d.product_state(&ops.basis, 0, 0, s).unwrap();
        let hv = matvec(&ops.h0_prime, &v).unwrap();
        let e = d.energy(s).unwrap();
        let res = hv.max_abs_diff(&v.scaled(C64::new(e, 0.0)));
        assert!(res < 1e-12, "residual {res}");
    }
}

#[test]
fn omega_eff_vanishes_without_coupling() {
    let cfg = ModelConfig::new(1, 1, 0.0, 90.0).at_resonance(-55.0, -70.0, Branch::PlusStart).unwrap();
    assert_eq!(omega_eff(&cfg).unwrap(), 0.0);
    let h = effective_two_level(&cfg).unwrap();
    let d = dressed_basis(&cfg).unwrap();
    assert!((h[(0, 0)].re - d.e_plus).abs() < 1e-12);
    assert!((h[(1, 1)].re - (cfg.detuning_sum() + d.e_minus)).abs() < 1e-12);
    assert_eq!(h[(0, 1)].re, 0.0);
}

#[test]
fn effective_hamiltonian_near_resonant_for_first_rabi_panel() {
    let cfg = ModelConfig::new(1, 1, 1.0, 90.0).at_resonance(-55.0, -70.0, Branch::PlusStart).unwrap();
    let h = effective_two_level(&cfg).unwrap();
    assert!(h.hermiticity_error() == 0.0);
    assert!(h.as_slice().iter().all(|z| z.im == 0.0));
    let w = omega_eff(&cfg).unwrap();
    assert!(((h[(0, 0)] - h[(1, 1)]).re.abs() / w.abs()) < 0.2);
}

fn dressed_energy_check(cfg: &ModelConfig) -> f64 {
    let ops = build_operators(cfg).unwrap();
    let d = dressed_basis(cfg).unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..=cfg.trunc_a {
        for l in 0..=cfg.trunc_b {
            for s in [TlsLabel::Plus, TlsLabel::Minus] {
                let v = d.product_state(&ops.basis, k, l, s).unwrap();
                let e = d.energy(s).unwrap() + k as f64 * cfg.delta_a + l as f64 * cfg.delta_b;
                let hv = matvec(&ops.h0_prime, &v).unwrap();
                worst = worst.max(hv.max_abs_diff(&v.scaled(C64::new(e, 0.0))));
            }
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dressed_coefficients_normalized(ds in -200.0f64..200.0, ol in 0.0f64..150.0) {
        prop_assume!(ds.abs() + ol > 1e-6);
        let d = DressedBasis::new(ds, ol).unwrap();
        prop_assert!((d.c_plus.powi(2) + d.c_minus.powi(2) - 1.0).abs() < 1e-12);
        let amp2 = d.a_pp.powi(2) + d.a_pm.powi(2) + d.a_mp.powi(2) + d.a_mm.powi(2);
        prop_assert!((amp2 - 1.0).abs() < 1e-12);
        prop_assert!((d.a_pp + d.a_mm).abs() < 1e-15);
        prop_assert!((d.e_plus + d.e_minus).abs() < 1e-12);
    }

    #[test]
    fn bare_hamiltonian_diagonal_in_dressed_products(
        n in 1u32..3, m in 1u32..3,
        da in -30.0f64..30.0, db in -30.0f64..30.0, ds in -40.0f64..40.0, ol in 0.5f64..40.0,
    ) {
        let cfg = ModelConfig::new(n, m, 0.5, ol).with_detunings(da, db, ds).with_truncation(2 * n as usize + 1, 2 * m as usize + 1);
        prop_assert!(dressed_energy_check(&cfg) < 1e-11);
    }

    #[test]
    fn resonance_plus_branch_closure(
        n in 1u32..4, m in 1u32..4,
        big_a in -100.0f64..-0.5, big_b in -100.0f64..0.0, ol in 0.0f64..120.0,
    ) {
        let (da, db) = resonance_detunings(n, m, big_a, big_b, ol, Branch::PlusStart).unwrap();
        let s = f64::from(n) * da + f64::from(m) * db;
        let ds = big_a + big_b + s;
        let om = (ds * ds + 4.0 * ol * ol).sqrt();
        prop_assert!((s - om).abs() <= 1e-9 * om.max(1.0));
    }

    #[test]
    fn resonance_minus_branch_closure(big_a in 0.5f64..100.0, big_b in 0.0f64..100.0, ol in 0.0f64..120.0) {
        let (da, db) = resonance_detunings(1, 2, big_a, big_b, ol, Branch::MinusStart).unwrap();
        let s = da + 2.0 * db;
        let ds = big_a + big_b + s;
        let om = (ds * ds + 4.0 * ol * ol).sqrt();
        prop_assert!((s + om).abs() <= 1e-9 * om.max(1.0));
    }

    #[test]
    fn equal_modes_give_equal_detunings(n in 1u32..5, big in -80.0f64..-0.5, ol in 0.0f64..100.0) {
        let (da, db) = resonance_detunings(n, n, big, big, ol, Branch::PlusStart).unwrap();
        prop_assert!((da - db).abs() <= 1e-12 * da.abs().max(1.0));
    }

    #[test]
    fn omega_eff_continuous_in_drive(scale in 0.99f64..1.01) {
        let base = ModelConfig::new(1, 1, 1.0, 90.0).at_resonance(-55.0, -70.0, Branch::PlusStart).unwrap();
        let w0 = omega_eff(&base).unwrap();
        let mut cfg = base.clone();
        cfg.omega_l *= scale;
        let w = omega_eff(&cfg).unwrap();
        prop_assert!(w.signum() == w0.signum());
        prop_assert!((w - w0).abs() < 0.5 * w0.abs());
    }
}

#[test]
fn dimension_metadata() {
    let ops = build_operators(&ModelConfig::new(1, 2, 1.0, 1.0)).unwrap();
    assert!(ops.h_int.is_square());
    assert_eq!(ops.dim(), 2 * 7 * 7);
}
