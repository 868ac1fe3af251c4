use std::f64::consts::PI;

use liouville_lab::formfam::cutoff::cutoff_check;
use liouville_lab::formfam::{
    contact_grid_check, grid_points, gt_form, gt_reparam_check, ideal_annulus_check, linear_model_pair_check,
    lutz_family_check, t3_form, xi_nondegenerate, ReebSolver, Smoothstep,
};
use liouville_lab::liealg::{preset, LiouvillePair};
use proptest::prelude::*;

fn pairs() -> Vec<LiouvillePair> {
    ["totreal:1", "totreal:2", "sol:2,1,1,1", "grs1:1,1"]
        .iter()
        .map(|id| LiouvillePair::from_preset(id).unwrap())
        .collect()
}

#[test]
fn gt_form_is_two_pi_periodic() {
    for pair in pairs() {
        let lam = gt_form(&pair, 2).unwrap().lambda();
        for s in grid_points(0.0, 2.0 * PI, 97, false) {
            let diff = &lam.eval(&[s]) - &lam.eval(&[s + 2.0 * PI]);
            assert!(diff.max_abs() <= 1e-12, "{} at s = {s}", pair.id);
        }
    }
}

#[test]
fn gt_forms_are_contact() {
    for pair in pairs() {
        for k in 1..=2 {
            let t = gt_form(&pair, k).unwrap();
            assert!(t.warnings.is_empty(), "{:?}", t.warnings);
            let c = contact_grid_check(&t.lambda(), t.interval, 256).unwrap();
            assert!(c.pass, "{} k = {k}: min {:e}", pair.id, c.min);
        }
    }
}

#[test]
fn non_liouville_pair_gets_a_warning() {
    let p = LiouvillePair::from_preset("totreal:2").unwrap();
    let same = LiouvillePair::new("same", p.algebra.clone(), p.plus.clone(), p.plus.clone()).unwrap();
    let t = gt_form(&same, 1).unwrap();
    assert_eq!(t.warnings.len(), 1);
}

#[test]
fn reeb_branches_agree_where_both_apply() {
    for pair in pairs() {
        let t = gt_form(&pair, 1).unwrap();
        let solver = ReebSolver::new(&t);
        for s0 in [0.0, PI, 2.0 * PI] {
            for off in [2e-5, -2e-5, 5e-5, -5e-5, 1e-6] {
                let s = s0 + off;
                if s < 0.0 {
                    continue;
                }
                let h = s.sin().abs();
                assert!(h > 1e-8 && h < 1e-4);
                let (hb, db) = solver.u_branches(s);
                let (hb, db) = (hb.unwrap(), db.unwrap());
                assert!((hb - db).abs() <= 1e-6, "{} at s = {s}: {hb} vs {db}", pair.id);
            }
        }
    }
}

#[test]
fn reeb_field_on_t3_is_closed_form() {
    for k in 1..=3 {
        let t = t3_form(k).unwrap();
        let solver = ReebSolver::new(&t);
        for s in grid_points(0.0, 2.0 * PI, 128, true) {
            let r = solver.solve(s, 1e-8).unwrap();
            let kf = k as f64;
            assert!((r.x[0] - (kf * s).cos()).abs() <= 1e-10);
            assert!((r.u - (kf * s).sin()).abs() <= 1e-10);
        }
    }
}

#[test]
fn lambda_is_closed_under_dd() {
    for pair in pairs() {
        let lam = gt_form(&pair, 3).unwrap().lambda();
        let pts: Vec<Vec<f64>> = grid_points(0.0, 6.0 * PI, 200, true).into_iter().map(|s| vec![s]).collect();
        assert!(lam.dd_sup(&pts) <= 1e-9);
    }
}

#[test]
fn ideal_annulus_and_reparametrization() {
    assert!(ideal_annulus_check(200).unwrap() <= 1e-12);
    for pair in pairs() {
        assert!(gt_reparam_check(&pair, 200).unwrap() <= 1e-10, "{}", pair.id);
    }
}

#[test]
fn lutz_identity_for_both_smoothsteps() {
    let pair = LiouvillePair::from_preset("totreal:2").unwrap();
    for psi in [Smoothstep::Quintic, Smoothstep::Septic] {
        for k in 1..=2 {
            for tau in [0.0, 0.5] {
                let r = lutz_family_check(&pair, k, tau, psi, 128).unwrap();
                assert!(r.max_rel_error <= 1e-8, "{psi:?} k = {k} τ = {tau}: {}", r.max_rel_error);
            }
        }
    }
}

#[test]
fn xi_degenerates_without_b() {
    let pair = LiouvillePair::from_preset("sol:2,1,1,1").unwrap();
    let r = xi_nondegenerate(&pair, 0.5, 0.5, 0.0, 1.0).unwrap();
    assert!(!r.nonzero);
    assert!(r.lhs.abs() <= 1e-12);
    assert!(xi_nondegenerate(&pair, 0.0, 0.0, 1.0, 0.0).is_err());
    assert!(xi_nondegenerate(&pair, -1.0, 0.5, 1.0, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn xi_identity_holds(cp in 0.0f64..2.0, cm in 0.0f64..2.0, b in 0.01f64..4.0, delta in -3.0f64..3.0, which in 0usize..4) {
        prop_assume!(cp + cm > 1e-3);
        let pair = &pairs()[which];
        let r = xi_nondegenerate(pair, cp, cm, b, delta).unwrap();
        prop_assert!(r.rel_error <= 1e-9);
        prop_assert!(r.nonzero);
    }
}

#[test]
fn linear_model() {
    let g = preset("totreal:1").unwrap().algebra;
    let pair = LiouvillePair::from_preset("totreal:1").unwrap();
    let r = linear_model_pair_check(&g, &pair.plus, 0.0, 1.0, 33).unwrap();
    assert!(r.pass(), "{}", r.to_json());
    assert!(linear_model_pair_check(&g, &pair.plus, 1.0, 1.0, 33).is_err());
    assert!(linear_model_pair_check(&g, &pair.plus, 2.0, 1.0, 33).is_err());
}

#[test]
fn cutoff_is_positive_for_preset_pairs() {
    for id in ["totreal:2", "sol:2,1,1,1"] {
        let pair = LiouvillePair::from_preset(id).unwrap();
        let c = cutoff_check(&pair, 2.0, Smoothstep::Septic, 257).unwrap();
        assert!(c.pass, "{id}: {:e}", c.min);
    }
}

#[test]
fn bad_intervals_are_rejected() {
    let pair = LiouvillePair::from_preset("totreal:2").unwrap();
    assert!(gt_form(&pair, 0).is_err());
    let t = gt_form(&pair, 1).unwrap();
    assert!(contact_grid_check(&t.lambda(), t.interval, 0).is_err());
}
