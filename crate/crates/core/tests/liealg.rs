use liouville_lab::exterior::Form;
use liouville_lab::formfam::liouville_grid_check;
use liouville_lab::liealg::geiges::geiges_isomorphism;
use liouville_lab::liealg::{
    contact_check, geiges_pair_check, liouville_pair_check, preset, weak_domination_ray_check, LiouvillePair,
    Verdict,
};
use liouville_lab::scalar::{rat, rat_int, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRESETS: &[&str] = &[
    "affr", "affc", "grs:1,1", "grs:2,1", "grs1:1,1", "grs1:2,1", "grs1:0,2", "totreal:1", "totreal:2",
    "totreal:3", "totreal:4", "geiges:2", "geiges:3", "geiges:4", "sol:2,1,1,1", "sol:3,2,1,1",
];

const PAIRS: &[&str] = &[
    "totreal:1", "totreal:2", "totreal:3", "totreal:4", "grs1:1,1", "grs1:2,1", "grs1:1,2", "sol:2,1,1,1",
    "geiges:3",
];

#[test]
fn presets_satisfy_jacobi_and_d_squared() {
    for id in PRESETS {
        let p = preset(id).unwrap();
        assert!(p.algebra.jacobi_check(), "{id}: Jacobi");
        assert!(p.algebra.d_squared_check(), "{id}: d² = 0");
    }
}

#[test]
fn unknown_and_malformed_presets_are_rejected() {
    for id in ["nope", "totreal", "totreal:x", "grs1:1", "sol:1,0,0,1", "totreal:9"] {
        assert!(preset(id).is_err(), "{id} should be rejected");
    }
    assert!(preset("grs1:0,2").unwrap().pair.is_none());
}

#[test]
fn affine_group_differentials() {
    let g = preset("affc").unwrap().algebra;
    let cf = g.coframe().clone();
    let b = |i: usize| Form::<Rational>::basis(&cf, i);
    let (u, v, x, y) = (b(0), b(1), b(2), b(3));
    let expect = &x.wedge(&u).unwrap() + &v.wedge(&y).unwrap();
    assert_eq!(g.ce_differential(&x).unwrap(), expect);

    let g = preset("affr").unwrap().algebra;
    let cf = g.coframe().clone();
    let (t, th) = (Form::<Rational>::basis(&cf, 0), Form::<Rational>::basis(&cf, 1));
    assert_eq!(g.ce_differential(&th).unwrap(), -t.wedge(&th).unwrap());
    assert!(g.ce_differential(&t).unwrap().is_zero());
}

#[test]
fn preset_pairs_are_contact_of_opposite_signs() {
    for id in PAIRS {
        let pair = LiouvillePair::from_preset(id).unwrap();
        if pair.dim() == 1 {
            continue;
        }
        let plus = contact_check(&pair.algebra, &pair.plus).unwrap();
        let minus = contact_check(&pair.algebra, &pair.minus).unwrap();
        assert_eq!(plus.verdict, Verdict::Positive, "{id}: α₊");
        assert_eq!(minus.verdict, Verdict::Negative, "{id}: α₋");
        assert!(plus.replay() && minus.replay());
        let cert = liouville_pair_check(&pair.algebra, &pair.plus, &pair.minus).unwrap();
        assert!(cert.is_positive(), "{id}: Liouville certificate");
        assert_eq!(cert.kind(), "exact");
        assert!(cert.replay());
    }
}

#[test]
fn equal_forms_are_not_a_pair() {
    let pair = LiouvillePair::from_preset("totreal:2").unwrap();
    let cert = liouville_pair_check(&pair.algebra, &pair.plus, &pair.plus).unwrap();
    assert_eq!(cert.verdict, Verdict::Indefinite);
}

#[test]
fn closed_form_is_not_contact() {
    let pair = LiouvillePair::from_preset("totreal:2").unwrap();
    let t = Form::<Rational>::basis(pair.algebra.coframe(), 0);
    assert!(pair.algebra.ce_differential(&t).unwrap().is_zero());
    let c = contact_check(&pair.algebra, &t).unwrap();
    assert_eq!(c.verdict, Verdict::Indefinite);
}

#[test]
fn even_dimension_is_an_error() {
    let g = preset("affc").unwrap().algebra;
    let x = Form::<Rational>::basis(g.coframe(), 2);
    assert!(contact_check(&g, &x).is_err());
}

#[test]
fn geiges_pairs() {
    for id in ["totreal:2", "geiges:3", "geiges:4"] {
        let p = LiouvillePair::from_preset(id).unwrap();
        assert!(geiges_pair_check(&p.algebra, &p.plus, &p.minus).unwrap().is_geiges, "{id}");
    }
    let p = LiouvillePair::from_preset("totreal:3").unwrap();
    assert!(!geiges_pair_check(&p.algebra, &p.plus, &p.minus).unwrap().is_geiges);
    for n in 1..=5 {
        let iso = geiges_isomorphism(n).unwrap();
        assert!(iso.passes(1e-10), "n = {n}: {}", iso.to_json());
    }
}

#[test]
fn weak_domination_by_zero_form_fails_symplectic_half() {
    let p = LiouvillePair::from_preset("totreal:2").unwrap();
    let zero = Form::<Rational>::zero(p.algebra.coframe(), 2);
    let w = weak_domination_ray_check(&p.algebra, &p.plus, &zero).unwrap();
    assert!(!w.symplectic_half);
    assert!(!w.passes());
}

/// The exact certificate and a dense grid of `(dβ)^n` on `s ∈ [−10, 10]` must not contradict.
fn cross_check(pair: &LiouvillePair) -> (bool, bool) {
    let cert = liouville_pair_check(&pair.algebra, &pair.plus, &pair.minus).unwrap();
    let grid = liouville_grid_check(pair, (-10.0, 10.0), 2001).unwrap();
    if cert.is_positive() {
        assert!(grid.pass, "{}: certified positive but grid min {:e} at {:?}", pair.id, grid.min, grid.argmin);
    }
    if !grid.pass {
        assert!(!cert.is_positive(), "{}: grid negative but certified", pair.id);
    }
    (cert.is_positive(), grid.pass)
}

#[test]
fn certificate_agrees_with_grid_on_presets() {
    for id in PAIRS {
        let pair = LiouvillePair::from_preset(id).unwrap();
        if pair.dim() == 1 {
            continue;
        }
        assert_eq!(cross_check(&pair), (true, true), "{id}");
    }
}

#[test]
fn certificate_agrees_with_grid_on_corrupted_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut negatives = 0;
    for trial in 0..20 {
        let id = ["totreal:2", "totreal:3", "sol:2,1,1,1", "grs1:1,1"][trial % 4];
        let base = LiouvillePair::from_preset(id).unwrap();
        let cf = base.algebra.coframe().clone();
        let mut jitter = |f: &Form<Rational>| {
            let coeffs: Vec<Rational> = (0..cf.dim()).map(|_| rat(rng.random_range(-6..=6), 2)).collect();
            f + &Form::from_covector(&cf, &coeffs).unwrap()
        };
        let (plus, minus) = (jitter(&base.plus), jitter(&base.minus));
        let pair = LiouvillePair::new(&format!("{id}~{trial}"), base.algebra.clone(), plus, minus).unwrap();
        let (cert, _) = cross_check(&pair);
        negatives += usize::from(!cert);
    }
    // The jitter is large enough that some pairs must break.
    assert!(negatives > 0);
}

#[test]
fn certificate_json_is_stable() {
    let p = LiouvillePair::from_preset("totreal:2").unwrap();
    let a = liouville_pair_check(&p.algebra, &p.plus, &p.minus).unwrap().to_json();
    let b = liouville_pair_check(&p.algebra, &p.plus, &p.minus).unwrap().to_json();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let top = contact_check(&p.algebra, &p.plus).unwrap();
    assert_eq!(top.to_json()["kind"], "exact");
    let _ = rat_int(0);
}
