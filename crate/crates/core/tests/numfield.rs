use liouville_lab::numfield::{
    default_box_bound, det_i128, find_units, hyperbolic_sl2_lattice, monodromy_matrix, pell_fundamental_unit, pipeline,
    positive_units, NumberField, OrderElement, Poly,
};
use proptest::prelude::*;

const FIELDS: &[&[i64]] = &[
    &[-2, 0, 1],
    &[-3, 0, 1],
    &[1, 0, 1],
    &[1, 1, 1],
    &[-1, -3, 0, 1],
    &[-2, 0, 0, 1],
    &[1, 0, 0, 0, 1],
    &[1, -4, 0, 0, 1],
];

fn field(c: &[i64]) -> NumberField {
    NumberField::from_coeffs(c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exact_norm_matches_embeddings(which in 0usize..FIELDS.len(), coords in proptest::collection::vec(-20i64..=20, 4)) {
        let k = field(FIELDS[which]);
        let x = k.element(&coords[..k.degree()]).unwrap();
        let exact = k.norm(&x).unwrap() as f64;
        let float = k.norm_f64(&x);
        prop_assert!((exact - float).abs() <= 1e-6 * exact.abs().max(1.0), "{exact} vs {float}");
    }

    #[test]
    fn quadratic_norm_formula(c in -30i64..=30, b in -5i64..=5, x in -50i64..=50, y in -50i64..=50) {
        let Ok(poly) = Poly::new(vec![c, b, 1]) else { return Ok(()); };
        let k = NumberField::new(poly).unwrap();
        let n = k.norm(&OrderElement(vec![x, y])).unwrap();
        prop_assert_eq!(n, x * x - x * y * b + y * y * c);
    }

    #[test]
    fn multiplication_is_norm_multiplicative(which in 0usize..FIELDS.len(), a in proptest::collection::vec(-6i64..=6, 4), b in proptest::collection::vec(-6i64..=6, 4)) {
        let k = field(FIELDS[which]);
        let n = k.degree();
        let (x, y) = (k.element(&a[..n]).unwrap(), k.element(&b[..n]).unwrap());
        let xy = k.mul(&x, &y).unwrap();
        prop_assert_eq!(k.norm(&xy).unwrap(), k.norm(&x).unwrap() * k.norm(&y).unwrap());
    }
}

#[test]
fn cubic_norm_formula() {
    // N(a + bX) = -f(-a/b)·b³ for monic cubic f.
    let k = field(&[-2, 0, 0, 1]);
    for (a, b) in [(1, 1), (3, -2), (-5, 4), (0, 1)] {
        let expect = a * a * a + 2 * b * b * b;
        assert_eq!(k.norm(&OrderElement(vec![a, b, 0])).unwrap(), expect);
    }
}

#[test]
fn pell_agrees_with_box_search() {
    let bound = default_box_bound(2);
    let mut checked = 0;
    for d in 2..40i64 {
        let r = (d as f64).sqrt() as i64;
        if r * r == d {
            continue;
        }
        let k = field(&[-d, 0, 1]);
        let pell = pell_fundamental_unit(&k).unwrap();
        if pell.0.iter().any(|c| c.abs() > bound) {
            continue;
        }
        let g = find_units(&k, bound).unwrap();
        assert_eq!(g.free, vec![pell.clone()], "d = {d}");
        checked += 1;
    }
    assert!(checked >= 15);
}

#[test]
fn units_have_norm_one_and_monodromy_in_sl() {
    for c in FIELDS {
        let p = pipeline(Poly::new(c.to_vec()).unwrap(), None).unwrap();
        let k = &p.field;
        for u in &p.positive_units {
            assert_eq!(k.norm(u).unwrap(), 1, "{c:?}: {u:?}");
            assert!(k.embed(u)[..k.signature().0].iter().all(|z| z.re > 0.0), "{c:?}: {u:?} not totally positive");
        }
        for (g, u) in &p.lattice.basis {
            let (m, defect) = monodromy_matrix(k, u).unwrap();
            assert_eq!(det_i128(&m).unwrap(), 1, "{c:?}");
            assert!(defect <= 1e-8);
            assert!(g.trace().abs() <= 1e-10, "{c:?}: trace {}", g.trace());
        }
        assert!(p.lattice.trace_defect <= 1e-10);
        assert_eq!(p.lattice.rank, p.lattice.basis.len());
    }
}

#[test]
fn squaring_makes_generators_positive() {
    let k = field(&[-2, 0, 1]);
    let eps = OrderElement(vec![1, 1]);
    assert_eq!(k.norm(&eps).unwrap(), -1);
    let pos = positive_units(&k, std::slice::from_ref(&eps)).unwrap();
    assert_eq!(pos, vec![k.pow(&eps, 2).unwrap()]);
    assert_eq!(pos[0], OrderElement(vec![3, 2]));
    let already = OrderElement(vec![3, 2]);
    assert_eq!(positive_units(&k, std::slice::from_ref(&already)).unwrap(), vec![already]);
}

#[test]
fn rejects_bad_polynomials() {
    for c in [vec![1], vec![2, 0, 1, 2], vec![-4, 0, 1], vec![0, 1, 1], vec![1, 0, 2, 0, 1], vec![1, 0, 0, 0, 0, 1]] {
        assert!(Poly::new(c.clone()).is_err(), "{c:?}");
    }
    assert!(Poly::parse("1,x,1").is_err());
    let k = field(&[-2, 0, 1]);
    assert!(find_units(&k, 0).is_err());
}

#[test]
fn hyperbolic_matrices() {
    let h = hyperbolic_sl2_lattice([[2, 1], [1, 1]]).unwrap();
    let golden = (3.0 + 5f64.sqrt()) / 2.0;
    assert!((h.tau - golden.ln()).abs() <= 1e-12);
    assert!(h.residual <= 1e-9);
    assert!(hyperbolic_sl2_lattice([[1, 1], [0, 1]]).is_err());
    assert!(hyperbolic_sl2_lattice([[2, 0], [0, 1]]).is_err());
}

#[test]
fn totally_real_fields_carry_liouville_pairs() {
    for c in [&[-2i64, 0, 1][..], &[-1, -3, 0, 1]] {
        let p = pipeline(Poly::new(c.to_vec()).unwrap(), None).unwrap();
        assert!(p.pair.as_ref().unwrap().pass(), "{c:?}");
    }
    let p = pipeline(Poly::new(vec![-2, 0, 0, 1]).unwrap(), None).unwrap();
    assert!(p.pair.is_none());
}
