use liouville_lab::scalar::{rat, Rational};
use liouville_lab::symplin::suite::{random_compatible_j, random_pair, rng_for};
use liouville_lab::symplin::{
    cayley_map, construct_cotamed, cotamed_exists, det_exact, pencil_endomorphism, segment_sampling,
    simultaneous_reduce, simultaneous_reduce_exact, taming_threshold, tames, to_dmatrix, ComplexStructure,
    PencilBlock, SkewForm,
};
use nalgebra::DMatrix;
use num_traits::Zero;
use proptest::prelude::*;

fn skew_from(n: usize, entries: &[i64], den: i64) -> SkewForm<Rational> {
    let mut a = vec![vec![Rational::zero(); n]; n];
    let mut it = entries.iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = rat(*it.next().unwrap(), den);
            a[j][i] = -v.clone();
            a[i][j] = v;
        }
    }
    SkewForm::new(a).unwrap()
}

fn skew_f64(m: &DMatrix<f64>) -> SkewForm<f64> {
    SkewForm::new(liouville_lab::symplin::from_dmatrix(m)).unwrap()
}

fn pf_sign(a: &SkewForm<f64>) -> f64 {
    a.pfaffian().unwrap().signum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pfaffian_squares_to_determinant(m in 1usize..=4, entries in proptest::collection::vec(-9i64..=9, 28), den in 1i64..=5) {
        let a = skew_from(2 * m, &entries, den);
        let pf = a.pfaffian().unwrap();
        prop_assert_eq!(&pf * &pf, det_exact(a.matrix()));
    }

    #[test]
    fn pencil_endomorphism_is_symmetric(seed in any::<u64>(), half in 1usize..=5) {
        let mut rng = rng_for(seed, 0);
        let (a0, a1) = random_pair(&mut rng, 2 * half);
        let b = to_dmatrix(&pencil_endomorphism(&a0, &a1).unwrap());
        let m0 = a0.to_dmatrix();
        let defect = (b.transpose() * &m0 - &m0 * &b).abs().max();
        prop_assert!(defect <= 1e-12 * (1.0 + m0.abs().max() * b.abs().max()));
        prop_assert!((&m0 * &b - a1.to_dmatrix()).abs().max() <= 1e-12 * (1.0 + m0.abs().max() * b.abs().max()));
    }

    #[test]
    fn cayley_image_anticommutes(seed in any::<u64>(), half in 1usize..=4) {
        let mut rng = rng_for(seed, 0);
        let n = 2 * half;
        let p = DMatrix::<f64>::identity(n, n);
        let j0 = ComplexStructure::<f64>::standard(half);
        let j = random_compatible_j(&mut rng, &p).unwrap();
        if let Ok(a) = cayley_map(&j0, &j) {
            let m0 = j0.to_dmatrix();
            let anti = (&a * &m0 + &m0 * &a).abs().max();
            prop_assert!(anti <= 1e-12 * (1.0 + a.abs().max()));
        }
    }

    #[test]
    fn cotamable_pairs_have_matching_pfaffian_signs(seed in any::<u64>(), half in 1usize..=4) {
        let mut rng = rng_for(seed, 0);
        let (a0, a1) = random_pair(&mut rng, 2 * half);
        if cotamed_exists(&a0, &a1).unwrap() {
            prop_assert_eq!(pf_sign(&a0), pf_sign(&a1));
            let r = construct_cotamed(&a0, &a1).unwrap();
            prop_assert!(tames(&a0, &r.j).unwrap() && tames(&a1, &r.j).unwrap());
        } else if pf_sign(&a0) != pf_sign(&a1) {
            prop_assert!(!segment_sampling(&a0, &a1, 1000).unwrap());
        }
    }
}

#[test]
fn standard_structures() {
    for n in 1..=4 {
        let w = SkewForm::<f64>::standard(n);
        let j = ComplexStructure::<f64>::standard(n);
        assert!(tames(&w, &j).unwrap());
        assert!(!tames(&w.scale(&-1.0), &j).unwrap());
        assert!(tames(&w.scale(&-1.0), &j.neg()).unwrap());
    }
    let q = SkewForm::<Rational>::standard(2);
    assert_eq!(q.pfaffian().unwrap(), rat(-1, 1));
    let interleaved = skew_from(4, &[1, 0, 0, 0, 0, 1], 1);
    assert_eq!(interleaved.pfaffian().unwrap(), rat(1, 1));
}

#[test]
fn invalid_inputs() {
    assert!(SkewForm::new(vec![vec![1.0, 0.0], vec![0.0, 0.0]]).is_err());
    assert!(ComplexStructure::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).is_err());
    let z = SkewForm::new(vec![vec![0.0; 4]; 4]).unwrap();
    assert!(!z.is_nondegenerate().unwrap());
    assert!(pencil_endomorphism(&z, &SkewForm::<f64>::standard(2)).is_err());
}

#[test]
fn threshold_for_negative_multiple() {
    for n in 1..=3 {
        let d = SkewForm::<f64>::standard(n);
        let j = ComplexStructure::<f64>::standard(n);
        let r = taming_threshold(&d.scale(&-1.0), &d, &j).unwrap();
        assert!((r.threshold - 1.0).abs() <= 1e-5, "threshold {}", r.threshold);
        let r = taming_threshold(&d.scale(&2.0), &d, &j).unwrap();
        assert_eq!(r.threshold, 0.0);
    }
    let d = SkewForm::<f64>::standard(1);
    let j = ComplexStructure::<f64>::standard(1);
    assert!(taming_threshold(&d, &d.scale(&-1.0), &j).is_err());
}

#[test]
fn opposite_forms_are_not_cotamable() {
    let w = SkewForm::<f64>::standard(2);
    assert!(!cotamed_exists(&w, &w.scale(&-1.0)).unwrap());
    assert!(construct_cotamed(&w, &w.scale(&-1.0)).is_err());
    assert!(!segment_sampling(&w, &w.scale(&-1.0), 1000).unwrap());
}

fn complex_fixture() -> (DMatrix<f64>, DMatrix<f64>) {
    let (m0, m1) = PencilBlock::Complex { mu: 0.75, nu: 1.25, chain: 1, offset: 0 }.model();
    let real = PencilBlock::Real { lambda: 3.0, chain: 1, offset: 0 }.model();
    let mut a0 = DMatrix::zeros(6, 6);
    let mut a1 = DMatrix::zeros(6, 6);
    a0.view_mut((0, 0), (4, 4)).copy_from(&m0);
    a1.view_mut((0, 0), (4, 4)).copy_from(&m1);
    a0.view_mut((4, 4), (2, 2)).copy_from(&real.0);
    a1.view_mut((4, 4), (2, 2)).copy_from(&real.1);
    let p = DMatrix::from_fn(6, 6, |i, j| if i == j { 1.0 } else { 0.1 * ((3 * i + 5 * j) % 7) as f64 - 0.3 });
    let c = |a: &DMatrix<f64>| {
        let m = p.transpose() * a * &p;
        (&m - m.transpose()) * 0.5
    };
    (c(&a0), c(&a1))
}

#[test]
fn reduction_parameters_are_stable_in_eps() {
    let (a0, a1) = complex_fixture();
    let (a0, a1) = (skew_f64(&a0), skew_f64(&a1));
    let mut params: Vec<Vec<(f64, f64)>> = Vec::new();
    for eps in [1e-2, 1e-3, 1e-4] {
        let r = simultaneous_reduce(&a0, &a1, eps).unwrap();
        assert!(r.residual0 <= 1e-9 && r.residual1 <= 10.0 * eps);
        let mut v: Vec<(f64, f64)> = r
            .blocks
            .iter()
            .map(|b| match *b {
                PencilBlock::Real { lambda, .. } => (lambda, 0.0),
                PencilBlock::Complex { mu, nu, .. } => (mu, nu.abs()),
            })
            .collect();
        v.sort_by(|x, y| x.partial_cmp(y).unwrap());
        params.push(v);
    }
    assert_eq!(params[0].len(), 2);
    for p in &params[1..] {
        for (x, y) in p.iter().zip(&params[0]) {
            assert!((x.0 - y.0).abs() <= 1e-8 && (x.1 - y.1).abs() <= 1e-8, "{p:?} vs {:?}", params[0]);
        }
    }
    assert!((params[0][0].0 - 0.75).abs() <= 1e-8 && (params[0][0].1 - 1.25).abs() <= 1e-8);
    assert!((params[0][1].0 - 3.0).abs() <= 1e-8);
}

#[test]
fn exact_reduction_of_diagonal_pencil() {
    // ω₀ = Ω₄, ω₁ = diag(2Ω₂, -Ω₂/3) in Darboux pairs (x1, y1), (x2, y2).
    let a0 = SkewForm::<Rational>::standard(2);
    let mut m = vec![vec![Rational::zero(); 4]; 4];
    let set = |m: &mut Vec<Vec<Rational>>, i: usize, j: usize, v: Rational| {
        m[j][i] = -v.clone();
        m[i][j] = v;
    };
    set(&mut m, 0, 2, rat(2, 1));
    set(&mut m, 1, 3, rat(-1, 3));
    let a1 = SkewForm::new(m).unwrap();
    let r = simultaneous_reduce_exact(&a0, &a1).unwrap();
    assert!(r.verify(&a0, &a1));
    assert!(!cotamed_exists(&a0, &a1).unwrap());
}
