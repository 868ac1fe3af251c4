//! Seeded randomized suites. Trial `i` uses `ChaCha8Rng::seed_from_u64(seed + i)`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{Coframe, Form};
use crate::scalar::{rat_int, Rational};
use crate::symplin::reduce::REAL_TOL;
use crate::symplin::{
    construct_cotamed, cotamed_exists, from_dmatrix, interpolate_tamed, pencil_spectrum, segment_sampling,
    taming_matrix, to_dmatrix, ComplexStructure, SkewForm,
};

pub fn rng_for(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial))
}

/// Antisymmetric matrix with entries uniform in `[−1, 1]`.
pub fn random_skew(rng: &mut impl Rng, dim: usize) -> SkewForm<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let x: f64 = rng.random_range(-1.0..1.0);
            m[(i, j)] = x;
            m[(j, i)] = -x;
        }
    }
    SkewForm::new(from_dmatrix(&m)).expect("antisymmetric by construction")
}

/// A pair of nondegenerate random forms.
pub fn random_pair(rng: &mut impl Rng, dim: usize) -> (SkewForm<f64>, SkewForm<f64>) {
    let mut draw = || loop {
        let a = random_skew(rng, dim);
        if a.is_nondegenerate().unwrap_or(false) {
            let pf = crate::symplin::pfaffian_f64(&a.to_dmatrix()).abs();
            if pf > 1e-3 {
                return a;
            }
        }
    };
    (draw(), draw())
}

/// Random symplectic matrix for `Ω_{2n}`: two symmetric shears and a block `diag(G, G^{−T})`.
fn random_symplectic(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let mut sym = || {
        let mut s = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x: f64 = rng.random_range(-0.5..0.5);
                s[(i, j)] = x;
                s[(j, i)] = x;
            }
        }
        s
    };
    let (s1, s2) = (sym(), sym());
    let id = DMatrix::<f64>::identity(n, n);
    let mut g = id.clone();
    for x in g.iter_mut() {
        *x += rng.random_range(-0.3..0.3);
    }
    let g_inv_t = g.clone().try_inverse().unwrap_or_else(|| id.clone()).transpose();
    let g = if g_inv_t == id { id.clone() } else { g };
    let block = |a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>, d: &DMatrix<f64>| {
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(a);
        m.view_mut((0, n), (n, n)).copy_from(b);
        m.view_mut((n, 0), (n, n)).copy_from(c);
        m.view_mut((n, n), (n, n)).copy_from(d);
        m
    };
    let z = DMatrix::zeros(n, n);
    block(&id, &s1, &z, &id) * block(&id, &z, &s2, &id) * block(&g, &z, &z, &g_inv_t)
}

/// Random `J` compatible with `ω = PᵀΩP` (given `P`).
pub fn random_compatible_j(rng: &mut impl Rng, p: &DMatrix<f64>) -> Result<ComplexStructure<f64>> {
    let n = p.nrows() / 2;
    let m = random_symplectic(rng, n);
    let js = ComplexStructure::<f64>::standard(n).to_dmatrix();
    let jc = &m * js * m.clone().try_inverse().ok_or_else(|| Error::Singular("symplectic matrix".into()))?;
    let pinv = p.clone().try_inverse().ok_or_else(|| Error::Singular("Darboux basis".into()))?;
    ComplexStructure::from_dmatrix_polished(&(pinv * jc * p))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimSummary {
    pub dim: usize,
    pub trials: usize,
    pub exists: usize,
    pub mismatches: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub trials: usize,
    pub mismatches: usize,
    /// Real eigenvalues `≤ 0` on pairs whose segment sampled as nondegenerate.
    pub sign_law_violations: usize,
    /// Smallest relative taming margin over all constructed structures.
    pub worst_margin: f64,
    pub per_dim: Vec<DimSummary>,
    pub seed: u64,
    /// Seeds of mismatching trials.
    pub failing_seeds: Vec<u64>,
}

impl EquivalenceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "trials": self.trials,
            "mismatches": self.mismatches,
            "sign_law_violations": self.sign_law_violations,
            "worst_margin": self.worst_margin,
            "per_dim": self.per_dim.iter().map(|d| json!({
                "dim": d.dim, "trials": d.trials, "exists": d.exists, "mismatches": d.mismatches
            })).collect::<Vec<_>>(),
            "seeds": {"base": self.seed, "count": self.trials},
            "failing_seeds": self.failing_seeds,
        })
    }
}

struct TrialOutcome {
    exists: bool,
    mismatch: bool,
    sign_violation: bool,
    margin: f64,
}

fn equivalence_trial(dim: usize, seed: u64) -> TrialOutcome {
    let mut rng = rng_for(seed, 0);
    let (a0, a1) = random_pair(&mut rng, dim);
    let spectral = cotamed_exists(&a0, &a1).unwrap_or(false);
    let sampled = segment_sampling(&a0, &a1, 10_000).unwrap_or(!spectral);
    let eigs = pencil_spectrum(&a0, &a1).unwrap_or_default();
    let sign_violation = sampled && eigs.iter().any(|z| z.im.abs() <= REAL_TOL * z.re.abs() && z.re <= 0.0);
    let (constructed, margin) = match construct_cotamed(&a0, &a1) {
        Ok(r) => (true, r.margin0.min(r.margin1)),
        Err(_) => (false, f64::INFINITY),
    };
    TrialOutcome { exists: spectral, mismatch: spectral != sampled || spectral != constructed, sign_violation, margin }
}

/// Three-way equivalence (spectral test, Pfaffian sampling of the segment, successful construction)
/// over `trials` random pairs per dimension.
pub fn equivalence_suite(dims: &[usize], trials: usize, seed: u64) -> Result<EquivalenceReport> {
    if trials == 0 || dims.is_empty() {
        return Err(Error::Precondition("need at least one trial and one dimension".into()));
    }
    if let Some(&d) = dims.iter().find(|&&d| d % 2 == 1 || d == 0) {
        return Err(Error::OddDimension(d));
    }
    let jobs: Vec<(usize, u64)> = dims
        .iter()
        .enumerate()
        .flat_map(|(k, &d)| (0..trials).map(move |i| (d, seed + (k * trials + i) as u64)))
        .collect();
    let outcomes: Vec<TrialOutcome> = jobs.par_iter().map(|&(d, s)| equivalence_trial(d, s)).collect();
    let mut per_dim = Vec::new();
    let mut failing_seeds = Vec::new();
    for (k, &d) in dims.iter().enumerate() {
        let slice = &outcomes[k * trials..(k + 1) * trials];
        per_dim.push(DimSummary {
            dim: d,
            trials,
            exists: slice.iter().filter(|o| o.exists).count(),
            mismatches: slice.iter().filter(|o| o.mismatch).count(),
        });
    }
    for (o, &(_, s)) in outcomes.iter().zip(&jobs) {
        if o.mismatch {
            failing_seeds.push(s);
        }
    }
    Ok(EquivalenceReport {
        trials: jobs.len(),
        mismatches: failing_seeds.len(),
        sign_law_violations: outcomes.iter().filter(|o| o.sign_violation).count(),
        worst_margin: outcomes.iter().map(|o| o.margin).fold(f64::INFINITY, f64::min),
        per_dim,
        seed,
        failing_seeds,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterpolationReport {
    pub trials: usize,
    pub checks: usize,
    pub failures: usize,
    pub seed: u64,
}

impl InterpolationReport {
    pub fn to_json(&self) -> Value {
        json!({"trials": self.trials, "checks": self.checks, "failures": self.failures, "seeds": {"base": self.seed, "count": self.trials}})
    }
}

/// Random triples of `ω`-compatible structures for a random `ω = PᵀΩP` in dimension `dim`;
/// the Cayley interpolation at `t ∈ {¼, ½, ¾}` must stay tamed by `ω`.
pub fn interpolation_suite(dim: usize, trials: usize, seed: u64) -> Result<InterpolationReport> {
    if dim % 2 == 1 || dim == 0 {
        return Err(Error::OddDimension(dim));
    }
    let mut rng = rng_for(seed, u64::MAX);
    let p = loop {
        let p = DMatrix::from_fn(dim, dim, |i, j| if i == j { 1.0 } else { 0.0 } + rng.random_range(-0.4..0.4));
        if p.clone().try_inverse().is_some() {
            break p;
        }
    };
    let omega_m = p.transpose() * SkewForm::<f64>::standard(dim / 2).to_dmatrix() * &p;
    let omega = SkewForm::new(from_dmatrix(&((&omega_m - omega_m.transpose()) * 0.5)))?;
    let failures: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let js: Result<Vec<_>> = (0..3).map(|_| random_compatible_j(&mut rng, &p)).collect();
            let Ok(js) = js else { return 3 };
            [0.25, 0.5, 0.75]
                .iter()
                .filter(|&&t| {
                    interpolate_tamed(&js[0], &js[1], &js[2], t, std::slice::from_ref(&omega))
                        .and_then(|j| crate::symplin::tames(&omega, &j))
                        .map_or(true, |ok| !ok)
                })
                .count()
        })
        .collect();
    Ok(InterpolationReport { trials, checks: 3 * trials, failures: failures.iter().sum(), seed })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CayleyReport {
    pub trials: usize,
    /// Largest `‖J − cayley_inverse(J₀, cayley_map(J₀, J))‖_max`.
    pub max_roundtrip: f64,
    /// Largest `‖AJ₀ + J₀A‖_max` over the images.
    pub max_anticommute: f64,
    /// Trials where the chart was undefined.
    pub domain_failures: usize,
    pub seed: u64,
}

impl CayleyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "trials": self.trials, "max_roundtrip": self.max_roundtrip, "max_anticommute": self.max_anticommute,
            "domain_failures": self.domain_failures, "seeds": {"base": self.seed, "count": self.trials},
        })
    }
}

/// Round trip through the Cayley chart centred at a random `ω`-compatible `J₀`, for random
/// `ω`-compatible `J` with `ω = PᵀΩP` fixed per suite.
pub fn cayley_roundtrip_suite(dim: usize, trials: usize, seed: u64) -> Result<CayleyReport> {
    if dim % 2 == 1 || dim == 0 {
        return Err(Error::OddDimension(dim));
    }
    let mut rng = rng_for(seed, u64::MAX);
    let p = DMatrix::from_fn(dim, dim, |i, j| if i == j { 1.0 } else { 0.0 } + rng.random_range(-0.4..0.4));
    let outcomes: Vec<Option<(f64, f64)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let j0 = random_compatible_j(&mut rng, &p).ok()?;
            let j = random_compatible_j(&mut rng, &p).ok()?;
            let a = crate::symplin::cayley_map(&j0, &j).ok()?;
            let m0 = j0.to_dmatrix();
            let anti = (&a * &m0 + &m0 * &a).abs().max();
            let back = crate::symplin::cayley_inverse(&j0, &a).ok()?;
            Some(((back.to_dmatrix() - j.to_dmatrix()).abs().max(), anti))
        })
        .collect();
    let ok: Vec<(f64, f64)> = outcomes.iter().flatten().copied().collect();
    Ok(CayleyReport {
        trials,
        max_roundtrip: ok.iter().map(|x| x.0).fold(0.0, f64::max),
        max_anticommute: ok.iter().map(|x| x.1).fold(0.0, f64::max),
        domain_failures: trials - ok.len(),
        seed,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleReport {
    /// `ω₀ ∧ ω₁ = 0` exactly.
    pub wedge_zero: bool,
    pub trials: usize,
    /// Trials where no `v` with `ω₁(v, Jv) ≤ 0` was found.
    pub survivors: usize,
    /// Largest `ω₁(v, Jv)` at the witness over all trials (unit `v`).
    pub worst_witness: f64,
    pub seed: u64,
}

impl CounterexampleReport {
    pub fn to_json(&self) -> Value {
        json!({
            "wedge_zero": self.wedge_zero, "trials": self.trials, "survivors": self.survivors,
            "worst_witness": self.worst_witness, "seeds": {"base": self.seed, "count": self.trials},
        })
    }
}

/// `ω₀ = dx₁∧dx₃ + dx₂∧dx₄`, `ω₁ = dx₂∧dx₁ + dx₃∧dx₄`.
pub fn remark_pair() -> (SkewForm<Rational>, SkewForm<Rational>) {
    let mk = |pairs: &[(usize, usize)]| {
        let mut m = vec![vec![rat_int(0); 4]; 4];
        for &(i, j) in pairs {
            m[i][j] = rat_int(1);
            m[j][i] = rat_int(-1);
        }
        SkewForm::new(m).expect("antisymmetric")
    };
    (mk(&[(0, 2), (1, 3)]), mk(&[(1, 0), (2, 3)]))
}

fn as_form(a: &SkewForm<Rational>, cf: &Coframe) -> Result<Form<Rational>> {
    Form::from_skew_matrix(cf, a.matrix())
}

/// For random `ω₀`-compatible `J`, the eigenvector of the smallest eigenvalue of the taming
/// matrix of `ω₁` is a vector with `ω₁(v, Jv) ≤ 0`.
pub fn cocompatible_counterexample_suite(trials: usize, seed: u64) -> Result<CounterexampleReport> {
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    let (a0, a1) = remark_pair();
    let cf = Coframe::new(["dx1", "dx2", "dx3", "dx4"])?;
    let wedge_zero = as_form(&a0, &cf)?.wedge(&as_form(&a1, &cf)?)?.is_zero();
    let f1 = a1.to_f64();
    // ω₀ is already Ω₄ in the coordinates (x₁, x₂ | x₃, x₄).
    let p = DMatrix::<f64>::identity(4, 4);
    let witnesses: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let j = if i == 0 { Ok(ComplexStructure::standard(2)) } else { random_compatible_j(&mut rng, &p) };
            match j.and_then(|j| taming_matrix(&f1, &j).map(|s| to_dmatrix(&s))) {
                Ok(s) => {
                    let eig = s.clone().symmetric_eigen();
                    let k = eig.eigenvalues.imin();
                    let v = eig.eigenvectors.column(k).into_owned();
                    (v.transpose() * &s * &v)[(0, 0)]
                }
                Err(_) => f64::INFINITY,
            }
        })
        .collect();
    let survivors = witnesses.iter().filter(|&&w| w > 1e-12).count();
    let worst_witness = witnesses.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(CounterexampleReport { wedge_zero, trials, survivors, worst_witness, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compatible_j_is_tamed() {
        let mut rng = rng_for(7, 0);
        let p = DMatrix::<f64>::identity(6, 6);
        let j = random_compatible_j(&mut rng, &p).unwrap();
        assert!(j.defect() < 1e-10);
        assert!(crate::symplin::tames(&SkewForm::standard(3), &j).unwrap());
    }

    #[test]
    fn counterexample_small() {
        let r = cocompatible_counterexample_suite(50, 1).unwrap();
        assert!(r.wedge_zero);
        assert_eq!(r.survivors, 0);
    }
}
