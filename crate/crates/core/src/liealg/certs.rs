//! Exact positivity certificates for contact forms, Liouville pairs and Geiges pairs.

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::liealg::LieAlgebra;
use crate::poly::{isolate_roots, nonpositive_point, sign_on_interval, QPoly, RootInterval};
use crate::scalar::{binomial, rat, rat_int, rational_to_json, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
    Indefinite,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Positive => "positive",
            Verdict::Negative => "negative",
            Verdict::Indefinite => "indefinite",
        }
    }

    fn from_sign(s: i8) -> Self {
        match s {
            1 => Verdict::Positive,
            -1 => Verdict::Negative,
            _ => Verdict::Indefinite,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// A single exact top coefficient.
    Exact { value: Rational },
    /// A polynomial certified on `[lo, hi]` (`hi = None` is `+∞`) by Sturm sequences.
    Sturm {
        poly: QPoly,
        lo: Rational,
        hi: Option<Rational>,
        roots: Vec<RootInterval>,
        /// A point with nonpositive value, for non-positive verdicts.
        violation: Option<Rational>,
    },
    /// Float fallback: sampled minimum and maximum.
    Grid { samples: usize, min: f64, argmin: f64, max: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityCertificate {
    pub verdict: Verdict,
    pub witness: Witness,
    pub orientation: Vec<String>,
}

impl PositivityCertificate {
    pub fn is_positive(&self) -> bool {
        self.verdict == Verdict::Positive
    }

    pub fn kind(&self) -> &'static str {
        match self.witness {
            Witness::Exact { .. } | Witness::Sturm { .. } => "exact",
            Witness::Grid { .. } => "grid",
        }
    }

    /// Recomputes the verdict from the stored witness alone.
    pub fn replay(&self) -> bool {
        match &self.witness {
            Witness::Exact { value } => Verdict::from_sign(value.signum_i()) == self.verdict,
            Witness::Sturm { poly, lo, hi, violation, .. } => {
                let v = sturm_verdict(poly, lo, hi.as_ref());
                if v != self.verdict {
                    return false;
                }
                match violation {
                    Some(x) => v != Verdict::Positive && poly.eval(x).signum_i() <= 0,
                    None => v != Verdict::Indefinite,
                }
            }
            Witness::Grid { min, max, .. } => {
                let v = if *min > 0.0 {
                    Verdict::Positive
                } else if *max < 0.0 {
                    Verdict::Negative
                } else {
                    Verdict::Indefinite
                };
                v == self.verdict
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let witness = match &self.witness {
            Witness::Exact { value } => json!({"type": "exact", "value": rational_to_json(value)}),
            Witness::Sturm { poly, lo, hi, roots, violation } => json!({
                "type": "sturm",
                "poly": poly.to_json(),
                "interval": [rational_to_json(lo), hi.as_ref().map_or(json!("inf"), rational_to_json)],
                "roots": roots.iter().map(RootInterval::to_json).collect::<Vec<_>>(),
                "violation": violation.as_ref().map(rational_to_json),
            }),
            Witness::Grid { samples, min, argmin, max } => {
                json!({"type": "grid", "samples": samples, "min": min, "argmin": argmin, "max": max})
            }
        };
        json!({
            "verdict": self.verdict.as_str(),
            "kind": self.kind(),
            "orientation": self.orientation,
            "witness": witness,
        })
    }
}

fn sturm_verdict(p: &QPoly, lo: &Rational, hi: Option<&Rational>) -> Verdict {
    match sign_on_interval(p, lo, hi) {
        Some(s) => Verdict::from_sign(s),
        None => Verdict::Indefinite,
    }
}

fn sturm_certificate(p: QPoly, lo: Rational, hi: Option<Rational>, orientation: Vec<String>) -> PositivityCertificate {
    let verdict = sturm_verdict(&p, &lo, hi.as_ref());
    let search_hi = match &hi {
        Some(h) => h.clone(),
        None => cauchy_bound(&p) + &lo,
    };
    let roots = isolate_roots(&p, &lo, &search_hi, &rat(1, 1 << 20));
    let violation = match verdict {
        Verdict::Positive => None,
        Verdict::Negative => Some(lo.clone()),
        Verdict::Indefinite => nonpositive_point(&p, &lo, &search_hi),
    };
    PositivityCertificate { verdict, witness: Witness::Sturm { poly: p, lo, hi, roots, violation }, orientation }
}

/// `1 + max |a_i / a_n|`, an upper bound for the absolute values of the real roots.
fn cauchy_bound(p: &QPoly) -> Rational {
    let lead = p.leading();
    let m = p
        .coeffs()
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    m + rat_int(1)
}

fn check_one_form(g: &LieAlgebra, a: &Form<Rational>) -> Result<()> {
    if a.coframe() != g.coframe() {
        return Err(Error::CoframeMismatch("form is not on this algebra".into()));
    }
    if a.degree() != 1 {
        return Err(Error::DegreeOutOfRange { degree: a.degree(), dim: 1 });
    }
    Ok(())
}

fn odd_half(g: &LieAlgebra) -> Result<usize> {
    if g.dim().is_multiple_of(2) {
        return Err(Error::EvenDimension(g.dim()));
    }
    Ok((g.dim() - 1) / 2)
}

/// Sign of `α ∧ (dα)^m` against the basis orientation (`dim = 2m + 1`).
pub fn contact_check(g: &LieAlgebra, a: &Form<Rational>) -> Result<PositivityCertificate> {
    check_one_form(g, a)?;
    let m = odd_half(g)?;
    let da = g.ce_differential(a)?;
    let value = a.wedge(&da.power(m))?.top_coefficient();
    Ok(PositivityCertificate {
        verdict: Verdict::from_sign(value.signum_i()),
        witness: Witness::Exact { value },
        orientation: g.names().to_vec(),
    })
}

/// Coefficients `p_k` of `P(C₊, C₋) = Σ p_k C₊^k C₋^{n-k}` where
/// `P = top[(C₊α₊ - C₋α₋) ∧ (C₊dα₊ + C₋dα₋)^{n-1}]`, `dim = 2n - 1`.
pub fn liouville_polynomial(g: &LieAlgebra, ap: &Form<Rational>, am: &Form<Rational>) -> Result<Vec<Rational>> {
    check_one_form(g, ap)?;
    check_one_form(g, am)?;
    let n = odd_half(g)? + 1;
    let dp = g.ce_differential(ap)?;
    let dm = g.ce_differential(am)?;
    let pp: Vec<Form<Rational>> = (0..n).map(|j| dp.power(j)).collect();
    let pm: Vec<Form<Rational>> = (0..n).map(|j| dm.power(j)).collect();
    let mut p = vec![Rational::zero(); n + 1];
    for j in 0..n {
        let mixed = pp[j].wedge(&pm[n - 1 - j])?;
        if mixed.is_zero() {
            continue;
        }
        let b = rat_int(binomial((n - 1) as u64, j as u64) as i64);
        let plus = ap.wedge(&mixed)?.top_coefficient();
        let minus = am.wedge(&mixed)?.top_coefficient();
        p[j + 1] += &b * plus;
        p[j] -= &b * minus;
    }
    Ok(p)
}

/// Certifies `P(x, 1 - x) > 0` on `[0, 1]` exactly.
pub fn liouville_pair_check(g: &LieAlgebra, ap: &Form<Rational>, am: &Form<Rational>) -> Result<PositivityCertificate> {
    let p = liouville_polynomial(g, ap, am)?;
    let n = p.len() - 1;
    let x = QPoly::x();
    let one_minus = QPoly::from_ints(&[1, -1]);
    let mut q = QPoly::zero();
    for (k, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        q = q.add(&x.pow(k).mul(&one_minus.pow(n - k)).scale(c));
    }
    Ok(sturm_certificate(q, rat_int(0), Some(rat_int(1)), g.names().to_vec()))
}

/// Outcome of the Geiges-pair test with the values of every mixed term.
#[derive(Clone, Debug, PartialEq)]
pub struct GeigesReport {
    pub is_geiges: bool,
    /// `top(α₊ ∧ dα₊^n)` and `top(α₋ ∧ dα₋^n)`.
    pub volumes: (Rational, Rational),
    /// `(sign, k, top(α_± ∧ dα_±^k ∧ dα_∓^{n-k}))` for `0 ≤ k ≤ n - 1`.
    pub mixed: Vec<(i8, usize, Rational)>,
}

impl GeigesReport {
    pub fn to_json(&self) -> Value {
        json!({
            "is_geiges": self.is_geiges,
            "volumes": [rational_to_json(&self.volumes.0), rational_to_json(&self.volumes.1)],
            "mixed": self.mixed.iter().map(|(s, k, v)| json!({
                "sign": s, "k": k, "value": rational_to_json(v)
            })).collect::<Vec<_>>(),
        })
    }
}

/// `α₊∧dα₊^n = -α₋∧dα₋^n > 0` and `α_± ∧ dα_±^k ∧ dα_∓^{n-k} = 0` for `k < n` (`dim = 2n + 1`).
pub fn geiges_pair_check(g: &LieAlgebra, ap: &Form<Rational>, am: &Form<Rational>) -> Result<GeigesReport> {
    check_one_form(g, ap)?;
    check_one_form(g, am)?;
    let n = odd_half(g)?;
    let dp = g.ce_differential(ap)?;
    let dm = g.ce_differential(am)?;
    let pp: Vec<Form<Rational>> = (0..=n).map(|j| dp.power(j)).collect();
    let pm: Vec<Form<Rational>> = (0..=n).map(|j| dm.power(j)).collect();
    let vp = ap.wedge(&pp[n])?.top_coefficient();
    let vm = am.wedge(&pm[n])?.top_coefficient();
    let mut mixed = Vec::new();
    for k in 0..n {
        let a = ap.wedge(&pp[k].wedge(&pm[n - k])?)?.top_coefficient();
        let b = am.wedge(&pm[k].wedge(&pp[n - k])?)?.top_coefficient();
        mixed.push((1, k, a));
        mixed.push((-1, k, b));
    }
    let is_geiges =
        vp.is_positive() && vp == -vm.clone() && mixed.iter().all(|(_, _, v)| v.is_zero());
    Ok(GeigesReport { is_geiges, volumes: (vp, vm), mixed })
}

/// Certificate for `α ∧ (Ω + τ dα)^{n-1} > 0` for all `τ ≥ 0`, split into the
/// symplectic half (`τ = 0`) and the ray half (`τ > 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct WeakDominationCertificate {
    pub symplectic_half: bool,
    pub ray_half: bool,
    pub certificate: PositivityCertificate,
}

impl WeakDominationCertificate {
    pub fn passes(&self) -> bool {
        self.symplectic_half && self.ray_half
    }

    pub fn to_json(&self) -> Value {
        json!({
            "symplectic_half": self.symplectic_half,
            "ray_half": self.ray_half,
            "certificate": self.certificate.to_json(),
        })
    }
}

/// Weak-domination test on an odd-dimensional algebra, with `dα` from the CE differential.
pub fn weak_domination_ray_check<S: Scalar>(
    g: &LieAlgebra,
    a: &Form<S>,
    omega: &Form<S>,
) -> Result<WeakDominationCertificate> {
    let da = g.ce_differential(a)?;
    weak_domination_with(a, &da, omega)
}

/// Weak-domination test with an explicitly supplied `dα` (for forms that are not left-invariant).
pub fn weak_domination_with<S: Scalar>(
    a: &Form<S>,
    da: &Form<S>,
    omega: &Form<S>,
) -> Result<WeakDominationCertificate> {
    let dim = a.coframe().dim();
    if dim.is_multiple_of(2) {
        return Err(Error::EvenDimension(dim));
    }
    if omega.degree() != 2 || da.degree() != 2 || a.degree() != 1 {
        return Err(Error::Precondition("expected a 1-form and two 2-forms".into()));
    }
    let m = (dim - 1) / 2;
    // Coefficient of τ^j: C(m, j) top(α ∧ dα^j ∧ Ω^{m-j}).
    let mut coeffs = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let t = a.wedge(&da.power(j).wedge(&omega.power(m - j))?)?.top_coefficient();
        coeffs.push(t * S::from_i64(binomial(m as u64, j as u64) as i64));
    }
    let orientation = a.coframe().names().to_vec();
    if S::EXACT {
        let p = QPoly::new(coeffs.iter().map(|c| c.to_rational().expect("exact scalar")).collect());
        let symplectic_half = p.eval(&rat_int(0)).is_positive();
        let cert = sturm_certificate(p.clone(), rat_int(0), None, orientation);
        // Positivity on (0, ∞): no roots there and positive leading coefficient.
        let ray_half = p.leading().is_positive()
            && crate::poly::SturmSequence::new(&p).count_roots_above(&rat_int(0)) == 0;
        Ok(WeakDominationCertificate { symplectic_half, ray_half, certificate: cert })
    } else {
        let c: Vec<f64> = coeffs.iter().map(Scalar::to_f64).collect();
        let eval = |t: f64| c.iter().rev().fold(0.0, |acc, x| acc * t + x);
        let scale = c.iter().map(|x| x.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let tol = 1e-12 * scale;
        let samples = 4096;
        let (mut min, mut argmin, mut max) = (f64::INFINITY, 0.0, f64::NEG_INFINITY);
        let mut ray_min = f64::INFINITY;
        for i in 0..=samples {
            // τ spread over [0, ∞) via τ = x / (1 - x).
            let x = i as f64 / (samples as f64 + 1.0);
            let t = x / (1.0 - x);
            let v = eval(t) / (1.0 + t).powi(m as i32);
            if v < min {
                min = v;
                argmin = t;
            }
            max = max.max(v);
            if i > 0 {
                ray_min = ray_min.min(v);
            }
        }
        let lead = *c.last().unwrap_or(&0.0);
        let symplectic_half = c[0] > tol;
        let ray_half = ray_min > 0.0 && lead > tol;
        let verdict = if min > 0.0 && lead > 0.0 {
            Verdict::Positive
        } else if max < 0.0 {
            Verdict::Negative
        } else {
            Verdict::Indefinite
        };
        Ok(WeakDominationCertificate {
            symplectic_half,
            ray_half,
            certificate: PositivityCertificate {
                verdict,
                witness: Witness::Grid { samples: samples + 1, min, argmin, max },
                orientation,
            },
        })
    }
}
