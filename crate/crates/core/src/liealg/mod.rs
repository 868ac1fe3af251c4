//! Finite-dimensional real Lie algebras with exact structure constants and
//! left-invariant forms via the Chevalley–Eilenberg differential.

pub mod certs;
pub mod geiges;
pub mod presets;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{blade_indices, Coframe, Form};
use crate::scalar::{Rational, Scalar};

pub use certs::{
    contact_check, geiges_pair_check, liouville_pair_check, weak_domination_ray_check,
    weak_domination_with, GeigesReport, PositivityCertificate, Verdict, Witness,
};
pub use presets::{preset, LiouvillePair, Preset};

/// `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    coframe: Coframe,
    /// `consts[i][j]` is the sparse vector `k ↦ c^k_{ij}`.
    consts: Vec<Vec<BTreeMap<usize, Rational>>>,
    /// `d` of each basis covector, cached.
    d_basis: Vec<Form<Rational>>,
}

impl LieAlgebra {
    /// Builds from the brackets `[e_i, e_j]` for `i < j`; unlisted brackets vanish.
    pub fn from_brackets<I>(names: &[&str], brackets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Vec<(usize, Rational)>)>,
    {
        let n = names.len();
        let mut consts = vec![vec![BTreeMap::new(); n]; n];
        for (i, j, v) in brackets {
            if i >= n || j >= n || v.iter().any(|(k, _)| *k >= n) {
                return Err(Error::DimensionMismatch { expected: n, got: i.max(j) + 1 });
            }
            for (k, c) in v {
                if c.is_zero() {
                    continue;
                }
                *consts[i][j].entry(k).or_insert_with(Rational::zero) += &c;
                *consts[j][i].entry(k).or_insert_with(Rational::zero) -= &c;
            }
        }
        Self::from_constants(names, consts)
    }

    /// Builds from a full table; fails if `c^k_{ij} ≠ -c^k_{ji}`.
    pub fn from_constants(names: &[&str], mut consts: Vec<Vec<BTreeMap<usize, Rational>>>) -> Result<Self> {
        let coframe = Coframe::new(names.iter().copied())?;
        let n = coframe.dim();
        if consts.len() != n || consts.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: consts.len() });
        }
        for row in consts.iter_mut() {
            for m in row.iter_mut() {
                m.retain(|_, c| !c.is_zero());
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let a = consts[i][j].get(&k).cloned().unwrap_or_else(Rational::zero);
                    let b = consts[j][i].get(&k).cloned().unwrap_or_else(Rational::zero);
                    if a + b != Rational::zero() {
                        return Err(Error::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        let mut g = LieAlgebra { coframe, consts, d_basis: vec![] };
        g.d_basis = (0..n).map(|k| g.compute_d_basis(k)).collect();
        Ok(g)
    }

    /// Direct sum `g ⊕ h`, with basis `g` first.
    pub fn direct_sum(&self, other: &LieAlgebra) -> Result<LieAlgebra> {
        let n = self.dim();
        let names: Vec<String> = self.names().iter().chain(other.names()).cloned().collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                brackets.push((i, j, self.bracket_basis(i, j)));
            }
        }
        for i in 0..other.dim() {
            for j in i + 1..other.dim() {
                let v = other.bracket_basis(i, j).into_iter().map(|(k, c)| (k + n, c)).collect();
                brackets.push((i + n, j + n, v));
            }
        }
        Self::from_brackets(&refs, brackets)
    }

    pub fn dim(&self) -> usize {
        self.coframe.dim()
    }

    /// `{"names": [...], "constants": c}` with `c[i][j][k] = c^k_{ij}` as `"p/q"` strings.
    pub fn to_json(&self) -> Value {
        let n = self.dim();
        let c: Vec<Vec<Vec<String>>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.constant(i, j, k).to_string()).collect()).collect())
            .collect();
        json!({"names": self.names(), "constants": c})
    }

    /// Coframe of dual basis covectors, named after the basis vectors.
    pub fn coframe(&self) -> &Coframe {
        &self.coframe
    }

    pub fn names(&self) -> &[String] {
        self.coframe.names()
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.consts[i][j].get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, Rational)> {
        self.consts[i][j].iter().map(|(k, c)| (*k, c.clone())).collect()
    }

    /// Bracket of arbitrary vectors.
    pub fn bracket<S: Scalar>(&self, x: &[S], y: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut out = vec![S::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                for (k, c) in &self.consts[i][j] {
                    out[*k] = out[*k].clone() + x[i].clone() * y[j].clone() * S::from_rational(c);
                }
            }
        }
        out
    }

    /// `d e^k = -Σ_{i<j} c^k_{ij} e^i ∧ e^j`, so that `dα(X, Y) = -α([X, Y])`.
    fn compute_d_basis(&self, k: usize) -> Form<Rational> {
        let n = self.dim();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if let Some(c) = self.consts[i][j].get(&k) {
                    terms.push((vec![i, j], -c.clone()));
                }
            }
        }
        if terms.is_empty() {
            return Form::zero(&self.coframe, 2);
        }
        Form::from_terms(&self.coframe, 2, terms).expect("valid indices")
    }

    pub fn d_basis(&self, k: usize) -> &Form<Rational> {
        &self.d_basis[k]
    }

    /// Chevalley–Eilenberg differential, extended as an antiderivation.
    pub fn ce_differential<S: Scalar>(&self, a: &Form<S>) -> Result<Form<S>> {
        if a.coframe() != &self.coframe {
            return Err(Error::CoframeMismatch("form is not on this algebra".into()));
        }
        let dim = self.dim();
        let mut out = Form::zero(&self.coframe, (a.degree() + 1).min(dim));
        if a.degree() >= dim {
            return Ok(out);
        }
        let dcache: Vec<Form<S>> = self.d_basis.iter().map(|f| f.map(S::from_rational)).collect();
        for (b, c) in a.terms() {
            let idx = blade_indices(b);
            for m in 0..idx.len() {
                let mut acc = Form::scalar(&self.coframe, if m % 2 == 1 { -c.clone() } else { c.clone() });
                for (p, &i) in idx.iter().enumerate() {
                    let factor = if p == m { dcache[i].clone() } else { Form::basis(&self.coframe, i) };
                    acc = acc.wedge(&factor)?;
                    if acc.is_zero() {
                        break;
                    }
                }
                out = out.try_add(&acc)?;
            }
        }
        Ok(out)
    }

    /// Exact Jacobi identity on all basis triples.
    pub fn jacobi_check(&self) -> bool {
        let n = self.dim();
        let e = |i: usize| -> Vec<Rational> {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::from_i64(1);
            v
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (x, y, z) = (e(i), e(j), e(k));
                    let t1 = self.bracket(&x, &self.bracket(&y, &z));
                    let t2 = self.bracket(&y, &self.bracket(&z, &x));
                    let t3 = self.bracket(&z, &self.bracket(&x, &y));
                    if (0..n).any(|l| !(t1[l].clone() + t2[l].clone() + t3[l].clone()).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `d ∘ d = 0` on all basis 1-forms and 2-forms.
    pub fn d_squared_check(&self) -> bool {
        let n = self.dim();
        let mut forms: Vec<Form<Rational>> = (0..n).map(|i| Form::basis(&self.coframe, i)).collect();
        for i in 0..n {
            for j in i + 1..n {
                forms.push(
                    Form::from_terms(&self.coframe, 2, [(vec![i, j], Rational::from_i64(1))]).expect("valid"),
                );
            }
        }
        forms.iter().all(|f| {
            self.ce_differential(f)
                .and_then(|d| self.ce_differential(&d))
                .map(|dd| dd.is_zero())
                .unwrap_or(false)
        })
    }

    /// Trace of `ad_x`; the algebra is unimodular iff this vanishes on the basis.
    pub fn ad_trace(&self, i: usize) -> Rational {
        (0..self.dim()).map(|k| self.constant(i, k, k)).fold(Rational::zero(), |a, b| a + b)
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim()).all(|i| self.ad_trace(i).is_zero())
    }

    /// Semidirect sum `ℝ^m ⋉_A ℝ^f` for pairwise commuting `f × f` matrices `A_1..A_m`:
    /// `[a_i, v_j] = Σ_k (A_i)_{kj} v_k`.
    pub fn semidirect_sum(
        base_names: &[&str],
        fiber_names: &[&str],
        action: &[Vec<Vec<Rational>>],
    ) -> Result<LieAlgebra> {
        let m = base_names.len();
        let f = fiber_names.len();
        if action.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: action.len() });
        }
        for a in action {
            if a.len() != f || a.iter().any(|r| r.len() != f) {
                return Err(Error::DimensionMismatch { expected: f, got: a.len() });
            }
        }
        for p in 0..m {
            for q in p + 1..m {
                let ab = matmul(&action[p], &action[q]);
                let ba = matmul(&action[q], &action[p]);
                if ab != ba {
                    return Err(Error::NonCommutingAction(p, q));
                }
            }
        }
        let names: Vec<&str> = base_names.iter().chain(fiber_names).copied().collect();
        let mut brackets = Vec::new();
        for (i, a) in action.iter().enumerate() {
            for j in 0..f {
                let v: Vec<(usize, Rational)> = (0..f)
                    .filter(|&k| !a[k][j].is_zero())
                    .map(|k| (m + k, a[k][j].clone()))
                    .collect();
                brackets.push((i, m + j, v));
            }
        }
        Self::from_brackets(&names, brackets)
    }
}

pub(crate) fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let p = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Rational::zero(); p]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += &a[i][k] * &bk[j];
            }
        }
    }
    out
}
