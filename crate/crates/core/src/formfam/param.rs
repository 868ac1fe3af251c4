//! Forms on `(parameter coordinates) × (flat coordinates) × G` with profile coefficients.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::{blade_indices, wedge_sign, Blade, Coframe, Form};
use crate::formfam::profile::ProfileFn;
use crate::liealg::LieAlgebra;
use crate::scalar::{Rational, Scalar};

/// Coframe layout: closed coordinate differentials first (some of them carrying
/// parameters the coefficients depend on), then the dual basis of a Lie algebra.
#[derive(Clone, Debug)]
pub struct Layout {
    pub coframe: Coframe,
    /// `vars[i]` is the coframe index of `dp_i`.
    pub vars: Vec<usize>,
    pub algebra: LieAlgebra,
    /// Index of the first algebra covector.
    pub offset: usize,
    /// `d` of each coframe covector (zero for coordinates).
    d_basis: Vec<Form<Rational>>,
}

impl Layout {
    /// `coords` are the coordinate names (e.g. `["ds", "dt"]`); `vars` lists which of them
    /// are parameters, in parameter order.
    pub fn new(coords: &[&str], vars: &[&str], algebra: &LieAlgebra) -> Result<Self> {
        let names: Vec<String> =
            coords.iter().map(|s| s.to_string()).chain(algebra.names().iter().cloned()).collect();
        let coframe = Coframe::new(names)?;
        let vars = vars
            .iter()
            .map(|v| {
                coords.iter().position(|c| c == v).ok_or_else(|| Error::Precondition(format!("{v} is not a coordinate")))
            })
            .collect::<Result<Vec<_>>>()?;
        let offset = coords.len();
        let map: Vec<usize> = (0..algebra.dim()).map(|i| i + offset).collect();
        let mut d_basis = vec![Form::zero(&coframe, 2); offset];
        for k in 0..algebra.dim() {
            d_basis.push(algebra.d_basis(k).embed(&coframe, &map)?);
        }
        Ok(Layout { coframe, vars, algebra: algebra.clone(), offset, d_basis })
    }

    pub fn dim(&self) -> usize {
        self.coframe.dim()
    }

    /// Moves a form on the algebra into this coframe.
    pub fn lift<S: Scalar>(&self, a: &Form<S>) -> Result<Form<S>> {
        if a.coframe() != self.algebra.coframe() {
            return Err(Error::CoframeMismatch("form is not on the layout's algebra".into()));
        }
        let map: Vec<usize> = (0..self.algebra.dim()).map(|i| i + self.offset).collect();
        a.embed(&self.coframe, &map)
    }

    /// Basis covector by name.
    pub fn covector(&self, name: &str) -> Result<Form<Rational>> {
        let i = self.coframe.index_of(name).ok_or_else(|| Error::Precondition(format!("no covector {name}")))?;
        Ok(Form::basis(&self.coframe, i))
    }

    /// Exact `d` of a blade.
    fn d_blade(&self, b: Blade) -> Form<Rational> {
        let idx = blade_indices(b);
        let mut out = Form::zero(&self.coframe, (idx.len() + 1).min(self.dim()));
        for m in 0..idx.len() {
            if self.d_basis[idx[m]].is_zero() {
                continue;
            }
            let one = Rational::from_i64(if m % 2 == 1 { -1 } else { 1 });
            let mut acc = Form::scalar(&self.coframe, one);
            for (p, &i) in idx.iter().enumerate() {
                let f = if p == m { self.d_basis[i].clone() } else { Form::basis(&self.coframe, i) };
                acc = acc.wedge(&f).expect("same coframe");
            }
            out = out.try_add(&acc).expect("same coframe");
        }
        out
    }
}

/// `Σ_I c_I(p) e^I` with `c_I` profile functions.
#[derive(Clone, Debug)]
pub struct ParamForm {
    layout: Layout,
    degree: usize,
    terms: BTreeMap<Blade, ProfileFn>,
}

impl ParamForm {
    pub fn zero(layout: &Layout, degree: usize) -> Self {
        ParamForm { layout: layout.clone(), degree, terms: BTreeMap::new() }
    }

    /// `c(p) · a` for a constant form `a` on the layout's coframe.
    pub fn from_form(layout: &Layout, c: ProfileFn, a: &Form<Rational>) -> Result<Self> {
        if a.coframe() != &layout.coframe {
            return Err(Error::CoframeMismatch("form is not on the layout coframe".into()));
        }
        let mut out = Self::zero(layout, a.degree());
        for (b, q) in a.terms() {
            out.accumulate(b, c.clone() * q.to_f64());
        }
        Ok(out)
    }

    /// `c(p) · a` for a form `a` on the algebra.
    pub fn from_algebra_form(layout: &Layout, c: ProfileFn, a: &Form<Rational>) -> Result<Self> {
        Self::from_form(layout, c, &layout.lift(a)?)
    }

    /// `c(p) · e^i` for a named covector.
    pub fn covector(layout: &Layout, c: ProfileFn, name: &str) -> Result<Self> {
        Self::from_form(layout, c, &layout.covector(name)?)
    }

    fn accumulate(&mut self, b: Blade, c: ProfileFn) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&b) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(b, v);
        }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn coframe(&self) -> &Coframe {
        &self.layout.coframe
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn try_add(&self, o: &ParamForm) -> Result<ParamForm> {
        if o.layout.coframe != self.layout.coframe {
            return Err(Error::CoframeMismatch("param forms on different coframes".into()));
        }
        if o.degree != self.degree && !o.terms.is_empty() && !self.terms.is_empty() {
            return Err(Error::DegreeOutOfRange { degree: o.degree, dim: self.degree });
        }
        let mut out = self.clone();
        if self.terms.is_empty() {
            out.degree = o.degree;
        }
        for (b, c) in &o.terms {
            out.accumulate(*b, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ProfileFn) -> ParamForm {
        let mut out = Self::zero(&self.layout, self.degree);
        for (b, v) in &self.terms {
            out.accumulate(*b, v.clone() * c.clone());
        }
        out
    }

    /// Exterior derivative: `Σ_i ∂_i c dp_i ∧ e^I + c d(e^I)`.
    pub fn d_param(&self) -> ParamForm {
        let dim = self.layout.dim();
        let mut out = Self::zero(&self.layout, (self.degree + 1).min(dim));
        if self.degree >= dim {
            return out;
        }
        for (b, c) in &self.terms {
            for (i, &vi) in self.layout.vars.iter().enumerate() {
                let dc = c.partial(i);
                if dc.is_zero() {
                    continue;
                }
                if let Some(neg) = wedge_sign(1 << vi, *b) {
                    out.accumulate((1 << vi) | b, if neg { -dc } else { dc });
                }
            }
            for (bb, q) in self.layout.d_blade(*b).terms() {
                out.accumulate(bb, c.clone() * q.to_f64());
            }
        }
        out
    }

    /// Pointwise value.
    pub fn eval(&self, p: &[f64]) -> Form<f64> {
        let terms: Vec<(Vec<usize>, f64)> =
            self.terms.iter().map(|(b, c)| (blade_indices(*b), c.eval(p))).filter(|(_, v)| *v != 0.0).collect();
        if terms.is_empty() {
            return Form::zero(&self.layout.coframe, self.degree);
        }
        Form::from_terms(&self.layout.coframe, self.degree, terms).expect("valid blades")
    }

    /// `sup |d(d a)|` over the given points.
    pub fn dd_sup(&self, points: &[Vec<f64>]) -> f64 {
        let dd = self.d_param().d_param();
        points.iter().map(|p| dd.eval(p).max_abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::preset;

    #[test]
    fn d_of_sin_dt() {
        let g = preset("totreal:1").unwrap().algebra;
        let l = Layout::new(&["ds", "dt"], &["ds"], &g).unwrap();
        let a = ParamForm::covector(&l, ProfileFn::s().sin(), "dt").unwrap();
        let da = a.d_param().eval(&[0.7]);
        assert!((da.coefficient(&[0, 1]) - 0.7f64.cos()).abs() < 1e-15);
        assert_eq!(da.num_terms(), 1);
    }

    #[test]
    fn leibniz_on_algebra_form() {
        let p = preset("sol:2,1,1,1").unwrap();
        let g = &p.algebra;
        let (ap, _) = p.pair.clone().unwrap();
        let l = Layout::new(&["ds"], &["ds"], g).unwrap();
        let beta = ParamForm::from_algebra_form(&l, ProfileFn::s().exp(), &ap).unwrap();
        let s = 0.3f64;
        let lhs = beta.d_param().eval(&[s]);
        let ds: Form<f64> = Form::basis(&l.coframe, 0);
        let a = l.lift(&ap.to_f64()).unwrap();
        let da = l.lift(&g.ce_differential(&ap).unwrap().to_f64()).unwrap();
        let rhs = (&ds.wedge(&a).unwrap() + &da).scale(&s.exp());
        assert!((&lhs - &rhs).max_abs() < 1e-14);
    }

    #[test]
    fn d_squared_vanishes() {
        let p = preset("totreal:3").unwrap();
        let (ap, am) = p.pair.clone().unwrap();
        let l = Layout::new(&["ds", "dt"], &["ds", "dt"], &p.algebra).unwrap();
        let f = ProfileFn::var(0).exp() * ProfileFn::var(1).sin();
        let g = (ProfileFn::var(0) * ProfileFn::var(1)).cos();
        let a = ParamForm::from_algebra_form(&l, f, &ap)
            .unwrap()
            .try_add(&ParamForm::from_algebra_form(&l, g, &am).unwrap())
            .unwrap();
        let pts: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 * 0.1 - 1.0, 0.3 * i as f64]).collect();
        assert!(a.dd_sup(&pts) < 1e-9);
    }
}
