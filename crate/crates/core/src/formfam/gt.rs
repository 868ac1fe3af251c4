//! Giroux torsion forms `λ = f(s) α₊ + g(s) α₋ + h(s) dt` on `ℝ × S¹ × G` and their Reeb fields.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::formfam::param::{Layout, ParamForm};
use crate::formfam::profile::ProfileFn;
use crate::formfam::{certify, contact_volume, grid_points, GridCertificate};
use crate::liealg::{liouville_pair_check, LiouvillePair};
use crate::scalar::Scalar;

/// `(f, g, h)` over a pair on `[s₀, s₁]`; coframe `(ds, dt, G)`.
#[derive(Clone, Debug)]
pub struct ProfileTriple {
    pub f: ProfileFn,
    pub g: ProfileFn,
    pub h: ProfileFn,
    pub pair: LiouvillePair,
    pub interval: (f64, f64),
    pub layout: Layout,
    /// Non-fatal findings, e.g. the pair failing its Liouville certificate.
    pub warnings: Vec<String>,
}

impl ProfileTriple {
    pub fn new(f: ProfileFn, g: ProfileFn, h: ProfileFn, pair: &LiouvillePair, interval: (f64, f64)) -> Result<Self> {
        let (lo, hi) = interval;
        if !(lo < hi) {
            return Err(Error::Precondition("empty parameter interval".into()));
        }
        for p in [&f, &g, &h] {
            if p.arity() > 1 {
                return Err(Error::Precondition("triple profiles take one parameter".into()));
            }
            p.verify_derivative(lo, hi)?;
        }
        for s in grid_points(lo, hi, 1024, true) {
            let (fv, gv) = (f.eval1(s), g.eval1(s));
            if fv < -1e-12 || gv < -1e-12 || fv.abs() + gv.abs() <= 1e-12 {
                return Err(Error::Precondition(format!("need f, g ≥ 0 not both zero; fails at s = {s}")));
            }
        }
        let layout = Layout::new(&["ds", "dt"], &["ds"], &pair.algebra)?;
        Ok(ProfileTriple { f, g, h, pair: pair.clone(), interval, layout, warnings: vec![] })
    }

    pub fn lambda(&self) -> ParamForm {
        let l = &self.layout;
        let a = ParamForm::from_algebra_form(l, self.f.clone(), &self.pair.plus).expect("pair on algebra");
        let b = ParamForm::from_algebra_form(l, self.g.clone(), &self.pair.minus).expect("pair on algebra");
        let c = ParamForm::covector(l, self.h.clone(), "dt").expect("dt in layout");
        a.try_add(&b).and_then(|x| x.try_add(&c)).expect("same layout")
    }

    pub fn orientation(&self) -> Vec<String> {
        self.layout.coframe.names().to_vec()
    }
}

/// `λ_GT` with `f = (1 + cos s)/2`, `g = (1 − cos s)/2`, `h = sin s` on `[0, 2kπ]`.
pub fn gt_form(pair: &LiouvillePair, k: u32) -> Result<ProfileTriple> {
    if k == 0 {
        return Err(Error::Precondition("k ≥ 1".into()));
    }
    let s = ProfileFn::s();
    let f = s.clone().cos() * 0.5 + 0.5;
    let g = -(s.clone().cos() * 0.5) + 0.5;
    let h = s.sin();
    let mut t = ProfileTriple::new(f, g, h, pair, (0.0, 2.0 * PI * k as f64))?;
    match liouville_pair_check(&pair.algebra, &pair.plus, &pair.minus) {
        Ok(c) if c.is_positive() => {}
        Ok(c) => t.warnings.push(format!("pair {} is not a Liouville pair ({})", pair.id, c.verdict.as_str())),
        Err(e) => t.warnings.push(format!("pair {}: {e}", pair.id)),
    }
    Ok(t)
}

/// `cos(ks) dθ + sin(ks) dt` on `[0, 2π]`, over the pair `±dθ`.
pub fn t3_form(k: u32) -> Result<ProfileTriple> {
    if k == 0 {
        return Err(Error::Precondition("k ≥ 1".into()));
    }
    let pair = LiouvillePair::from_preset("totreal:1")?;
    let ks = ProfileFn::linear(k as f64, 0.0);
    let f = ks.clone().cos() * 0.5 + 0.5;
    let g = -(ks.clone().cos() * 0.5) + 0.5;
    ProfileTriple::new(f, g, ks.sin(), &pair, (0.0, 2.0 * PI))
}

/// Sign of `λ ∧ (dλ)^n` over `grid_n` samples of the interval, plus endpoints and `jπ/2`.
pub fn contact_grid_check(form: &ParamForm, interval: (f64, f64), grid_n: usize) -> Result<GridCertificate> {
    if form.coframe().dim().is_multiple_of(2) {
        return Err(Error::EvenDimension(form.coframe().dim()));
    }
    if form.degree() != 1 {
        return Err(Error::Precondition("contact check needs a 1-form".into()));
    }
    if grid_n == 0 {
        return Err(Error::Precondition("empty grid".into()));
    }
    let dform = form.d_param();
    let pts: Vec<Vec<f64>> = grid_points(interval.0, interval.1, grid_n, true).into_iter().map(|s| vec![s]).collect();
    Ok(certify(&pts, form.coframe().names().to_vec(), |p| contact_volume(&form.eval(p), &dform.eval(p))))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReebResult {
    pub s: f64,
    /// Component along the algebra.
    pub x: Vec<f64>,
    pub u: f64,
    pub branch: &'static str,
    /// `|A x − b|` of the stacked system.
    pub lstsq_residual: f64,
    /// `|λ(R) − 1|`.
    pub r1: f64,
    /// `sup |ι_R dλ|`.
    pub r2: f64,
}

impl ReebResult {
    /// `R` in the coframe `(ds, dt, G)`.
    pub fn vector(&self) -> Vec<f64> {
        let mut v = vec![0.0, self.u];
        v.extend(&self.x);
        v
    }

    pub fn to_json(&self) -> Value {
        json!({
            "s": self.s, "x": self.x, "u": self.u, "branch": self.branch,
            "lstsq_residual": self.lstsq_residual, "r1": self.r1, "r2": self.r2,
        })
    }
}

/// Precomputed data for repeated Reeb solves on one triple.
pub struct ReebSolver<'a> {
    triple: &'a ProfileTriple,
    lambda: ParamForm,
    dlambda: ParamForm,
    df: ProfileFn,
    dg: ProfileFn,
    dh: ProfileFn,
    ap: Vec<f64>,
    am: Vec<f64>,
    dap: Vec<Vec<f64>>,
    dam: Vec<Vec<f64>>,
}

impl<'a> ReebSolver<'a> {
    pub fn new(triple: &'a ProfileTriple) -> Self {
        let pair = &triple.pair;
        let m = pair.dim();
        let cov = |a: &Form<_>| -> Vec<f64> { (0..m).map(|i| Scalar::to_f64(&a.coefficient(&[i]))).collect() };
        let mat = |a: &Form<crate::scalar::Rational>| -> Vec<Vec<f64>> {
            if a.is_zero() {
                return vec![vec![0.0; m]; m];
            }
            a.skew_matrix().expect("2-form").iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect()
        };
        let lambda = triple.lambda();
        ReebSolver {
            triple,
            dlambda: lambda.d_param(),
            lambda,
            df: triple.f.deriv(),
            dg: triple.g.deriv(),
            dh: triple.h.deriv(),
            ap: cov(&pair.plus),
            am: cov(&pair.minus),
            dap: mat(&pair.d_plus()),
            dam: mat(&pair.d_minus()),
        }
    }

    fn values(&self, s: f64) -> [f64; 6] {
        let t = self.triple;
        [t.f.eval1(s), t.g.eval1(s), t.h.eval1(s), self.df.eval1(s), self.dg.eval1(s), self.dh.eval1(s)]
    }

    /// Solves `(hf' − h'f) α₊(X) + (hg' − h'g) α₋(X) = −h'`, `ι_X(f dα₊ + g dα₋) = 0`.
    fn solve_x(&self, s: f64) -> (Vec<f64>, f64) {
        let [f, g, h, df, dg, dh] = self.values(s);
        let m = self.ap.len();
        let a = DMatrix::from_fn(m + 1, m, |r, c| {
            if r == 0 {
                (h * df - dh * f) * self.ap[c] + (h * dg - dh * g) * self.am[c]
            } else {
                // Row j of ι_X W: Σ_i X_i W_ij.
                f * self.dap[c][r - 1] + g * self.dam[c][r - 1]
            }
        });
        let mut b = DVector::zeros(m + 1);
        b[0] = -dh;
        let svd = a.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let x = svd.solve(&b, 1e-12 * smax.max(1e-300)).expect("u and v computed");
        let res = (&a * &x - &b).amax();
        (x.iter().copied().collect(), res)
    }

    fn pair_values(&self, x: &[f64]) -> (f64, f64) {
        let ap: f64 = self.ap.iter().zip(x).map(|(a, b)| a * b).sum();
        let am: f64 = self.am.iter().zip(x).map(|(a, b)| a * b).sum();
        (ap, am)
    }

    /// `u` from both branch formulas, where each is defined.
    pub fn u_branches(&self, s: f64) -> (Option<f64>, Option<f64>) {
        let [f, g, h, df, dg, dh] = self.values(s);
        let (x, _) = self.solve_x(s);
        let (ap, am) = self.pair_values(&x);
        let hb = (h != 0.0).then(|| (1.0 - f * ap - g * am) / h);
        let db = (dh != 0.0).then(|| -(df * ap + dg * am) / dh);
        (hb, db)
    }

    pub fn solve(&self, s: f64, tol: f64) -> Result<ReebResult> {
        let [f, g, h, df, dg, dh] = self.values(s);
        if h.abs() < 1e-12 && dh.abs() < 1e-12 {
            return Err(Error::Precondition(format!("h and h' both vanish at s = {s}")));
        }
        let (x, lstsq_residual) = self.solve_x(s);
        if lstsq_residual > tol {
            return Err(Error::Numerical(format!(
                "Reeb system inconsistent at s = {s} (residual {lstsq_residual:e}); form not contact there"
            )));
        }
        let (ap, am) = self.pair_values(&x);
        let (u, branch) = if h.abs() > 1e-8 {
            ((1.0 - f * ap - g * am) / h, "h")
        } else {
            (-(df * ap + dg * am) / dh, "h'")
        };
        let mut r = ReebResult { s, x, u, branch, lstsq_residual, r1: 0.0, r2: 0.0 };
        let v = r.vector();
        let lam = self.lambda.eval(&[s]);
        let dlam = self.dlambda.eval(&[s]);
        r.r1 = (lam.interior(&v)?.scalar_value() - 1.0).abs();
        r.r2 = dlam.interior(&v)?.max_abs();
        if r.r1 > tol || r.r2 > tol {
            return Err(Error::Numerical(format!(
                "Reeb residuals at s = {s}: |λ(R)−1| = {:e}, |ι_R dλ| = {:e}",
                r.r1, r.r2
            )));
        }
        Ok(r)
    }
}

/// Reeb field `R = X + u ∂_t` of the triple's form at `s`.
pub fn reeb_field(triple: &ProfileTriple, s: f64, tol: f64) -> Result<ReebResult> {
    ReebSolver::new(triple).solve(s, tol)
}

/// Checks `sin s · (cot s dθ + dt) = cos s dθ + sin s dt` on `grid_n` interior points of `(0, π)`;
/// returns the largest coefficient discrepancy.
pub fn ideal_annulus_check(grid_n: usize) -> Result<f64> {
    let pair = LiouvillePair::from_preset("totreal:1")?;
    let layout = Layout::new(&["ds", "dt"], &["ds"], &pair.algebra)?;
    let cf = &layout.coframe;
    let dtheta: Form<f64> = Form::basis(cf, 2);
    let dt: Form<f64> = Form::basis(cf, 1);
    let mut worst: f64 = 0.0;
    for i in 0..grid_n {
        let s = PI * (i as f64 + 0.5) / grid_n as f64;
        let lhs = (&dtheta.scale(&(s.cos() / s.sin())) + &dt).scale(&s.sin());
        let rhs = &dtheta.scale(&s.cos()) + &dt.scale(&s.sin());
        worst = worst.max((&lhs - &rhs).max_abs());
    }
    Ok(worst)
}

/// With `φ(s) = ln((1 + cos s)/sin s)`, compares `sin s · [dt + ½(e^φ α₊ + e^{−φ} α₋)]`
/// against `λ_GT` on `grid_n` interior points of `(0, π)`; returns the largest discrepancy.
pub fn gt_reparam_check(pair: &LiouvillePair, grid_n: usize) -> Result<f64> {
    let t = gt_form(pair, 1)?;
    let lam = t.lambda();
    let l = &t.layout;
    let ap = l.lift(&pair.plus.to_f64())?;
    let am = l.lift(&pair.minus.to_f64())?;
    let dt: Form<f64> = Form::basis(&l.coframe, 1);
    let mut worst: f64 = 0.0;
    for i in 0..grid_n {
        let s = PI * (i as f64 + 0.5) / grid_n as f64;
        let phi = ((1.0 + s.cos()) / s.sin()).ln();
        let inner = &(&ap.scale(&(0.5 * phi.exp())) + &am.scale(&(0.5 * (-phi).exp()))) + &dt;
        let lhs = inner.scale(&s.sin());
        worst = worst.max((&lhs - &lam.eval(&[s])).max_abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_give_the_pair() {
        let pair = LiouvillePair::from_preset("sol:2,1,1,1").unwrap();
        let t = gt_form(&pair, 1).unwrap();
        let lam = t.lambda();
        let ap = t.layout.lift(&pair.plus.to_f64()).unwrap();
        let am = t.layout.lift(&pair.minus.to_f64()).unwrap();
        assert!((&lam.eval(&[0.0]) - &ap).max_abs() < 1e-15);
        assert!((&lam.eval(&[PI]) - &am).max_abs() < 1e-15);
        assert!(t.warnings.is_empty());
    }

    #[test]
    fn constant_triple_is_not_contact() {
        let pair = LiouvillePair::from_preset("totreal:1").unwrap();
        let one = ProfileFn::constant(1.0);
        let zero = ProfileFn::constant(0.0);
        let t = ProfileTriple::new(one, zero.clone(), zero, &pair, (0.0, 1.0)).unwrap();
        let c = contact_grid_check(&t.lambda(), t.interval, 64).unwrap();
        assert!(!c.pass);
        assert_eq!(c.min, 0.0);
    }

    #[test]
    fn t3_reeb_at_quarter_turn() {
        let t = t3_form(1).unwrap();
        let r = reeb_field(&t, PI / 2.0, 1e-10).unwrap();
        assert!(r.x[0].abs() < 1e-12);
        assert!((r.u - 1.0).abs() < 1e-12);
        let r0 = reeb_field(&t, 0.0, 1e-10).unwrap();
        assert!((r0.x[0] - 1.0).abs() < 1e-12 && r0.u.abs() < 1e-12);
        assert_eq!(r0.branch, "h'");
    }

    #[test]
    fn annulus_identities() {
        assert!(ideal_annulus_check(256).unwrap() < 1e-14);
        let pair = LiouvillePair::from_preset("sol:2,1,1,1").unwrap();
        assert!(gt_reparam_check(&pair, 512).unwrap() < 1e-10);
    }
}
