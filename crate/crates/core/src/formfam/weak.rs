//! The weak-filling model `ω_ε = d[e^s α₊ + e^{−s} α₋ + σ dθ] + ε ω` on `ℝ_σ × S¹_θ × ℝ_s × Sol`.

use serde_json::{json, Value};

use crate::liealg::certs::weak_domination_with;
use crate::error::{Error, Result};
use crate::exterior::{Coframe, Form};
use crate::formfam::param::{Layout, ParamForm};
use crate::formfam::profile::ProfileFn;
use crate::formfam::{certify, grid_points, symplectic_volume, GridCertificate};
use crate::liealg::LiouvillePair;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug)]
pub struct WeakFillingReport {
    pub eps: f64,
    /// `ω ∧ dα_± = 0` in the coordinates `(φ, t, x, y)` at every sampled `t`.
    pub exact_zero: bool,
    pub exact_samples: usize,
    /// Top coefficient of `ω_ε³` on the `(σ, s)` grid.
    pub volume: GridCertificate,
    /// Weak domination of `ω_ε` along `{σ = const}` at each sampled `s`.
    pub ray_pass: bool,
    pub ray_samples: usize,
}

impl WeakFillingReport {
    pub fn pass(&self) -> bool {
        self.exact_zero && self.volume.pass && self.ray_pass
    }

    pub fn to_json(&self) -> Value {
        json!({
            "eps": self.eps,
            "exact_zero": self.exact_zero,
            "exact_samples": self.exact_samples,
            "volume": self.volume.to_json(),
            "ray_pass": self.ray_pass,
            "ray_samples": self.ray_samples,
            "pass": self.pass(),
        })
    }
}

/// `ω ∧ dα_±` for `ω = dφ∧dt + dx∧dy`, `α_± = ±e^t dx + e^{−t} dy`, with `e^{±t}` replaced by
/// exact rationals.
fn coordinate_products(t: f64) -> Result<(Form<Rational>, Form<Rational>)> {
    let cf = Coframe::new(["dphi", "dt", "dx", "dy"])?;
    let q = |x: f64| Rational::from_float(x).ok_or_else(|| Error::Precondition(format!("t = {t} overflows")));
    let (ep, em) = (q(t.exp())?, q((-t).exp())?);
    let omega = Form::from_terms(&cf, 2, [(vec![0, 1], Rational::from_i64(1)), (vec![2, 3], Rational::from_i64(1))])?;
    let d_plus = Form::from_terms(&cf, 2, [(vec![1, 2], ep.clone()), (vec![1, 3], -em.clone())])?;
    let d_minus = Form::from_terms(&cf, 2, [(vec![1, 2], -ep), (vec![1, 3], -em)])?;
    Ok((omega.wedge(&d_plus)?, omega.wedge(&d_minus)?))
}

/// Runs the fixture on the Sol pair for `ε ≥ 0` with a `grid_n × grid_n` grid on `[−1, 1]²`.
pub fn sol_weak_filling_fixture(eps: f64, grid_n: usize) -> Result<WeakFillingReport> {
    if !(eps >= 0.0) {
        return Err(Error::Precondition("ε must be nonnegative".into()));
    }
    if grid_n < 2 {
        return Err(Error::Precondition("grid needs at least two points per axis".into()));
    }
    let pair = LiouvillePair::from_preset("sol:2,1,1,1")?;
    let ts = grid_points(-2.0, 2.0, 9, false);
    let mut exact_zero = true;
    for &t in &ts {
        let (p, m) = coordinate_products(t)?;
        exact_zero &= p.is_zero() && m.is_zero();
    }
    // The same identity on the left-invariant coframe, where dx∧dy = X*∧Y*.
    let g = &pair.algebra;
    let omega_g = Form::basis(g.coframe(), 1).wedge(&Form::basis(g.coframe(), 2))?;
    exact_zero &= omega_g.wedge(&pair.d_plus())?.is_zero() && omega_g.wedge(&pair.d_minus())?.is_zero();

    let layout = Layout::new(&["dsigma", "dtheta", "ds"], &["dsigma", "ds"], g)?;
    let eta = ParamForm::covector(&layout, ProfileFn::var(0), "dtheta")?
        .try_add(&ParamForm::from_algebra_form(&layout, ProfileFn::var(1).exp(), &pair.plus)?)?
        .try_add(&ParamForm::from_algebra_form(&layout, (-ProfileFn::var(1)).exp(), &pair.minus)?)?;
    let omega = layout.covector("dtheta")?.wedge(&layout.covector("T")?)?.try_add(&layout.lift(&omega_g)?)?;
    let omega_eps = eta.d_param().try_add(&ParamForm::from_form(&layout, ProfileFn::constant(eps), &omega)?)?;
    let axis = grid_points(-1.0, 1.0, grid_n, false);
    let pts: Vec<Vec<f64>> = axis.iter().flat_map(|&a| axis.iter().map(move |&b| vec![a, b])).collect();
    let volume = certify(&pts, layout.coframe.names().to_vec(), |p| symplectic_volume(&omega_eps.eval(p)));

    // Boundary face {σ = const}: α = dθ + e^s α₊ + e^{−s} α₋ with dα supplied explicitly.
    let face = Layout::new(&["dtheta", "ds"], &["ds"], g)?;
    let alpha = ParamForm::covector(&face, ProfileFn::constant(1.0), "dtheta")?
        .try_add(&ParamForm::from_algebra_form(&face, ProfileFn::var(0).exp(), &pair.plus)?)?
        .try_add(&ParamForm::from_algebra_form(&face, (-ProfileFn::var(0)).exp(), &pair.minus)?)?;
    let d_alpha = alpha.d_param();
    let face_omega = face.covector("dtheta")?.wedge(&face.covector("T")?)?.try_add(&face.lift(&omega_g)?)?;
    let big_omega = d_alpha.try_add(&ParamForm::from_form(&face, ProfileFn::constant(eps), &face_omega)?)?;
    let mut ray_pass = true;
    for &s in &axis {
        let p = [s];
        let cert = weak_domination_with(&alpha.eval(&p), &d_alpha.eval(&p), &big_omega.eval(&p))?;
        ray_pass &= cert.passes();
    }
    Ok(WeakFillingReport {
        eps,
        exact_zero,
        exact_samples: ts.len(),
        volume,
        ray_pass,
        ray_samples: axis.len(),
    })
}
