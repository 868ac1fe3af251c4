//! Linear contact-product models `B = a(s) e^{νt} α + b(s) e^{μt} dθ` on `ℝ_s × S¹_θ × ℝ_t × G`,
//! `a = e^s + e^{−s}`, `b = e^s − e^{−s}`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::formfam::param::{Layout, ParamForm};
use crate::formfam::profile::ProfileFn;
use crate::formfam::{certify, grid_points, symplectic_volume, GridCertificate};
use crate::liealg::{contact_check, LieAlgebra, Verdict};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug)]
pub struct LinearModelReport {
    pub mu: f64,
    pub nu: f64,
    /// `dim G = 2q + 1`.
    pub q: usize,
    pub grid: GridCertificate,
    /// Largest relative gap between the top coefficient of `(dB)^{q+2}` and
    /// `(q+1)(q+2) a^q e^{(μ+(q+1)ν)t} (νa² − μb²) top(α∧dα^q)`.
    pub max_rel_error: f64,
}

impl LinearModelReport {
    pub fn pass(&self) -> bool {
        self.grid.pass && self.max_rel_error <= 1e-8
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mu": self.mu, "nu": self.nu, "q": self.q, "grid": self.grid.to_json(),
            "max_rel_error": self.max_rel_error, "pass": self.pass(),
        })
    }
}

/// Grid check of `(dB)^{q+2} > 0` over `(s, t) ∈ [−2, 2]²` plus comparison with the closed form.
pub fn linear_model_pair_check(
    g: &LieAlgebra,
    alpha: &Form<Rational>,
    mu: f64,
    nu: f64,
    grid_n: usize,
) -> Result<LinearModelReport> {
    if !(nu > mu) {
        return Err(Error::Precondition(format!("need ν > μ, got μ = {mu}, ν = {nu}")));
    }
    if grid_n < 2 {
        return Err(Error::Precondition("grid needs at least two points per axis".into()));
    }
    if contact_check(g, alpha)?.verdict != Verdict::Positive {
        return Err(Error::Precondition("base form is not a positive contact form".into()));
    }
    let q = (g.dim() - 1) / 2;
    let top_g = alpha.wedge(&g.ce_differential(alpha)?.power(q))?.top_coefficient().to_f64();
    let layout = Layout::new(&["ds", "dtheta", "dt"], &["ds", "dt"], g)?;
    let (s, t) = (ProfileFn::var(0), ProfileFn::var(1));
    let a = s.clone().exp() + (-s.clone()).exp();
    let b = s.clone().exp() - (-s).exp();
    let big_b = ParamForm::from_algebra_form(&layout, a * (t.clone() * nu).exp(), alpha)?
        .try_add(&ParamForm::covector(&layout, b * (t * mu).exp(), "dtheta")?)?;
    let db = big_b.d_param();
    let axis = grid_points(-2.0, 2.0, grid_n, false);
    let pts: Vec<Vec<f64>> = axis.iter().flat_map(|&x| axis.iter().map(move |&y| vec![x, y])).collect();
    let grid = certify(&pts, layout.coframe.names().to_vec(), |p| symplectic_volume(&db.eval(p)));
    let closed = |s: f64, t: f64| {
        let (a, b) = (2.0 * s.cosh(), 2.0 * s.sinh());
        let qf = q as f64;
        (qf + 1.0) * (qf + 2.0) * a.powi(q as i32) * ((mu + (qf + 1.0) * nu) * t).exp() * (nu * a * a - mu * b * b) * top_g
    };
    let mut max_rel_error: f64 = 0.0;
    for p in &pts {
        let (lhs, rhs) = (symplectic_volume(&db.eval(p)), closed(p[0], p[1]));
        max_rel_error = max_rel_error.max((lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE));
    }
    Ok(LinearModelReport { mu, nu, q, grid, max_rel_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::preset;

    #[test]
    fn equal_rates_rejected() {
        let p = preset("totreal:1").unwrap();
        let (ap, _) = p.pair.clone().unwrap();
        assert!(linear_model_pair_check(&p.algebra, &ap, 1.0, 1.0, 8).is_err());
    }
}
