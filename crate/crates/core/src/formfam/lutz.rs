//! Lutz–Mori twist family `λ_{k,τ}` and the space `Ξ` of nondegenerate 2-forms on `S¹ × G`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::formfam::param::{Layout, ParamForm};
use crate::formfam::profile::{phi_k, plateau, Smoothstep};
use crate::formfam::{contact_volume, grid_points};
use crate::liealg::LiouvillePair;

#[derive(Clone, Debug, PartialEq)]
pub struct LutzReport {
    pub k: u32,
    pub tau: f64,
    pub psi: Smoothstep,
    pub samples: usize,
    /// Largest `|L − R| / max(|R|, 1e-12·|λ_k ∧ (dλ_k)^{n−1}|)`.
    pub max_rel_error: f64,
    /// Minimum of `λ_k ∧ (dλ_k)^{n−1}` over the grid.
    pub base_min: f64,
}

impl LutzReport {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k, "tau": self.tau, "psi": self.psi.name(), "samples": self.samples,
            "max_rel_error": self.max_rel_error, "base_min": self.base_min,
        })
    }
}

/// `λ_k = C₊(φ_k) α₊ + C₋(φ_k) α₋ + sin φ_k dt` on `(−ε, ε)`, `ε = 1`.
pub fn lutz_lambda(pair: &LiouvillePair, k: u32, psi: Smoothstep) -> Result<(Layout, ParamForm)> {
    let layout = Layout::new(&["ds", "dt"], &["ds"], &pair.algebra)?;
    let phi = phi_k(k, 1.0, psi);
    let cp = phi.clone().cos() * 0.5 + 0.5;
    let cm = -(phi.clone().cos() * 0.5) + 0.5;
    let lam = ParamForm::from_algebra_form(&layout, cp, &pair.plus)?
        .try_add(&ParamForm::from_algebra_form(&layout, cm, &pair.minus)?)?
        .try_add(&ParamForm::covector(&layout, phi.sin(), "dt")?)?;
    Ok((layout, lam))
}

/// Checks `λ_{k,τ} ∧ (dλ_{k,τ})^{n−1} = (1 − τψ)^n λ_k ∧ (dλ_k)^{n−1}` on `grid_n` points of
/// `(−ε, ε)` with `λ_{k,τ} = (1 − τψ) λ_k + τψ ds`.
pub fn lutz_family_check(pair: &LiouvillePair, k: u32, tau: f64, psi: Smoothstep, grid_n: usize) -> Result<LutzReport> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::Precondition("τ must lie in [0, 1]".into()));
    }
    let (layout, lam) = lutz_lambda(pair, k, psi)?;
    let bump = plateau(1.0, psi) * tau;
    let lam_tau = lam
        .scale(&(-bump.clone() + 1.0))
        .try_add(&ParamForm::covector(&layout, bump.clone(), "ds")?)?;
    let (dl, dlt) = (lam.d_param(), lam_tau.d_param());
    let n = layout.dim().div_ceil(2);
    let pts = grid_points(-1.0, 1.0, grid_n, false);
    let mut worst: f64 = 0.0;
    let mut base_min = f64::INFINITY;
    for &s in &pts {
        let p = [s];
        let base = contact_volume(&lam.eval(&p), &dl.eval(&p));
        let lhs = contact_volume(&lam_tau.eval(&p), &dlt.eval(&p));
        let rhs = (1.0 - bump.eval(&p)).powi(n as i32) * base;
        let denom = rhs.abs().max(1e-12 * base.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max((lhs - rhs).abs() / denom);
        base_min = base_min.min(base);
    }
    Ok(LutzReport { k, tau, psi, samples: pts.len(), max_rel_error: worst, base_min })
}

#[derive(Clone, Debug, PartialEq)]
pub struct XiReport {
    /// Top coefficient of `ω^m` on `(dt, G)`, `2m = 1 + dim G`.
    pub lhs: f64,
    /// `m·B·top(dt ∧ (C₊α₊ − C₋α₋) ∧ (C₊dα₊ + C₋dα₋)^{m−1})`.
    pub rhs: f64,
    pub rel_error: f64,
    pub nonzero: bool,
}

impl XiReport {
    pub fn to_json(&self) -> Value {
        json!({"lhs": self.lhs, "rhs": self.rhs, "rel_error": self.rel_error, "nonzero": self.nonzero})
    }
}

/// `ω = C₊dα₊ + C₋dα₋ + δ α₊∧α₋ + B dt∧(C₊α₊ − C₋α₋)` on `S¹ × G`; compares `ω^m` with
/// the closed form, `m = (1 + dim G)/2`.
pub fn xi_nondegenerate(pair: &LiouvillePair, cp: f64, cm: f64, b: f64, delta: f64) -> Result<XiReport> {
    if cp == 0.0 && cm == 0.0 {
        return Err(Error::Precondition("C₊ and C₋ both vanish".into()));
    }
    if cp < 0.0 || cm < 0.0 {
        return Err(Error::Precondition("C₊, C₋ must be nonnegative".into()));
    }
    let layout = Layout::new(&["dt"], &[], &pair.algebra)?;
    let lift = |a: &Form<crate::scalar::Rational>| layout.lift(&a.to_f64());
    let (ap, am) = (lift(&pair.plus)?, lift(&pair.minus)?);
    let (dap, dam) = (lift(&pair.d_plus())?, lift(&pair.d_minus())?);
    let dt: Form<f64> = Form::basis(&layout.coframe, 0);
    let big_d = &dap.scale(&cp) + &dam.scale(&cm);
    let a = &ap.scale(&cp) - &am.scale(&cm);
    let omega = &(&big_d + &ap.wedge(&am)?.scale(&delta)) + &dt.wedge(&a)?.scale(&b);
    let m = layout.dim() / 2;
    let lhs = omega.power(m).top_coefficient();
    let rhs = m as f64 * b * dt.wedge(&a)?.wedge(&big_d.power(m - 1))?.top_coefficient();
    let scale = omega.max_abs().powi(m as i32).max(f64::MIN_POSITIVE);
    let rel_error = (lhs - rhs).abs() / rhs.abs().max(1e-12 * scale);
    Ok(XiReport { lhs, rhs, rel_error, nonzero: lhs.abs() > 1e-12 * scale })
}

/// The `Ξ` parameters of `d λ_{k,τ}` at `s`: `(C₊, C₋, δ, B)`.
pub fn xi_parameters(k: u32, tau: f64, psi: Smoothstep, s: f64) -> (f64, f64, f64, f64) {
    let phi = phi_k(k, 1.0, psi);
    let (p, dp) = (phi.eval1(s), phi.deriv().eval1(s));
    let tp = tau * plateau(1.0, psi).eval1(s);
    let delta = -(1.0 - tp) / (2.0 * tp) * dp * p.sin();
    let b = (1.0 - tp) / tp * dp;
    ((1.0 + p.cos()) / 2.0, (1.0 - p.cos()) / 2.0, delta, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_zero_is_exact() {
        let pair = LiouvillePair::from_preset("sol:2,1,1,1").unwrap();
        let r = lutz_family_check(&pair, 1, 0.0, Smoothstep::Quintic, 64).unwrap();
        assert_eq!(r.max_rel_error, 0.0);
        assert!(r.base_min > 0.0);
    }

    #[test]
    fn xi_reduces_when_cm_vanishes() {
        let pair = LiouvillePair::from_preset("sol:2,1,1,1").unwrap();
        let r = xi_nondegenerate(&pair, 1.5, 0.0, 2.0, 0.0).unwrap();
        // m = 2: ω² = 2B C₊² dt∧α₊∧dα₊, and α₊∧dα₊ has top coefficient 2.
        assert!((r.lhs - 2.0 * 2.0 * 1.5 * 1.5 * 2.0).abs() < 1e-12);
        assert!(r.rel_error < 1e-12);
        let z = xi_nondegenerate(&pair, 1.0, 1.0, 0.0, 0.3).unwrap();
        assert!(!z.nonzero);
    }
}
