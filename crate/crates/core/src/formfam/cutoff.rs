//! Liouville forms `β = e^s α₊ + e^{−s} α₋` on `ℝ × G`, with and without cutoffs.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formfam::param::{Layout, ParamForm};
use crate::formfam::profile::{ProfileFn, Smoothstep};
use crate::formfam::{certify, grid_points, symplectic_volume, GridCertificate};
use crate::liealg::LiouvillePair;

fn beta_with(pair: &LiouvillePair, fp: ProfileFn, fm: ProfileFn) -> Result<ParamForm> {
    let layout = Layout::new(&["ds"], &["ds"], &pair.algebra)?;
    let a = ParamForm::from_algebra_form(&layout, fp, &pair.plus)?;
    let b = ParamForm::from_algebra_form(&layout, fm, &pair.minus)?;
    a.try_add(&b)
}

/// `β = ψ(c + s) e^s α₊ + ψ(c − s) e^{−s} α₋` with `ψ` the ramp from 0 at 0 to 1 at 1.
pub fn cutoff_liouville(pair: &LiouvillePair, c: f64, psi: Smoothstep) -> Result<ParamForm> {
    let up = ProfileFn::ramp(psi, ProfileFn::linear(1.0, c)) * ProfileFn::exp_linear(1.0, 0.0);
    let down = ProfileFn::ramp(psi, ProfileFn::linear(-1.0, c)) * ProfileFn::exp_linear(-1.0, 0.0);
    beta_with(pair, up, down)
}

fn volume_check(beta: &ParamForm, lo: f64, hi: f64, grid_n: usize) -> Result<GridCertificate> {
    if beta.coframe().dim() % 2 == 1 {
        return Err(Error::OddDimension(beta.coframe().dim()));
    }
    if grid_n == 0 {
        return Err(Error::Precondition("empty grid".into()));
    }
    let db = beta.d_param();
    let pts: Vec<Vec<f64>> = grid_points(lo, hi, grid_n, false).into_iter().map(|s| vec![s]).collect();
    Ok(certify(&pts, beta.coframe().names().to_vec(), |p| symplectic_volume(&db.eval(p))))
}

/// Sampled positivity of `(dβ)^n` for `β = e^s α₊ + e^{−s} α₋` over `s ∈ [lo, hi]`.
pub fn liouville_grid_check(pair: &LiouvillePair, range: (f64, f64), grid_n: usize) -> Result<GridCertificate> {
    let beta = beta_with(pair, ProfileFn::exp_linear(1.0, 0.0), ProfileFn::exp_linear(-1.0, 0.0))?;
    volume_check(&beta, range.0, range.1, grid_n)
}

/// Grid check of the cutoff form over `s ∈ [−c − 1, c + 1]`. The point count is rounded up
/// to an odd number so that `s = 0` is sampled.
pub fn cutoff_check(pair: &LiouvillePair, c: f64, psi: Smoothstep, grid_n: usize) -> Result<GridCertificate> {
    volume_check(&cutoff_liouville(pair, c, psi)?, -c - 1.0, c + 1.0, grid_n | 1)
}

#[derive(Clone, Debug)]
pub struct CutoffSearch {
    pub c_star: f64,
    pub psi: Smoothstep,
    pub grid_n: usize,
    pub certificate: GridCertificate,
    /// The same `c` on a 4× finer grid.
    pub refined: GridCertificate,
    pub bisection_steps: usize,
}

impl CutoffSearch {
    pub fn pass(&self) -> bool {
        self.certificate.pass && self.refined.pass
    }

    pub fn to_json(&self) -> Value {
        json!({
            "c_star": self.c_star,
            "psi": self.psi.name(),
            "grid": self.grid_n,
            "certificate": self.certificate.to_json(),
            "refined": self.refined.to_json(),
            "bisection_steps": self.bisection_steps,
            "pass": self.pass(),
        })
    }
}

pub const C_CAP: f64 = 64.0;

/// Smallest `c ∈ [0, 64]` (to within `1e-3`) whose cutoff form passes the grid check.
/// If the 4× refined grid rejects it, the search continues upward on the refined grid.
pub fn min_c_search(pair: &LiouvillePair, psi: Smoothstep, grid_n: usize) -> Result<CutoffSearch> {
    let top = cutoff_check(pair, C_CAP, psi, grid_n)?;
    if !top.pass {
        return Err(Error::SearchExhausted(format!(
            "no c ≤ {C_CAP} works; violation at s = {:?} (value {:e})",
            top.argmin, top.min
        )));
    }
    let mut steps = 0;
    let mut bisect = |mut lo: f64, mut hi: f64, n: usize| -> Result<f64> {
        while hi - lo > 1e-3 {
            let mid = 0.5 * (lo + hi);
            steps += 1;
            if cutoff_check(pair, mid, psi, n)?.pass {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    };
    let mut c = if cutoff_check(pair, 0.0, psi, grid_n)?.pass { 0.0 } else { bisect(0.0, C_CAP, grid_n)? };
    let mut refined = cutoff_check(pair, c, psi, 4 * grid_n)?;
    if !refined.pass {
        c = bisect(c, C_CAP, 4 * grid_n)?;
        refined = cutoff_check(pair, c, psi, 4 * grid_n)?;
    }
    let certificate = cutoff_check(pair, c, psi, grid_n)?;
    Ok(CutoffSearch { c_star: c, psi, grid_n, certificate, refined, bisection_steps: steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_matches_plain_form_in_the_middle() {
        let pair = LiouvillePair::from_preset("sol:2,1,1,1").unwrap();
        let c = 5.0;
        let cut = cutoff_liouville(&pair, c, Smoothstep::Quintic).unwrap().d_param();
        let plain = beta_with(&pair, ProfileFn::exp_linear(1.0, 0.0), ProfileFn::exp_linear(-1.0, 0.0))
            .unwrap()
            .d_param();
        for s in [-3.9, -1.0, 0.0, 2.5, 3.99] {
            let a = symplectic_volume(&cut.eval(&[s]));
            let b = symplectic_volume(&plain.eval(&[s]));
            assert!((a - b).abs() <= 1e-12 * b.abs());
        }
    }

    #[test]
    fn zero_cutoff_fails() {
        let pair = LiouvillePair::from_preset("sol:2,1,1,1").unwrap();
        let cert = cutoff_check(&pair, 0.0, Smoothstep::Quintic, 256).unwrap();
        assert!(!cert.pass);
    }
}
