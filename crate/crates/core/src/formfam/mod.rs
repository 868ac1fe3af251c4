//! Parameter-dependent contact and Liouville forms: Giroux torsion, Lutz–Mori twists,
//! cutoff Liouville forms, linear contact-product models, and the Reeb solver.
//!
//! Grid checks certify sampled positivity only; their certificates say `"grid"`.

pub mod cutoff;
pub mod gt;
pub mod linear;
pub mod lutz;
pub mod param;
pub mod profile;
pub mod weak;

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::exterior::Form;

pub use cutoff::{cutoff_liouville, liouville_grid_check, min_c_search, CutoffSearch};
pub use gt::{
    contact_grid_check, gt_form, gt_reparam_check, ideal_annulus_check, reeb_field, t3_form, ProfileTriple,
    ReebResult, ReebSolver,
};
pub use linear::{linear_model_pair_check, LinearModelReport};
pub use lutz::{lutz_family_check, xi_nondegenerate, LutzReport, XiReport};
pub use param::{Layout, ParamForm};
pub use profile::{phi_k, plateau, ProfileFn, Smoothstep};
pub use weak::{sol_weak_filling_fixture, WeakFillingReport};

/// Sampled positivity of a scalar function over parameter points.
#[derive(Clone, Debug, PartialEq)]
pub struct GridCertificate {
    pub samples: usize,
    pub min: f64,
    pub argmin: Vec<f64>,
    pub max: f64,
    pub pass: bool,
    pub orientation: Vec<String>,
}

impl GridCertificate {
    pub fn kind(&self) -> &'static str {
        "grid"
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind(),
            "samples": self.samples,
            "min": self.min,
            "argmin": self.argmin,
            "max": self.max,
            "pass": self.pass,
            "orientation": self.orientation,
        })
    }
}

/// `n` uniform points on `[lo, hi]` (endpoints included) plus the multiples of `π/2` inside,
/// sorted.
pub fn grid_points(lo: f64, hi: f64, n: usize, quarter_turns: bool) -> Vec<f64> {
    let mut pts: Vec<f64> = match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    };
    if n > 0 {
        pts.push(hi);
    }
    if quarter_turns {
        let first = (lo / FRAC_PI_2).ceil() as i64;
        let last = (hi / FRAC_PI_2).floor() as i64;
        pts.extend((first..=last).map(|j| j as f64 * FRAC_PI_2));
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Evaluates `f` on every point in parallel and reduces in index order.
pub fn grid_minimum<F>(points: &[Vec<f64>], f: F) -> (f64, usize, f64)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let vals: Vec<f64> = points.par_iter().map(|p| f(p)).collect();
    let mut min = f64::INFINITY;
    let mut arg = 0;
    let mut max = f64::NEG_INFINITY;
    for (i, &v) in vals.iter().enumerate() {
        // NaN counts as a failure.
        if v < min || v.is_nan() && !min.is_nan() {
            min = v;
            arg = i;
        }
        max = max.max(v);
    }
    (min, arg, max)
}

pub(crate) fn certify(points: &[Vec<f64>], orientation: Vec<String>, f: impl Fn(&[f64]) -> f64 + Sync) -> GridCertificate {
    let (min, arg, max) = grid_minimum(points, f);
    GridCertificate {
        samples: points.len(),
        min,
        argmin: points.get(arg).cloned().unwrap_or_default(),
        max,
        pass: !points.is_empty() && min > 0.0,
        orientation,
    }
}

/// Top coefficient of `λ ∧ (dλ)^n` on a `(2n+1)`-dimensional coframe.
pub fn contact_volume(lam: &Form<f64>, dlam: &Form<f64>) -> f64 {
    let n = (lam.coframe().dim() - 1) / 2;
    lam.wedge(&dlam.power(n)).expect("same coframe").top_coefficient()
}

/// Top coefficient of `ω^n` on a `2n`-dimensional coframe.
pub fn symplectic_volume(omega: &Form<f64>) -> f64 {
    omega.power(omega.coframe().dim() / 2).top_coefficient()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_quarter_turns() {
        let g = grid_points(0.0, 2.0 * std::f64::consts::PI, 5, true);
        assert!(g.contains(&FRAC_PI_2));
        assert!(g.contains(&(3.0 * FRAC_PI_2)));
        assert_eq!(g.first(), Some(&0.0));
        assert_eq!(*g.last().unwrap(), 2.0 * std::f64::consts::PI);
    }

    #[test]
    fn reduction_order_is_stable() {
        let pts: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64]).collect();
        let (min, arg, max) = grid_minimum(&pts, |p| (p[0] - 40.0).abs());
        assert_eq!((min, arg, max), (0.0, 40, 59.0));
    }
}
