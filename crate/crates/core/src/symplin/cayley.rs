//! Cayley chart `J ↦ (J + J₀)⁻¹(J − J₀)` on complex structures, convex interpolation of tamed
//! structures, and taming thresholds.

use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::symplin::{tames, taming_matrix, to_dmatrix, ComplexStructure, SkewForm};

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, got: b });
    }
    Ok(())
}

/// `A = (J + J₀)⁻¹(J − J₀)`; anticommutes with `J₀` and has no eigenvalue 1.
pub fn cayley_map(j0: &ComplexStructure<f64>, j: &ComplexStructure<f64>) -> Result<DMatrix<f64>> {
    check_dims(j0.dim(), j.dim())?;
    let (m0, m) = (j0.to_dmatrix(), j.to_dmatrix());
    let sum = &m + &m0;
    let lu = sum.clone().lu();
    if !lu.is_invertible() {
        return Err(Error::Singular("J + J₀".into()));
    }
    let a = lu.solve(&(&m - &m0)).ok_or_else(|| Error::Singular("J + J₀".into()))?;
    let cond = sum.singular_values();
    if cond.min() <= 1e-12 * cond.max() {
        return Err(Error::Singular("J + J₀ is numerically singular".into()));
    }
    Ok(a)
}

/// `J = (A − I) J₀ (A − I)⁻¹` for `A` anticommuting with `J₀`.
pub fn cayley_inverse(j0: &ComplexStructure<f64>, a: &DMatrix<f64>) -> Result<ComplexStructure<f64>> {
    check_dims(j0.dim(), a.nrows())?;
    let m0 = j0.to_dmatrix();
    let anti = (a * &m0 + &m0 * a).abs().max();
    if anti > 1e-10 * (1.0 + a.abs().max()) {
        return Err(Error::Precondition(format!("A does not anticommute with J₀ (defect {anti:e})")));
    }
    let n = a.nrows();
    let am = a - DMatrix::identity(n, n);
    let inv = am.clone().try_inverse().ok_or_else(|| Error::Singular("A − I (A has eigenvalue 1)".into()))?;
    ComplexStructure::from_dmatrix(&(am * m0 * inv))
}

/// `cayley_inverse(J₀, (1 − t)·cayley_map(J₀, J₁) + t·cayley_map(J₀, J₂))`, checked against every
/// form in `taming` that tames both `J₁` and `J₂`.
pub fn interpolate_tamed(
    j0: &ComplexStructure<f64>,
    j1: &ComplexStructure<f64>,
    j2: &ComplexStructure<f64>,
    t: f64,
    taming: &[SkewForm<f64>],
) -> Result<ComplexStructure<f64>> {
    for (i, w) in taming.iter().enumerate() {
        if !tames(w, j0)? {
            return Err(Error::Precondition(format!("J₀ is not tamed by form {i}")));
        }
    }
    let a = cayley_map(j0, j1)? * (1.0 - t) + cayley_map(j0, j2)? * t;
    let j = cayley_inverse(j0, &a)?;
    for (i, w) in taming.iter().enumerate() {
        if tames(w, j1)? && tames(w, j2)? && !tames(w, &j)? {
            return Err(Error::Numerical(format!("interpolated structure lost tameness for form {i} at t = {t}")));
        }
    }
    Ok(j)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdResult {
    pub threshold: f64,
    /// `(t, smallest eigenvalue of the taming matrix of Ω + tD)` at the certificate points.
    pub samples: Vec<(f64, f64)>,
}

impl ThresholdResult {
    pub fn to_json(&self) -> Value {
        json!({
            "threshold": self.threshold,
            "samples": self.samples.iter().map(|(t, m)| json!({"t": t, "min_eig": m})).collect::<Vec<_>>(),
        })
    }
}

pub const THRESHOLD_CAP: f64 = 1e6;

/// Smallest `T ≥ 0` (bisection to `1e−6`) with `Ω + tD` taming `J` at `t ∈ {T, 2T, 10T, 10³T}`.
/// The set of such `t` is an up-ray because the taming matrix of `D` is positive definite.
pub fn taming_threshold(
    omega: &SkewForm<f64>,
    d: &SkewForm<f64>,
    j: &ComplexStructure<f64>,
) -> Result<ThresholdResult> {
    check_dims(omega.dim(), d.dim())?;
    if !tames(d, j)? {
        return Err(Error::Precondition("D does not tame J".into()));
    }
    let s0 = to_dmatrix(&taming_matrix(omega, j)?);
    let sd = to_dmatrix(&taming_matrix(d, j)?);
    let min_eig = |t: f64| (&s0 + &sd * t).symmetric_eigenvalues().min();
    let passes = |t: f64| {
        let m = &s0 + &sd * t;
        let ev = m.symmetric_eigenvalues();
        ev.min() > 1e-10 * ev.iter().fold(0.0f64, |a, x| a.max(x.abs()))
    };
    let certify = |t: f64| -> Vec<(f64, f64)> { [t, 2.0 * t, 10.0 * t, 1e3 * t].iter().map(|&x| (x, min_eig(x))).collect() };
    if passes(0.0) {
        return Ok(ThresholdResult { threshold: 0.0, samples: certify(0.0) });
    }
    let mut hi = 1.0;
    let mut trajectory = Vec::new();
    while !passes(hi) {
        trajectory.push((hi, min_eig(hi)));
        hi *= 2.0;
        if hi > THRESHOLD_CAP {
            return Err(Error::SearchExhausted(format!("no T ≤ 1e6; min eigenvalues {trajectory:?}")));
        }
    }
    let mut lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
    while hi - lo > 1e-6 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if passes(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let samples = certify(hi);
    if samples.iter().any(|&(t, _)| !passes(t)) {
        return Err(Error::Numerical("threshold certificate failed at a multiple of T".into()));
    }
    Ok(ThresholdResult { threshold: hi, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cayley_of_base_point() {
        let j0 = ComplexStructure::<f64>::standard(2);
        let a = cayley_map(&j0, &j0).unwrap();
        assert_eq!(a.abs().max(), 0.0);
        let back = cayley_inverse(&j0, &DMatrix::zeros(4, 4)).unwrap();
        assert_eq!(back, j0);
        assert!(cayley_map(&j0, &j0.neg()).is_err());
    }

    #[test]
    fn threshold_of_opposite_form() {
        let d = SkewForm::<f64>::standard(2);
        let j = ComplexStructure::<f64>::standard(2);
        let r = taming_threshold(&d.scale(&-1.0), &d, &j).unwrap();
        assert!(r.threshold > 1.0 && r.threshold < 1.0 + 2e-6);
        assert_eq!(taming_threshold(&d, &d, &j).unwrap().threshold, 0.0);
    }
}
