//! The lattice `Γ_k` of log embeddings of positive units, monodromy matrices, hyperbolic
//! `SL(2, ℤ)` data and the totally real Liouville pair.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::liealg::{contact_check, liouville_pair_check, LiouvillePair, PositivityCertificate};
use crate::numfield::units::{default_box_bound, find_units, positive_units, UnitGroup};
use crate::numfield::{det_i128, to_f64_matrix, NumberField, OrderElement, Poly};

/// A point of `𝔥₁ ⊂ ℝ^r × ℂ^s`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaVector {
    pub real: Vec<f64>,
    /// `ln|σ_j| + i·arg σ_j`.
    pub complex: Vec<Complex<f64>>,
}

impl GammaVector {
    /// Log embedding of a unit; `arg` in `(−π, π]`.
    pub fn of_unit(field: &NumberField, u: &OrderElement) -> Self {
        let r = field.signature().0;
        let e = field.embed(u);
        GammaVector {
            real: e[..r].iter().map(|z| z.re.abs().ln()).collect(),
            complex: e[r..].iter().map(|z| Complex::new(z.norm().ln(), z.arg())).collect(),
        }
    }

    /// `Σ real + 2·Σ Re complex`, zero on `𝔥₁`.
    pub fn trace(&self) -> f64 {
        self.real.iter().sum::<f64>() + 2.0 * self.complex.iter().map(|z| z.re).sum::<f64>()
    }

    /// Reals, then `(Re, Im)` per complex place.
    pub fn flat(&self) -> Vec<f64> {
        self.real.iter().copied().chain(self.complex.iter().flat_map(|z| [z.re, z.im])).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({"real": self.real, "complex": self.complex.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()})
    }
}

#[derive(Clone, Debug)]
pub struct LatticeData {
    /// Basis vectors of `Γ`, each with the positive unit it comes from.
    pub basis: Vec<(GammaVector, OrderElement)>,
    /// Multiplication by each basis unit in the power basis.
    pub monodromy: Vec<Vec<Vec<i64>>>,
    pub rank: usize,
    /// Largest `|trace|` over the basis.
    pub trace_defect: f64,
    /// Largest `‖v_α M − u(α) v_α‖` over embeddings `α`, relative to `‖M‖`.
    pub diagonalization_defect: f64,
}

impl LatticeData {
    pub fn to_json(&self) -> Value {
        json!({
            "gamma_basis": self.basis.iter().map(|(g, u)| json!({"vector": g.to_json(), "unit": u.to_json()})).collect::<Vec<_>>(),
            "monodromy": self.monodromy,
            "rank": self.rank,
            "trace_defect": self.trace_defect,
            "diagonalization_defect": self.diagonalization_defect,
        })
    }
}

/// Integer row echelon basis of the row lattice of `rows` (each row carries a passive tag
/// column that is combined along with it).
fn row_lattice_basis(mut rows: Vec<(Vec<i64>, i64)>, cols: usize) -> Vec<(Vec<i64>, i64)> {
    let mut pivot = 0;
    for c in 0..cols {
        loop {
            let Some(best) = (pivot..rows.len()).filter(|&i| rows[i].0[c] != 0).min_by_key(|&i| rows[i].0[c].abs())
            else {
                break;
            };
            rows.swap(pivot, best);
            let mut done = true;
            for i in 0..rows.len() {
                if i != pivot && rows[i].0[c] != 0 {
                    let q = rows[i].0[c].div_euclid(rows[pivot].0[c]);
                    let (pr, pt) = rows[pivot].clone();
                    rows[i].0.iter_mut().zip(&pr).for_each(|(x, y)| *x -= q * y);
                    rows[i].1 -= q * pt;
                    if i > pivot && rows[i].0[c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if pivot < rows.len() && rows[pivot].0[c] != 0 {
            if rows[pivot].0[c] < 0 {
                rows[pivot].0.iter_mut().for_each(|x| *x = -*x);
                rows[pivot].1 = -rows[pivot].1;
            }
            pivot += 1;
        }
    }
    rows.truncate(pivot);
    rows
}

/// `Γ = log(positive units) + {0} × 2πiℤ^s`. When `r = 0` every unit is positive, so the root of
/// unity of maximal order contributes its arguments as well.
pub fn gamma_lattice(field: &NumberField, group: &UnitGroup) -> Result<LatticeData> {
    let (r, s) = field.signature();
    let n = field.degree();
    let mut basis: Vec<(GammaVector, OrderElement)> = positive_units(field, &group.free)?
        .into_iter()
        .map(|u| (GammaVector::of_unit(field, &u), u))
        .collect();
    if s > 0 {
        let (m, zeta) = if r == 0 {
            (group.torsion_order as i64, group.torsion_generator.clone())
        } else {
            (1, OrderElement::one(n))
        };
        let args = GammaVector::of_unit(field, &zeta).complex;
        let k: Vec<i64> = args.iter().map(|z| (z.im * m as f64 / (2.0 * PI)).round() as i64).collect();
        let mut rows = vec![(k, 1i64)];
        for j in 0..s {
            let mut e = vec![0i64; s];
            e[j] = m;
            rows.push((e, 0));
        }
        for (row, tag) in row_lattice_basis(rows, s) {
            let unit = field.pow(&zeta, tag.rem_euclid(m) as u32)?;
            let g = GammaVector {
                real: vec![0.0; r],
                complex: row.iter().map(|&x| Complex::new(0.0, 2.0 * PI * x as f64 / m as f64)).collect(),
            };
            basis.push((g, unit));
        }
    }
    let trace_defect = basis.iter().map(|(g, _)| g.trace().abs()).fold(0.0, f64::max);
    if trace_defect > 1e-10 {
        return Err(Error::Numerical(format!("log vectors leave the trace-zero hyperplane by {trace_defect:e}")));
    }
    let rank = if basis.is_empty() {
        0
    } else {
        let m = DMatrix::from_fn(basis.len(), n, |i, j| basis[i].0.flat()[j]);
        let sv = m.singular_values();
        sv.iter().filter(|&&x| x > 1e-8).count()
    };
    if rank != n - 1 || basis.len() != n - 1 {
        return Err(Error::Numerical(format!("Γ has rank {rank} with {} generators, expected {}", basis.len(), n - 1)));
    }
    let mut monodromy = Vec::new();
    let mut diagonalization_defect = 0.0f64;
    for (_, u) in &basis {
        let (m, defect) = monodromy_matrix(field, u)?;
        diagonalization_defect = diagonalization_defect.max(defect);
        monodromy.push(m);
    }
    Ok(LatticeData { basis, monodromy, rank, trace_defect, diagonalization_defect })
}

/// Multiplication by `u` in the power basis, with `det = 1` checked exactly and the relative
/// eigen-relation defect `max_α ‖v_α M − u(α) v_α‖ / (‖M‖‖v_α‖)`, `v_α = (1, α, …, α^{n−1})`.
pub fn monodromy_matrix(field: &NumberField, u: &OrderElement) -> Result<(Vec<Vec<i64>>, f64)> {
    let m = field.mult_matrix(u)?;
    let det = det_i128(&m)?;
    if det != 1 {
        return Err(Error::Precondition(format!("multiplication by {:?} has determinant {det}", u.0)));
    }
    let n = field.degree();
    let mf = to_f64_matrix(&m);
    let scale = mf.abs().max().max(1.0);
    let mut defect = 0.0f64;
    for (alpha, ua) in field.all_roots().into_iter().zip(field.embed(u)) {
        let v: Vec<Complex<f64>> = (0..n).map(|k| alpha.powu(k as u32)).collect();
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut err = 0.0f64;
        for j in 0..n {
            let vm: Complex<f64> = (0..n).map(|i| v[i] * mf[(i, j)]).sum();
            err = err.max((vm - ua * v[j]).norm());
        }
        defect = defect.max(err / (scale * vn));
    }
    if defect > 1e-8 {
        return Err(Error::Numerical(format!("monodromy of {:?} fails the embedding check ({defect:e})", u.0)));
    }
    Ok((m, defect))
}

#[derive(Clone, Debug)]
pub struct HyperbolicLattice {
    pub matrix: [[i64; 2]; 2],
    pub tau: f64,
    /// Sign of the eigenvalues (sign of the trace).
    pub sign: i64,
    /// Columns: eigenvectors for `±e^{−τ}` and `±e^{τ}`.
    pub eigenbasis: [[f64; 2]; 2],
    /// `max |P diag(±e^{−τ}, ±e^{τ}) P⁻¹ − A|`.
    pub residual: f64,
}

impl HyperbolicLattice {
    pub fn to_json(&self) -> Value {
        json!({
            "matrix": self.matrix,
            "tau": self.tau,
            "sign": self.sign,
            "eigenbasis": self.eigenbasis,
            "residual": self.residual,
        })
    }
}

/// `A ∈ SL(2, ℤ)` with `|tr A| > 2`: `τ = ln` of the larger eigenvalue modulus and an eigenbasis.
pub fn hyperbolic_sl2_lattice(a: [[i64; 2]; 2]) -> Result<HyperbolicLattice> {
    let det = a[0][0] as i128 * a[1][1] as i128 - a[0][1] as i128 * a[1][0] as i128;
    let tr = a[0][0] as i128 + a[1][1] as i128;
    if det != 1 {
        return Err(Error::Precondition(format!("determinant {det}, expected 1")));
    }
    if tr.abs() <= 2 {
        return Err(Error::Precondition(format!("trace {tr} is not hyperbolic (|tr| ≤ 2)")));
    }
    let sign = tr.signum() as i64;
    let t = tr.abs() as f64;
    let big = 0.5 * (t + (t * t - 4.0).sqrt());
    let tau = big.ln();
    let af = a.map(|r| r.map(|x| x as f64));
    let eigvec = |mu: f64| {
        let v = if a[0][1] != 0 { [af[0][1], mu - af[0][0]] } else { [mu - af[1][1], af[1][0]] };
        let nv = (v[0] * v[0] + v[1] * v[1]).sqrt();
        [v[0] / nv, v[1] / nv]
    };
    let (small_mu, big_mu) = (sign as f64 / big, sign as f64 * big);
    let (v0, v1) = (eigvec(small_mu), eigvec(big_mu));
    let p = nalgebra::Matrix2::new(v0[0], v1[0], v0[1], v1[1]);
    let pinv = p.try_inverse().ok_or_else(|| Error::Singular("eigenbasis".into()))?;
    let back = p * nalgebra::Matrix2::new(small_mu, 0.0, 0.0, big_mu) * pinv;
    let target = nalgebra::Matrix2::new(af[0][0], af[0][1], af[1][0], af[1][1]);
    let residual = (back - target).abs().max();
    if residual > 1e-9 * (1.0 + target.abs().max()) {
        return Err(Error::Numerical(format!("eigenbasis reconstruction residual {residual:e}")));
    }
    Ok(HyperbolicLattice { matrix: a, tau, sign, eigenbasis: [[v0[0], v1[0]], [v0[1], v1[1]]], residual })
}

#[derive(Clone, Debug)]
pub struct PairReport {
    pub preset: String,
    pub pair: LiouvillePair,
    pub certificate: PositivityCertificate,
    pub plus_contact: PositivityCertificate,
    pub minus_contact: PositivityCertificate,
}

impl PairReport {
    pub fn pass(&self) -> bool {
        self.certificate.is_positive()
            && self.plus_contact.is_positive()
            && self.minus_contact.verdict == crate::liealg::Verdict::Negative
    }

    pub fn to_json(&self) -> Value {
        json!({
            "preset": self.preset,
            "dim": self.pair.dim(),
            "orientation": self.pair.algebra.names(),
            "liouville": self.certificate.to_json(),
            "alpha_plus_contact": self.plus_contact.to_json(),
            "alpha_minus_contact": self.minus_contact.to_json(),
            "pass": self.pass(),
        })
    }
}

/// The left-invariant pair `α_± = ±Θ₀* + Σ Θ_i*` on the Sol-type algebra of a totally real field
/// of degree `n`, with its exact certificates.
pub fn build_liealg_pair(field: &NumberField) -> Result<PairReport> {
    let (r, s) = field.signature();
    if s > 0 {
        return Err(Error::Precondition(format!(
            "field has {s} complex places; only lattice data is available (use the linear-model check)"
        )));
    }
    let preset = format!("totreal:{r}");
    let pair = LiouvillePair::from_preset(&preset)?;
    let certificate = liouville_pair_check(&pair.algebra, &pair.plus, &pair.minus)?;
    let plus_contact = contact_check(&pair.algebra, &pair.plus)?;
    let minus_contact = contact_check(&pair.algebra, &pair.minus)?;
    Ok(PairReport { preset, pair, certificate, plus_contact, minus_contact })
}

/// Field, units, lattice and (totally real fields) the Liouville pair in one run.
#[derive(Clone, Debug)]
pub struct FieldPipeline {
    pub field: NumberField,
    pub units: UnitGroup,
    pub positive_units: Vec<OrderElement>,
    pub lattice: LatticeData,
    pub pair: Option<PairReport>,
}

impl FieldPipeline {
    pub fn to_json(&self) -> Value {
        json!({
            "poly": self.field.poly.to_json(),
            "signature": [self.field.signature().0, self.field.signature().1],
            "field": self.field.to_json(),
            "units": self.units.to_json(&self.field),
            "positive_units": self.positive_units.iter().map(OrderElement::to_json).collect::<Vec<_>>(),
            "gamma_basis": self.lattice.basis.iter().map(|(g, _)| g.to_json()).collect::<Vec<_>>(),
            "monodromy": self.lattice.monodromy,
            "lattice": self.lattice.to_json(),
            "liouville_certificate": self.pair.as_ref().map(|p| {
                if p.certificate.is_positive() { format!("positive-{}", p.certificate.kind()) } else { p.certificate.verdict.as_str().to_string() }
            }),
            "pair": self.pair.as_ref().map(PairReport::to_json),
        })
    }
}

pub fn pipeline(poly: Poly, box_bound: Option<i64>) -> Result<FieldPipeline> {
    let field = NumberField::new(poly)?;
    let units = find_units(&field, box_bound.unwrap_or_else(|| default_box_bound(field.degree())))?;
    let positive = positive_units(&field, &units.free)?;
    let lattice = gamma_lattice(&field, &units)?;
    let pair = if field.is_totally_real() { Some(build_liealg_pair(&field)?) } else { None };
    Ok(FieldPipeline { field, units, positive_units: positive, lattice, pair })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_lattice() {
        let p = pipeline(Poly::new(vec![-2, 0, 1]).unwrap(), None).unwrap();
        assert_eq!(p.lattice.monodromy, vec![vec![vec![3, 4], vec![2, 3]]]);
        let g = &p.lattice.basis[0].0;
        assert!((g.real[0] - (3.0 + 2.0 * 2f64.sqrt()).ln()).abs() < 1e-12);
        assert!((g.real[1] - (3.0 - 2.0 * 2f64.sqrt()).ln()).abs() < 1e-12);
    }

    #[test]
    fn gaussian_lattice() {
        let p = pipeline(Poly::new(vec![1, 0, 1]).unwrap(), None).unwrap();
        assert_eq!(p.lattice.basis.len(), 1);
        let g = &p.lattice.basis[0].0;
        assert!((g.complex[0] - Complex::new(0.0, PI / 2.0)).norm() < 1e-12);
        assert_eq!(p.lattice.monodromy, vec![vec![vec![0, -1], vec![1, 0]]]);
    }

    #[test]
    fn rationals_lattice_is_trivial() {
        let p = pipeline(Poly::new(vec![-1, 1]).unwrap(), None).unwrap();
        assert_eq!(p.lattice.rank, 0);
        assert!(p.pair.unwrap().pass());
    }

    #[test]
    fn hyperbolic_examples() {
        let h = hyperbolic_sl2_lattice([[3, 4], [2, 3]]).unwrap();
        assert!((h.tau - (3.0 + 2.0 * 2f64.sqrt()).ln()).abs() < 1e-14);
        let h = hyperbolic_sl2_lattice([[2, 1], [1, 1]]).unwrap();
        assert!((h.tau - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-14);
        assert!(hyperbolic_sl2_lattice([[1, 1], [0, 1]]).is_err());
    }
}
