//! Linear symplectic algebra of pairs of 2-forms: taming, cotamed complex structures,
//! simultaneous normal forms and the Cayley chart on complex structures.
//!
//! Convention: `ω(v, w) = vᵀ A w`. `J` is tamed by `ω` when `ω(v, Jv) > 0` for `v ≠ 0`,
//! i.e. when the symmetric part `(AJ − JᵀA)/2` is positive definite.

pub mod cayley;
pub mod reduce;
pub mod suite;

use std::collections::HashMap;

use nalgebra::{Complex, DMatrix};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use cayley::{cayley_inverse, cayley_map, interpolate_tamed, taming_threshold, ThresholdResult};
pub use reduce::{
    construct_cotamed, simultaneous_reduce, simultaneous_reduce_exact, CotameResult, PencilBlock, PencilBlocks,
};
pub use suite::{
    cayley_roundtrip_suite, cocompatible_counterexample_suite, equivalence_suite, interpolation_suite, random_compatible_j, random_pair,
    random_skew, CayleyReport, CounterexampleReport, EquivalenceReport, InterpolationReport,
};

pub const CONVENTION: &str = "omega(v,w) = v^T A w; J tamed iff (AJ - J^T A)/2 > 0";

/// Largest dimension for exact Pfaffians.
pub const MAX_EXACT_DIM: usize = 12;

pub(crate) fn scalar_json<S: Scalar>(x: &S) -> Value {
    if S::EXACT {
        Value::Object(x.to_json())
    } else {
        json!(x.to_f64())
    }
}

fn matrix_json<S: Scalar>(m: &[Vec<S>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(scalar_json).collect())).collect())
}

fn matrix_from_json<S: Scalar>(v: &Value) -> Result<Vec<Vec<S>>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected an array of rows".into()))?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse("expected a row array".into()))?
                .iter()
                .map(S::from_json)
                .collect()
        })
        .collect()
}

pub fn to_dmatrix<S: Scalar>(m: &[Vec<S>]) -> DMatrix<f64> {
    let n = m.len();
    let c = m.first().map_or(0, Vec::len);
    DMatrix::from_fn(n, c, |i, j| m[i][j].to_f64())
}

pub fn from_dmatrix(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn square<S: Scalar>(m: &[Vec<S>]) -> Result<usize> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Precondition("matrix is not square".into()));
    }
    Ok(n)
}

/// `ω(v, w) = vᵀ A w` with `A` antisymmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewForm<S: Scalar> {
    a: Vec<Vec<S>>,
}

impl<S: Scalar> SkewForm<S> {
    pub fn new(a: Vec<Vec<S>>) -> Result<Self> {
        let n = square(&a)?;
        let scale = a.iter().flatten().map(Scalar::magnitude).fold(0.0, f64::max);
        for i in 0..n {
            for j in i..n {
                let s = a[i][j].clone() + a[j][i].clone();
                let bad = if S::EXACT { !s.is_zero() } else { s.magnitude() > 1e-12 * scale.max(1.0) };
                if bad {
                    return Err(Error::NotSkew);
                }
            }
        }
        Ok(SkewForm { a })
    }

    /// `Ω_{2n} = [[0, I], [−I, 0]]`.
    pub fn standard(n: usize) -> Self {
        let mut a = vec![vec![S::zero(); 2 * n]; 2 * n];
        for i in 0..n {
            a[i][n + i] = S::one();
            a[n + i][i] = -S::one();
        }
        SkewForm { a }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<S>] {
        &self.a
    }

    pub fn to_f64(&self) -> SkewForm<f64> {
        SkewForm { a: self.a.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect() }
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        to_dmatrix(&self.a)
    }

    pub fn scale(&self, c: &S) -> Self {
        SkewForm { a: self.a.iter().map(|r| r.iter().map(|x| x.clone() * c.clone()).collect()).collect() }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if o.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: o.dim() });
        }
        let a = self.a.iter().zip(&o.a).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() + y.clone()).collect());
        Ok(SkewForm { a: a.collect() })
    }

    pub fn eval(&self, v: &[S], w: &[S]) -> S {
        let mut acc = S::zero();
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                acc = acc + vi.clone() * self.a[i][j].clone() * wj.clone();
            }
        }
        acc
    }

    /// Exact Pfaffian by expansion along the first row (memoised over index subsets).
    pub fn pfaffian(&self) -> Result<S> {
        let n = self.dim();
        if n > MAX_EXACT_DIM {
            return Err(Error::Precondition(format!("Pfaffian expansion limited to dim ≤ {MAX_EXACT_DIM}")));
        }
        if n % 2 == 1 {
            return Ok(S::zero());
        }
        let mut memo = HashMap::new();
        let pf = pf_rec(&self.a, (1u32 << n) - 1, &mut memo);
        if S::EXACT && pf.clone() * pf.clone() != det_exact(&self.a) {
            return Err(Error::Numerical("Pf(A)² differs from det(A)".into()));
        }
        Ok(pf)
    }

    pub fn is_nondegenerate(&self) -> Result<bool> {
        if S::EXACT {
            Ok(!self.pfaffian()?.is_zero())
        } else {
            let m = self.to_dmatrix();
            let scale = m.abs().max().max(f64::MIN_POSITIVE);
            let pf = pfaffian_f64(&m);
            Ok(pf.abs() > 1e-12 * scale.powi(self.dim() as i32 / 2))
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"dim": self.dim(), "matrix": matrix_json(&self.a), "convention": CONVENTION})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let m = v.get("matrix").unwrap_or(v);
        Self::new(matrix_from_json(m)?)
    }
}

/// Determinant by Gaussian elimination with nonzero pivots; exact for exact scalars.
pub fn det_exact<S: Scalar>(a: &[Vec<S>]) -> S {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = S::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return S::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let piv = m[k][k].clone();
        det = det * piv.clone();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone() / piv.clone();
            for j in k..n {
                let v = m[i][j].clone() - f.clone() * m[k][j].clone();
                m[i][j] = v;
            }
        }
    }
    det
}

fn pf_rec<S: Scalar>(a: &[Vec<S>], mask: u32, memo: &mut HashMap<u32, S>) -> S {
    if mask == 0 {
        return S::one();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << i);
    let mut acc = S::zero();
    let mut sign = true;
    let mut r = rest;
    while r != 0 {
        let j = r.trailing_zeros() as usize;
        r &= r - 1;
        if !a[i][j].is_zero() {
            let sub = pf_rec(a, rest & !(1 << j), memo);
            let term = a[i][j].clone() * sub;
            acc = if sign { acc + term } else { acc - term };
        }
        sign = !sign;
    }
    memo.insert(mask, acc.clone());
    acc
}

/// Float Pfaffian by skew-symmetric Gaussian elimination with pivoting.
pub fn pfaffian_f64(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut a = a.clone();
    let mut pf = 1.0;
    for k in (0..n).step_by(2) {
        let (mut p, mut best) = (k + 1, 0.0);
        for j in k + 1..n {
            if a[(k, j)].abs() > best {
                best = a[(k, j)].abs();
                p = j;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if p != k + 1 {
            a.swap_rows(p, k + 1);
            a.swap_columns(p, k + 1);
            pf = -pf;
        }
        let piv = a[(k, k + 1)];
        pf *= piv;
        for i in k + 2..n {
            let tau = a[(k, i)] / piv;
            if tau != 0.0 {
                for r in 0..n {
                    let v = a[(r, k + 1)];
                    a[(r, i)] -= tau * v;
                }
                for c in 0..n {
                    let v = a[(k + 1, c)];
                    a[(i, c)] -= tau * v;
                }
            }
        }
    }
    pf
}

/// `J` with `J² = −I`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexStructure<S: Scalar> {
    j: Vec<Vec<S>>,
}

impl<S: Scalar> ComplexStructure<S> {
    pub fn new(j: Vec<Vec<S>>) -> Result<Self> {
        let n = square(&j)?;
        let sq = matmul(&j, &j);
        let jmax = j.iter().flatten().fold(1.0f64, |a, x| a.max(x.magnitude()));
        let tol = 1e-10 * jmax * jmax;
        for (i, row) in sq.iter().enumerate() {
            for (k, x) in row.iter().enumerate() {
                let target = if i == k { -S::one() } else { S::zero() };
                let d = x.clone() - target;
                let bad = if S::EXACT { !d.is_zero() } else { d.magnitude() > tol };
                if bad {
                    return Err(Error::NotComplexStructure);
                }
            }
        }
        if n % 2 == 1 {
            return Err(Error::OddDimension(n));
        }
        Ok(ComplexStructure { j })
    }

    /// `[[0, −I], [I, 0]]`, tamed by `Ω_{2n}`.
    pub fn standard(n: usize) -> Self {
        let mut j = vec![vec![S::zero(); 2 * n]; 2 * n];
        for i in 0..n {
            j[i][n + i] = -S::one();
            j[n + i][i] = S::one();
        }
        ComplexStructure { j }
    }

    pub fn dim(&self) -> usize {
        self.j.len()
    }

    pub fn matrix(&self) -> &[Vec<S>] {
        &self.j
    }

    pub fn neg(&self) -> Self {
        ComplexStructure { j: self.j.iter().map(|r| r.iter().map(|x| -x.clone()).collect()).collect() }
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        to_dmatrix(&self.j)
    }

    pub fn to_json(&self) -> Value {
        json!({"dim": self.dim(), "matrix": matrix_json(&self.j)})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let m = v.get("matrix").unwrap_or(v);
        Self::new(matrix_from_json(m)?)
    }
}

impl ComplexStructure<f64> {
    pub fn from_dmatrix(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(from_dmatrix(m))
    }

    /// Newton steps `X ↦ (X − X⁻¹)/2` for `X² = −I` before the usual check; removes rounding
    /// error amplified by an ill-conditioned change of basis.
    pub fn from_dmatrix_polished(m: &DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        let mut x = m.clone();
        for _ in 0..8 {
            let defect = (&x * &x + DMatrix::identity(n, n)).abs().max();
            if defect <= 1e-14 * (1.0 + x.abs().max()) {
                break;
            }
            let inv = x.clone().try_inverse().ok_or_else(|| Error::Singular("J".into()))?;
            x = (&x - inv) * 0.5;
        }
        Self::from_dmatrix(&x)
    }

    /// `‖J² + I‖_max / max(1, ‖J‖_max²)`, the quantity bounded by `1e−10` in [`ComplexStructure::new`].
    pub fn defect(&self) -> f64 {
        let j = self.to_dmatrix();
        let scale = j.abs().max().max(1.0);
        (&j * &j + DMatrix::identity(j.nrows(), j.nrows())).abs().max() / (scale * scale)
    }
}

fn matmul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    let (n, m, p) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| {
            (0..p)
                .map(|k| (0..m).fold(S::zero(), |acc, j| acc + a[i][j].clone() * b[j][k].clone()))
                .collect()
        })
        .collect()
}

/// `(AJ − JᵀA)/2`.
pub fn taming_matrix<S: Scalar>(a: &SkewForm<S>, j: &ComplexStructure<S>) -> Result<Vec<Vec<S>>> {
    if a.dim() != j.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: j.dim() });
    }
    let aj = matmul(&a.a, &j.j);
    let n = a.dim();
    let half = S::one() / S::from_i64(2);
    Ok((0..n).map(|r| (0..n).map(|c| (aj[r][c].clone() + aj[c][r].clone()) * half.clone()).collect()).collect())
}

/// Smallest eigenvalue of the taming matrix divided by its spectral radius.
pub fn taming_margin<S: Scalar>(a: &SkewForm<S>, j: &ComplexStructure<S>) -> Result<f64> {
    let s = to_dmatrix(&taming_matrix(a, j)?);
    let ev = s.symmetric_eigenvalues();
    let norm = ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(ev.min() / norm)
}

/// Whether `J` is tamed by `ω`: leading principal minors (exact) or minimum eigenvalue
/// `> 1e−10·‖S‖` (float).
pub fn tames<S: Scalar>(a: &SkewForm<S>, j: &ComplexStructure<S>) -> Result<bool> {
    if S::EXACT {
        let s = taming_matrix(a, j)?;
        Ok(leading_minors_positive(s))
    } else {
        Ok(taming_margin(a, j)? > 1e-10)
    }
}

/// Sylvester's criterion by symmetric elimination without pivoting.
fn leading_minors_positive<S: Scalar>(mut s: Vec<Vec<S>>) -> bool {
    let n = s.len();
    for k in 0..n {
        let p = s[k][k].clone();
        if p.signum_i() <= 0 {
            return false;
        }
        for i in k + 1..n {
            let f = s[i][k].clone() / p.clone();
            for c in k..n {
                let v = s[k][c].clone();
                s[i][c] = s[i][c].clone() - f.clone() * v;
            }
        }
    }
    true
}

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
pub(crate) fn solve<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    let n = a.len();
    let p = b.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<S>> = a.iter().zip(b).map(|(r, s)| r.iter().chain(s).cloned().collect()).collect();
    let scale = a.iter().flatten().map(Scalar::magnitude).fold(0.0, f64::max);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&x, &y| m[x][k].magnitude().total_cmp(&m[y][k].magnitude()))
            .ok_or_else(|| Error::Singular("empty matrix".into()))?;
        let bad = if S::EXACT { m[piv][k].is_zero() } else { m[piv][k].magnitude() <= 1e-14 * scale };
        if bad {
            return Err(Error::Singular(format!("no pivot in column {k}")));
        }
        m.swap(k, piv);
        let d = m[k][k].clone();
        for c in k..n + p {
            m[k][c] = m[k][c].clone() / d.clone();
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for c in k..n + p {
                    let v = m[k][c].clone();
                    m[i][c] = m[i][c].clone() - f.clone() * v;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `B = A₀⁻¹ A₁`, so that `ω₁(v, w) = ω₀(Bv, w)`.
pub fn pencil_endomorphism<S: Scalar>(a0: &SkewForm<S>, a1: &SkewForm<S>) -> Result<Vec<Vec<S>>> {
    if a0.dim() != a1.dim() {
        return Err(Error::DimensionMismatch { expected: a0.dim(), got: a1.dim() });
    }
    let b = solve(&a0.a, &a1.a).map_err(|_| Error::Degenerate)?;
    // ω₀-symmetry: A₀B = A₁ is antisymmetric, up to rounding of size ‖A₀‖‖B‖ in float mode.
    let check = matmul(&a0.a, &b);
    let norm = |m: &[Vec<S>]| m.iter().flatten().map(Scalar::magnitude).fold(0.0, f64::max);
    let tol = 1e-10 * (1.0 + norm(&a0.a) * norm(&b));
    for i in 0..check.len() {
        for j in 0..i {
            let d = check[i][j].clone() + check[j][i].clone();
            if if S::EXACT { !d.is_zero() } else { d.magnitude() > tol } {
                return Err(Error::NotSkew);
            }
        }
    }
    Ok(b)
}

/// Eigenvalue test on the negative real axis: `Re < 0` and `|Im| ≤ 1e−8·|Re|`.
pub fn is_real_negative(z: Complex<f64>) -> bool {
    z.re < 0.0 && z.im.abs() <= 1e-8 * z.re.abs()
}

fn require_nondegenerate(a0: &SkewForm<f64>, a1: &SkewForm<f64>) -> Result<()> {
    if !a0.is_nondegenerate()? || !a1.is_nondegenerate()? {
        return Err(Error::Degenerate);
    }
    Ok(())
}

/// Spectrum of `B = A₀⁻¹A₁`.
pub fn pencil_spectrum<S: Scalar>(a0: &SkewForm<S>, a1: &SkewForm<S>) -> Result<Vec<Complex<f64>>> {
    let (f0, f1) = (a0.to_f64(), a1.to_f64());
    require_nondegenerate(&f0, &f1)?;
    let b = to_dmatrix(&pencil_endomorphism(&f0, &f1)?);
    Ok(eigenvalues(&b))
}

/// Eigenvalues from the real Schur form. 2×2 blocks use a complex square root, so near-double
/// real roots come out as a close real pair instead of NaN.
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex<f64>> {
    let n = m.nrows();
    // Unshifted-symmetric inputs (signed permutations) can stall the QR sweep; retry after a fixed
    // orthogonal similarity.
    let t = match m.clone().try_schur(f64::EPSILON, 10_000) {
        Some(s) => s.unpack().1,
        None => {
            let q = DMatrix::<f64>::from_fn(n, n, |i, j| ((i * 7 + j * 3 + 1) as f64).sin()).qr().q();
            match (q.transpose() * m * &q).try_schur(f64::EPSILON, 100_000) {
                Some(s) => s.unpack().1,
                None => return m.complex_eigenvalues().iter().copied().collect(),
            }
        }
    };
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half = 0.5 * (a + d);
            let disc = Complex::new(0.25 * (a - d) * (a - d) + b * c, 0.0).sqrt();
            out.push(half + disc);
            out.push(half - disc);
            i += 2;
        } else {
            out.push(Complex::new(t[(i, i)], 0.0));
            i += 1;
        }
    }
    out
}

/// The ray `ω₀ + s ω₁`, `s ≥ 0`, is nondegenerate iff `B` has no eigenvalue on the negative real axis.
pub fn ray_nondegenerate<S: Scalar>(a0: &SkewForm<S>, a1: &SkewForm<S>) -> Result<bool> {
    Ok(!pencil_spectrum(a0, a1)?.into_iter().any(is_real_negative))
}

/// Cotamed complex structures exist iff the segment is nondegenerate (same spectral test).
pub fn cotamed_exists<S: Scalar>(a0: &SkewForm<S>, a1: &SkewForm<S>) -> Result<bool> {
    ray_nondegenerate(a0, a1)
}

/// Segment `(1 − t)ω₀ + tω₁` sampled at `samples` points of `[0, 1]`: false if the Pfaffian
/// changes sign, or if a sampled local minimum of `|Pf|` refines (golden section) to a value
/// below `1e−10` of the sampled maximum. Independent of the spectral test.
pub fn segment_sampling<S: Scalar>(a0: &SkewForm<S>, a1: &SkewForm<S>, samples: usize) -> Result<bool> {
    let (m0, m1) = (a0.to_dmatrix(), a1.to_dmatrix());
    if m0.shape() != m1.shape() {
        return Err(Error::DimensionMismatch { expected: a0.dim(), got: a1.dim() });
    }
    let pf = |t: f64| pfaffian_f64(&(&m0 * (1.0 - t) + &m1 * t));
    let samples = samples.max(3);
    let ts: Vec<f64> = (0..samples).map(|i| i as f64 / (samples - 1) as f64).collect();
    let vals: Vec<f64> = ts.iter().map(|&t| pf(t)).collect();
    if vals.iter().any(|v| *v == 0.0 || v.signum() != vals[0].signum()) {
        return Ok(false);
    }
    let peak = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for i in 1..samples - 1 {
        if vals[i].abs() <= vals[i - 1].abs() && vals[i].abs() <= vals[i + 1].abs() {
            let (mut lo, mut hi) = (ts[i - 1], ts[i + 1]);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..80 {
                let (x1, x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
                if pf(x1).abs() < pf(x2).abs() {
                    hi = x2;
                } else {
                    lo = x1;
                }
            }
            let v = pf(0.5 * (lo + hi));
            if v.abs() <= 1e-10 * peak || v.signum() != vals[0].signum() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Segment nondegeneracy: the spectral test, cross-checked against `10⁴` Pfaffian samples.
/// Disagreement is reported as a numerical error.
pub fn segment_nondegenerate<S: Scalar>(a0: &SkewForm<S>, a1: &SkewForm<S>) -> Result<bool> {
    let spectral = ray_nondegenerate(a0, a1)?;
    let sampled = segment_sampling(a0, a1, 10_000)?;
    if spectral != sampled {
        return Err(Error::Numerical(format!(
            "spectral test says {spectral}, Pfaffian sampling says {sampled}; pencil is near-degenerate"
        )));
    }
    Ok(spectral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, Rational};

    fn q(rows: &[&[i64]]) -> SkewForm<Rational> {
        SkewForm::new(rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn standard_pfaffian_is_one() {
        // dx₁∧dx₂ + dx₃∧dx₄
        let a = q(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
        assert_eq!(a.pfaffian().unwrap(), rat_int(1));
        // block order (x | y) picks up the sign of the shuffle
        assert_eq!(SkewForm::<Rational>::standard(2).pfaffian().unwrap(), rat_int(-1));
        assert_eq!(pfaffian_f64(&SkewForm::<f64>::standard(3).to_dmatrix()), -1.0);
    }

    #[test]
    fn zero_row_pfaffian() {
        let a = q(&[&[0, 0, 0, 0], &[0, 0, 1, 2], &[0, -1, 0, 3], &[0, -2, -3, 0]]);
        assert_eq!(a.pfaffian().unwrap(), rat_int(0));
        assert!(!a.is_nondegenerate().unwrap());
    }

    #[test]
    fn not_skew_rejected() {
        let r = SkewForm::new(vec![vec![rat_int(0), rat_int(1)], vec![rat_int(1), rat_int(0)]]);
        assert_eq!(r, Err(Error::NotSkew));
    }

    #[test]
    fn standard_j_is_tamed_and_negation_is_not() {
        let a = SkewForm::<Rational>::standard(2);
        let j = ComplexStructure::<Rational>::standard(2);
        assert!(tames(&a, &j).unwrap());
        assert!(!tames(&a, &j.neg()).unwrap());
        assert!(tames(&a.to_f64(), &ComplexStructure::<f64>::standard(2)).unwrap());
    }

    #[test]
    fn endomorphism_of_multiples() {
        let a = SkewForm::<Rational>::standard(2);
        let b = pencil_endomorphism(&a, &a.scale(&rat_int(2))).unwrap();
        for (i, row) in b.iter().enumerate() {
            for (k, x) in row.iter().enumerate() {
                assert_eq!(*x, if i == k { rat_int(2) } else { rat_int(0) });
            }
        }
    }

    #[test]
    fn opposite_forms_degenerate_midway() {
        let a = SkewForm::<f64>::standard(2);
        assert!(!segment_nondegenerate(&a, &a.scale(&-1.0)).unwrap());
        assert!(segment_nondegenerate(&a, &a.scale(&2.0)).unwrap());
    }
}
