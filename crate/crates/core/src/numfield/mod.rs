//! Number fields `ℚ[X]/(f)` of degree at most 4, their embeddings, exact norms on the order
//! `ℤ[X]/(f)`, units, the log-embedding lattice and monodromy matrices.

pub mod lattice;
pub mod units;

use nalgebra::{Complex, DMatrix};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{QPoly, SturmSequence};

pub use lattice::{
    build_liealg_pair, gamma_lattice, hyperbolic_sl2_lattice, monodromy_matrix, pipeline, FieldPipeline,
    GammaVector, HyperbolicLattice, LatticeData, PairReport,
};
pub use units::{find_units, pell_fundamental_unit, positive_units, default_box_bound, UnitGroup, MAX_CANDIDATES};

pub const MAX_DEGREE: usize = 4;

/// Monic integer polynomial, coefficients ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<i64>,
}

impl Poly {
    /// Validates monic, degree in `1..=4`, squarefree, no rational roots (degree ≥ 2) and no
    /// factorization into two integer quadratics (degree 4).
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        let shown = format!("{coeffs:?}");
        let bad = |m: &str| Err(Error::InvalidPolynomial(format!("{shown}: {m}")));
        let n = coeffs.len().saturating_sub(1);
        if n == 0 || n > MAX_DEGREE {
            return bad("degree must be between 1 and 4");
        }
        if coeffs[n] != 1 {
            return bad("not monic");
        }
        if coeffs.iter().any(|c| c.unsigned_abs() > 1 << 20) {
            return bad("coefficients larger than 2^20");
        }
        let p = Poly { coeffs };
        let q = p.to_qpoly();
        if q.gcd(&q.derivative()).degree() > 0 {
            return bad("not squarefree");
        }
        if n >= 2 {
            if let Some(r) = p.integer_root() {
                return bad(&format!("rational root {r}"));
            }
            if n == 4 {
                if let Some((a, b, c, d)) = p.quadratic_factors() {
                    return bad(&format!("factors as (X² + {a}X + {b})(X² + {c}X + {d})"));
                }
            }
        }
        Ok(p)
    }

    /// Parses `"-2,0,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let coeffs: std::result::Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
        Self::new(coeffs.map_err(|e| Error::Parse(format!("polynomial {s:?}: {e}")))?)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::from_ints(&self.coeffs)
    }

    fn eval_i128(&self, x: i128) -> Option<i128> {
        self.coeffs.iter().rev().try_fold(0i128, |acc, &c| acc.checked_mul(x)?.checked_add(c as i128))
    }

    /// A monic integer polynomial has only integer rational roots, and they divide `f(0)`.
    fn integer_root(&self) -> Option<i64> {
        let c0 = self.coeffs[0];
        if c0 == 0 {
            return Some(0);
        }
        divisors(c0.unsigned_abs())
            .into_iter()
            .flat_map(|d| [d as i64, -(d as i64)])
            .find(|&r| self.eval_i128(r as i128) == Some(0))
    }

    /// `X⁴ + a₃X³ + a₂X² + a₁X + a₀ = (X² + aX + b)(X² + cX + d)` over ℤ. `b` runs over the
    /// divisors of `a₀`; then `a` solves `a² − a₃a + (a₂ − b − d) = 0`.
    fn quadratic_factors(&self) -> Option<(i64, i64, i64, i64)> {
        let [a0, a1, a2, a3, _] = self.coeffs[..] else { return None };
        for dv in divisors(a0.unsigned_abs()) {
            for b in [dv as i64, -(dv as i64)] {
                let d = a0 / b;
                let disc = a3 as i128 * a3 as i128 - 4 * (a2 as i128 - b as i128 - d as i128);
                let Some(sq) = isqrt(disc) else { continue };
                for num in [a3 as i128 + sq, a3 as i128 - sq] {
                    if num % 2 != 0 {
                        continue;
                    }
                    let a = (num / 2) as i64;
                    let c = a3 - a;
                    if a as i128 * d as i128 + b as i128 * c as i128 == a1 as i128 {
                        return Some((a, b, c, d));
                    }
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> Value {
        json!(self.coeffs)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// All complex roots of a monic integer polynomial by Aberth–Ehrlich iteration.
fn aberth_roots(c: &[i64]) -> Vec<Complex<f64>> {
    let n = c.len() - 1;
    let eval = |z: Complex<f64>| {
        let (mut p, mut dp) = (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
        for &a in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + a as f64;
        }
        (p, dp)
    };
    let radius = 1.0 + c[..n].iter().map(|&a| (a as f64).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex<f64>> =
        (0..n).map(|k| Complex::from_polar(0.5 * radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex<f64> = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            z[k] -= step;
            moved = moved.max(step.norm() / (1.0 + z[k].norm()));
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

fn isqrt(x: i128) -> Option<i128> {
    if x < 0 {
        return None;
    }
    let mut r = (x as f64).sqrt() as i128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    (r * r == x).then_some(r)
}

/// Element of `ℤ[X]/(f)` in the power basis `1, X, …, X^{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderElement(pub Vec<i64>);

impl OrderElement {
    pub fn one(n: usize) -> Self {
        let mut c = vec![0; n];
        c[0] = 1;
        OrderElement(c)
    }

    pub fn is_one(&self) -> bool {
        self.0[0] == 1 && self.0[1..].iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        OrderElement(self.0.iter().map(|c| -c).collect())
    }

    pub fn to_json(&self) -> Value {
        json!(self.0)
    }
}

#[derive(Clone, Debug)]
pub struct NumberField {
    pub poly: Poly,
    /// Real roots in decreasing order.
    pub real_roots: Vec<f64>,
    /// One root with `Im > 0` per conjugate pair, by increasing real part.
    pub complex_roots: Vec<Complex<f64>>,
}

impl NumberField {
    /// Roots from the companion matrix, polished by 10 Newton steps. The number of real roots is
    /// the exact Sturm count.
    pub fn new(poly: Poly) -> Result<Self> {
        let n = poly.degree();
        let c = poly.coeffs();
        let mut roots = aberth_roots(c);
        let q = poly.to_qpoly();
        let sturm = SturmSequence::new(&q);
        let r = sturm.variations_at_neg_inf() - sturm.variations_at_pos_inf();
        if (n - r) % 2 == 1 {
            return Err(Error::Numerical(format!("Sturm count {r} incompatible with degree {n}")));
        }
        let newton = |mut z: Complex<f64>| {
            for _ in 0..10 {
                let (mut p, mut dp) = (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
                for &a in c.iter().rev() {
                    dp = dp * z + p;
                    p = p * z + a as f64;
                }
                if dp.norm() == 0.0 {
                    break;
                }
                z -= p / dp;
            }
            z
        };
        roots.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
        let mut real_roots: Vec<f64> = roots[..r].iter().map(|z| newton(Complex::new(z.re, 0.0)).re).collect();
        real_roots.sort_by(|a, b| b.total_cmp(a));
        let mut complex_roots: Vec<Complex<f64>> =
            roots[r..].iter().filter(|z| z.im > 0.0).map(|&z| newton(z)).map(|z| if z.im < 0.0 { z.conj() } else { z }).collect();
        complex_roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        if complex_roots.len() * 2 != n - r {
            return Err(Error::Numerical("complex roots do not come in conjugate pairs".into()));
        }
        let field = NumberField { poly, real_roots, complex_roots };
        for z in field.all_roots() {
            let v = field.eval_poly(z).norm();
            if v > 1e-12 * (1.0 + z.norm()).powi(n as i32) {
                return Err(Error::Numerical(format!("root {z} has residual {v:e}")));
            }
        }
        Ok(field)
    }

    pub fn from_coeffs(c: &[i64]) -> Result<Self> {
        Self::new(Poly::new(c.to_vec())?)
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// `(r, s)`.
    pub fn signature(&self) -> (usize, usize) {
        (self.real_roots.len(), self.complex_roots.len())
    }

    pub fn is_totally_real(&self) -> bool {
        self.complex_roots.is_empty()
    }

    fn eval_poly(&self, z: Complex<f64>) -> Complex<f64> {
        self.poly.coeffs().iter().rev().fold(Complex::new(0.0, 0.0), |acc, &a| acc * z + a as f64)
    }

    /// Real roots, then complex representatives.
    pub fn all_roots(&self) -> Vec<Complex<f64>> {
        self.real_roots.iter().map(|&x| Complex::new(x, 0.0)).chain(self.complex_roots.iter().copied()).collect()
    }

    pub fn element(&self, coords: &[i64]) -> Result<OrderElement> {
        if coords.len() != self.degree() {
            return Err(Error::DimensionMismatch { expected: self.degree(), got: coords.len() });
        }
        Ok(OrderElement(coords.to_vec()))
    }

    /// `x(ρ_1), …, x(ρ_r), x(σ_1), …, x(σ_s)`.
    pub fn embed(&self, x: &OrderElement) -> Vec<Complex<f64>> {
        self.all_roots()
            .into_iter()
            .map(|z| x.0.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &a| acc * z + a as f64))
            .collect()
    }

    /// Product `x·y` reduced modulo `f`, with overflow reported.
    pub fn mul(&self, x: &OrderElement, y: &OrderElement) -> Result<OrderElement> {
        let n = self.degree();
        let f = self.poly.coeffs();
        let overflow = || Error::Numerical("integer overflow in order arithmetic".into());
        let mut prod = vec![0i128; 2 * n - 1];
        for (i, &a) in x.0.iter().enumerate() {
            for (j, &b) in y.0.iter().enumerate() {
                prod[i + j] = prod[i + j].checked_add(a as i128 * b as i128).ok_or_else(overflow)?;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let t = prod[k];
            if t != 0 {
                for i in 0..n {
                    let sub = t.checked_mul(f[i] as i128).ok_or_else(overflow)?;
                    prod[k - n + i] = prod[k - n + i].checked_sub(sub).ok_or_else(overflow)?;
                }
                prod[k] = 0;
            }
        }
        prod[..n].iter().map(|&v| i64::try_from(v).map_err(|_| overflow())).collect::<Result<Vec<_>>>().map(OrderElement)
    }

    pub fn pow(&self, x: &OrderElement, k: u32) -> Result<OrderElement> {
        let mut acc = OrderElement::one(self.degree());
        for _ in 0..k {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Matrix of multiplication by `x`: column `j` holds the coordinates of `x·X^j`.
    pub fn mult_matrix(&self, x: &OrderElement) -> Result<Vec<Vec<i64>>> {
        let n = self.degree();
        let mut m = vec![vec![0i64; n]; n];
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            let col = self.mul(x, &OrderElement(e))?;
            for i in 0..n {
                m[i][j] = col.0[i];
            }
        }
        Ok(m)
    }

    /// Exact `N(x) = Res(f, x)`, evaluated as the determinant of multiplication by `x` (equal to
    /// the resultant because `f` is monic).
    pub fn norm(&self, x: &OrderElement) -> Result<i64> {
        let m = self.mult_matrix(x)?;
        let d = det_i128(&m)?;
        i64::try_from(d).map_err(|_| Error::Numerical("norm exceeds i64".into()))
    }

    /// `Π ρ_i(x) · Π |σ_j(x)|²`.
    pub fn norm_f64(&self, x: &OrderElement) -> f64 {
        let r = self.real_roots.len();
        self.embed(x).iter().enumerate().map(|(i, z)| if i < r { z.re } else { z.norm_sqr() }).product()
    }

    /// Inverse of a unit, from the inverse of its multiplication matrix.
    pub fn unit_inverse(&self, x: &OrderElement) -> Result<OrderElement> {
        let nm = self.norm(x)?;
        if nm.abs() != 1 {
            return Err(Error::Precondition(format!("{:?} has norm {nm}, not a unit", x.0)));
        }
        let m = self.mult_matrix(x)?;
        let n = self.degree();
        // x⁻¹ = M⁻¹e₀ = adj(M)e₀ / det(M): the first column of the adjugate.
        let mut out = vec![0i64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&r| r != 0)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                .collect();
            let cof = det_i128(&minor)? * if i % 2 == 0 { 1 } else { -1 };
            *o = i64::try_from(cof * nm as i128).map_err(|_| Error::Numerical("inverse exceeds i64".into()))?;
        }
        let inv = OrderElement(out);
        debug_assert!(self.mul(x, &inv).map(|p| p.is_one()).unwrap_or(false));
        Ok(inv)
    }

    /// `(ln ρ_i(x))_i, (ln|σ_j(x)|)_j` (real places use `ln|ρ_i|`).
    pub fn log_abs(&self, x: &OrderElement) -> Vec<f64> {
        self.embed(x).iter().map(|z| z.norm().ln()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "poly": self.poly.to_json(),
            "signature": [self.real_roots.len(), self.complex_roots.len()],
            "real_roots": self.real_roots,
            "complex_roots": self.complex_roots.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        })
    }
}

/// Fraction-free (Bareiss) determinant.
pub fn det_i128(m: &[Vec<i64>]) -> Result<i128> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let overflow = || Error::Numerical("integer overflow in determinant".into());
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return Ok(0) };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                    .ok_or_else(overflow)?;
                a[i][j] = t / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

pub(crate) fn to_f64_matrix(m: &[Vec<i64>]) -> DMatrix<f64> {
    DMatrix::from_fn(m.len(), m.len(), |i, j| m[i][j].to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures_of_small_fields() {
        assert_eq!(NumberField::from_coeffs(&[-1, 1]).unwrap().signature(), (1, 0));
        let gi = NumberField::from_coeffs(&[1, 0, 1]).unwrap();
        assert_eq!(gi.signature(), (0, 1));
        assert!((gi.complex_roots[0] - Complex::new(0.0, 1.0)).norm() < 1e-15);
        let r2 = NumberField::from_coeffs(&[-2, 0, 1]).unwrap();
        assert_eq!(r2.signature(), (2, 0));
        assert!((r2.real_roots[0] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn reducible_polynomials_rejected() {
        assert!(Poly::new(vec![-1, 0, 1]).is_err());
        assert!(Poly::new(vec![0, 0, 1]).is_err());
        assert!(Poly::new(vec![2, 0, 3, 0, 1]).is_err()); // (X²+1)(X²+2)
        assert!(Poly::new(vec![1, 0, 0, 0, 1]).is_ok());
        assert!(Poly::new(vec![2, 0, 1, 2]).is_err()); // not monic
    }

    #[test]
    fn quadratic_norms() {
        let r2 = NumberField::from_coeffs(&[-2, 0, 1]).unwrap();
        let gi = NumberField::from_coeffs(&[1, 0, 1]).unwrap();
        for a in -4..=4 {
            for b in -4..=4 {
                let x = OrderElement(vec![a, b]);
                assert_eq!(r2.norm(&x).unwrap(), a * a - 2 * b * b);
                assert_eq!(gi.norm(&x).unwrap(), a * a + b * b);
            }
        }
        assert_eq!(r2.norm(&OrderElement(vec![3, 2])).unwrap(), 1);
    }

    #[test]
    fn unit_inverse_in_cubic() {
        let k = NumberField::from_coeffs(&[-1, -3, 0, 1]).unwrap();
        let x = OrderElement(vec![0, 1, 0]);
        let inv = k.unit_inverse(&x).unwrap();
        assert!(k.mul(&x, &inv).unwrap().is_one());
    }
}
