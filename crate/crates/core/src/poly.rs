//! Univariate polynomials over ℚ and Sturm-sequence root counting.

use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::Value;

use crate::scalar::{rat, rat_int, rational_to_json, Rational, Scalar};

/// Coefficients in ascending order, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "QPoly[{}]", parts.join(", "))
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat_int(x)).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `-1` standing for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_int(i as i64))
                .collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat_int(-1))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(rat_int(1)), |acc, _| acc.mul(self))
    }

    /// Euclidean division `self = q·d + r`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dl = d.leading();
        let dd = d.coeffs.len() - 1;
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn square_free(&self) -> Self {
        if self.degree() <= 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(rational_to_json).collect())
    }
}

fn sign(q: &Rational) -> i8 {
    q.signum_i()
}

/// Sturm sequence `q, q', -rem(q, q'), ...` of the square-free part `q = p / gcd(p, p')`.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<QPoly>,
}

impl SturmSequence {
    pub fn new(p: &QPoly) -> Self {
        let p = &p.square_free();
        let mut seq = vec![p.clone()];
        if p.degree() <= 0 {
            return SturmSequence { seq };
        }
        seq.push(p.derivative());
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        SturmSequence { seq }
    }

    fn changes(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::changes(self.seq.iter().map(|p| sign(&p.eval(x))))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::changes(self.seq.iter().map(|p| sign(&p.leading())))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::changes(self.seq.iter().map(|p| {
            let s = sign(&p.leading());
            if p.degree() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Number of distinct real roots in `(a, ∞)`.
    pub fn count_roots_above(&self, a: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at_pos_inf())
    }
}

/// An isolating interval `[lo, hi]` containing exactly one root (`lo == hi` for an exact root).
#[derive(Clone, Debug, PartialEq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn to_json(&self) -> Value {
        serde_json::json!({"lo": rational_to_json(&self.lo), "hi": rational_to_json(&self.hi)})
    }
}

/// Isolates the distinct real roots of `p` in `[a, b]`, each interval of width ≤ `width`.
pub fn isolate_roots(p: &QPoly, a: &Rational, b: &Rational, width: &Rational) -> Vec<RootInterval> {
    let mut out = Vec::new();
    if p.is_zero() || p.degree() == 0 {
        return out;
    }
    let sturm = SturmSequence::new(p);
    if p.eval(a).is_zero() {
        out.push(RootInterval { lo: a.clone(), hi: a.clone() });
    }
    let mut stack = vec![(a.clone(), b.clone())];
    let mut found = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm.count_roots(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 && (&hi - &lo) <= *width {
            if p.eval(&hi).is_zero() {
                found.push(RootInterval { lo: hi.clone(), hi });
            } else {
                found.push(RootInterval { lo, hi });
            }
            continue;
        }
        let mid = (&lo + &hi) / rat_int(2);
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    found.sort_by(|x, y| x.lo.cmp(&y.lo));
    found.dedup();
    out.extend(found);
    out
}

/// Sign of `p` on `[a, b]` (`b = None` means `+∞`): `Some(±1)` if constant sign, `None` otherwise.
pub fn sign_on_interval(p: &QPoly, a: &Rational, b: Option<&Rational>) -> Option<i8> {
    if p.is_zero() {
        return None;
    }
    let sa = sign(&p.eval(a));
    if sa == 0 {
        return None;
    }
    let sturm = SturmSequence::new(p);
    let roots = match b {
        Some(b) => {
            if sign(&p.eval(b)) != sa {
                return None;
            }
            sturm.count_roots(a, b)
        }
        None => {
            if p.degree() > 0 && sign(&p.leading()) != sa {
                return None;
            }
            sturm.count_roots_above(a)
        }
    };
    if roots == 0 {
        Some(sa)
    } else {
        None
    }
}

/// A rational point in `[a, b]` where `p ≤ 0` (`p < 0` when possible), if any exists.
pub fn nonpositive_point(p: &QPoly, a: &Rational, b: &Rational) -> Option<Rational> {
    let roots = isolate_roots(p, a, b, &rat(1, 1 << 20));
    let mut candidates = vec![a.clone(), b.clone()];
    let mut edges = vec![a.clone()];
    for r in &roots {
        edges.push(r.lo.clone());
        edges.push(r.hi.clone());
    }
    edges.push(b.clone());
    for w in edges.windows(2) {
        candidates.push((&w[0] + &w[1]) / rat_int(2));
    }
    let mut best: Option<(Rational, Rational)> = None;
    for c in candidates {
        let v = p.eval(&c);
        if v.is_negative() && best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((c, v));
        }
    }
    if let Some((c, _)) = best {
        return Some(c);
    }
    roots.into_iter().find(|r| r.lo == r.hi).map(|r| r.lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_root_at_endpoint_is_isolated() {
        // 18(1 - x)^3 + 14x(1 - x)^2 = (1 - x)^2 (18 - 4x)
        let p = QPoly::from_ints(&[18, -40, 26, -4]);
        let roots = isolate_roots(&p, &rat_int(0), &rat_int(1), &rat(1, 1 << 20));
        assert_eq!(roots, vec![RootInterval { lo: rat_int(1), hi: rat_int(1) }]);
        assert_eq!(sign_on_interval(&p, &rat_int(0), Some(&rat_int(1))), None);
        assert_eq!(SturmSequence::new(&p).count_roots(&rat_int(0), &rat(1, 2)), 0);
    }

    #[test]
    fn square_free_part() {
        let p = QPoly::from_ints(&[1, -1]).pow(3).mul(&QPoly::from_ints(&[2, 1]));
        let q = p.square_free();
        assert_eq!(q.degree(), 2);
        assert!(q.eval(&rat_int(1)).is_zero() && q.eval(&rat_int(-2)).is_zero());
    }
}
