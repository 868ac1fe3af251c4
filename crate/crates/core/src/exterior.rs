//! Exterior algebra over a named coframe.
//!
//! A blade `e^{i1} ∧ ... ∧ e^{ik}` with `i1 < ... < ik` is stored as a bitmask.
//! The coframe order fixes the orientation: the top blade is positive.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_DIM: usize = 16;

pub type Blade = u32;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coframe {
    names: Arc<Vec<String>>,
}

impl fmt::Debug for Coframe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coframe{:?}", self.names)
    }
}

impl Coframe {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() || names.len() > MAX_DIM {
            return Err(Error::InvalidCoframe(format!(
                "dimension {} not in 1..={MAX_DIM}",
                names.len()
            )));
        }
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::InvalidCoframe("empty name".into()));
            }
            if names[..i].contains(a) {
                return Err(Error::InvalidCoframe(format!("duplicate name {a:?}")));
            }
        }
        Ok(Coframe { names: Arc::new(names) })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn top_blade(&self) -> Blade {
        ((1u64 << self.dim()) - 1) as Blade
    }

    /// Concatenation, e.g. `(ds, dt) ⊕ algebra`.
    pub fn concat(&self, other: &Coframe) -> Result<Coframe> {
        Coframe::new(self.names.iter().chain(other.names.iter()).cloned())
    }
}

pub fn blade_indices(b: Blade) -> Vec<usize> {
    let mut out = Vec::with_capacity(b.count_ones() as usize);
    let mut m = b;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Sign of `a ∧ b` relative to the sorted blade `a | b`; `None` if they overlap.
pub fn wedge_sign(a: Blade, b: Blade) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut m = b;
    while m != 0 {
        let j = m.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        m &= m - 1;
    }
    Some(swaps % 2 == 1)
}

/// Sorts an index tuple into a blade, returning the permutation parity; `None` on repeats.
pub fn blade_from_indices(idx: &[usize]) -> Option<(Blade, bool)> {
    let mut v = idx.to_vec();
    let mut neg = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    let mut b: Blade = 0;
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    for &i in &v {
        b |= 1 << i;
    }
    Some((b, neg))
}

#[derive(Clone, PartialEq)]
pub struct Form<S: Scalar> {
    coframe: Coframe,
    degree: usize,
    terms: BTreeMap<Blade, S>,
}

impl<S: Scalar> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<S: Scalar> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let names: Vec<&str> = blade_indices(*b)
                .into_iter()
                .map(|i| self.coframe.names[i].as_str())
                .collect();
            if names.is_empty() {
                write!(f, "{c:?}")?;
            } else {
                write!(f, "{c:?}·{}", names.join("∧"))?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Form<S> {
    pub fn zero(coframe: &Coframe, degree: usize) -> Self {
        Form { coframe: coframe.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn scalar(coframe: &Coframe, c: S) -> Self {
        let mut f = Self::zero(coframe, 0);
        f.insert(0, c);
        f
    }

    /// The basis covector `e^i`.
    pub fn basis(coframe: &Coframe, i: usize) -> Self {
        assert!(i < coframe.dim(), "basis index out of range");
        let mut f = Self::zero(coframe, 1);
        f.insert(1 << i, S::one());
        f
    }

    pub fn from_covector(coframe: &Coframe, coeffs: &[S]) -> Result<Self> {
        if coeffs.len() != coframe.dim() {
            return Err(Error::DimensionMismatch { expected: coframe.dim(), got: coeffs.len() });
        }
        let mut f = Self::zero(coframe, 1);
        for (i, c) in coeffs.iter().enumerate() {
            f.insert(1 << i, c.clone());
        }
        Ok(f)
    }

    /// Builds a form from `(indices, coefficient)` pairs; indices need not be sorted.
    pub fn from_terms<I>(coframe: &Coframe, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, S)>,
    {
        if degree > coframe.dim() {
            return Err(Error::DegreeOutOfRange { degree, dim: coframe.dim() });
        }
        let mut f = Self::zero(coframe, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::DegreeOutOfRange { degree: idx.len(), dim: degree });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= coframe.dim()) {
                return Err(Error::DegreeOutOfRange { degree: bad, dim: coframe.dim() });
            }
            if let Some((b, neg)) = blade_from_indices(&idx) {
                f.accumulate(b, if neg { -c } else { c });
            }
        }
        Ok(f)
    }

    /// The 2-form `Σ_{i<j} A_ij e^i ∧ e^j`, so that `ω(v, w) = vᵀ A w`.
    pub fn from_skew_matrix(coframe: &Coframe, a: &[Vec<S>]) -> Result<Self> {
        let n = coframe.dim();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: a.len() });
        }
        let mut f = Self::zero(coframe, 2);
        for i in 0..n {
            for j in i + 1..n {
                f.insert((1 << i) | (1 << j), a[i][j].clone());
            }
        }
        Ok(f)
    }

    /// Antisymmetric matrix of a 2-form.
    pub fn skew_matrix(&self) -> Result<Vec<Vec<S>>> {
        if self.degree != 2 {
            return Err(Error::DegreeOutOfRange { degree: self.degree, dim: 2 });
        }
        let n = self.coframe.dim();
        let mut a = vec![vec![S::zero(); n]; n];
        for (b, c) in &self.terms {
            let idx = blade_indices(*b);
            a[idx[0]][idx[1]] = c.clone();
            a[idx[1]][idx[0]] = -c.clone();
        }
        Ok(a)
    }

    fn insert(&mut self, b: Blade, c: S) {
        if c.is_zero() {
            self.terms.remove(&b);
        } else {
            self.terms.insert(b, c);
        }
    }

    fn accumulate(&mut self, b: Blade, c: S) {
        if c.is_zero() {
            return;
        }
        let next = match self.terms.remove(&b) {
            Some(old) => old + c,
            None => c,
        };
        self.insert(b, next);
    }

    pub fn coframe(&self) -> &Coframe {
        &self.coframe
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &S)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    /// Coefficient of the blade with the given (possibly unsorted) indices.
    pub fn coefficient(&self, idx: &[usize]) -> S {
        match blade_from_indices(idx) {
            Some((b, neg)) => {
                let c = self.terms.get(&b).cloned().unwrap_or_else(S::zero);
                if neg {
                    -c
                } else {
                    c
                }
            }
            None => S::zero(),
        }
    }

    pub fn blade_coefficient(&self, b: Blade) -> S {
        self.terms.get(&b).cloned().unwrap_or_else(S::zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.coframe != other.coframe {
            return Err(Error::CoframeMismatch(format!(
                "{:?} vs {:?}",
                self.coframe.names(),
                other.coframe.names()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.degree != other.degree {
            if other.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(other.clone());
            }
            return Err(Error::DegreeOutOfRange { degree: other.degree, dim: self.degree });
        }
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.accumulate(*b, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(&self.coframe, self.degree);
        if c.is_zero() {
            return out;
        }
        for (b, v) in &self.terms {
            out.insert(*b, v.clone() * c.clone());
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let degree = self.degree + other.degree;
        if degree > self.coframe.dim() {
            return Ok(Self::zero(&self.coframe, degree.min(self.coframe.dim())));
        }
        let mut out = Self::zero(&self.coframe, degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(neg) = wedge_sign(*a, *b) {
                    let p = ca.clone() * cb.clone();
                    out.accumulate(a | b, if neg { -p } else { p });
                }
            }
        }
        Ok(out)
    }

    /// `a^k` with `a^0 = 1`.
    pub fn power(&self, k: usize) -> Self {
        let mut out = Self::scalar(&self.coframe, S::one());
        for _ in 0..k {
            out = out.wedge(self).expect("same coframe");
            if out.is_zero() {
                return Self::zero(&self.coframe, (k * self.degree).min(self.coframe.dim()));
            }
        }
        out
    }

    /// `ι_v a`, contracting into the first slot.
    pub fn interior(&self, v: &[S]) -> Result<Self> {
        if v.len() != self.coframe.dim() {
            return Err(Error::DimensionMismatch { expected: self.coframe.dim(), got: v.len() });
        }
        if self.degree == 0 {
            return Ok(Self::zero(&self.coframe, 0));
        }
        let mut out = Self::zero(&self.coframe, self.degree - 1);
        for (b, c) in &self.terms {
            for (p, i) in blade_indices(*b).into_iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let t = v[i].clone() * c.clone();
                out.accumulate(b ^ (1 << i), if p % 2 == 1 { -t } else { t });
            }
        }
        Ok(out)
    }

    pub fn interior_vector(&self, v: &VectorElem<S>) -> Result<Self> {
        if v.coframe != self.coframe {
            return Err(Error::CoframeMismatch("vector and form".into()));
        }
        self.interior(&v.coords)
    }

    /// Value of a degree-0 form.
    pub fn scalar_value(&self) -> S {
        self.blade_coefficient(0)
    }

    /// Coefficient of the positively oriented top blade (zero for lower degrees).
    pub fn top_coefficient(&self) -> S {
        if self.degree != self.coframe.dim() {
            return S::zero();
        }
        self.blade_coefficient(self.coframe.top_blade())
    }

    /// `L^* a` for the linear map `L` acting on vectors: `e^i ↦ Σ_j L_ij e^j`.
    pub fn pullback(&self, l: &[Vec<S>]) -> Result<Self> {
        let n = self.coframe.dim();
        if l.len() != n || l.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: l.len() });
        }
        let images: Vec<Self> = (0..n)
            .map(|i| Self::from_covector(&self.coframe, &l[i]))
            .collect::<Result<_>>()?;
        let mut out = Self::zero(&self.coframe, self.degree);
        for (b, c) in &self.terms {
            let mut acc = Self::scalar(&self.coframe, c.clone());
            for i in blade_indices(*b) {
                acc = acc.wedge(&images[i])?;
                if acc.is_zero() {
                    break;
                }
            }
            for (bb, cc) in acc.terms {
                out.accumulate(bb, cc);
            }
        }
        Ok(out)
    }

    /// Same coefficients on a different coframe of equal dimension (e.g. after renaming).
    pub fn with_coframe(&self, coframe: &Coframe) -> Result<Self> {
        if coframe.dim() != self.coframe.dim() {
            return Err(Error::DimensionMismatch { expected: self.coframe.dim(), got: coframe.dim() });
        }
        Ok(Form { coframe: coframe.clone(), degree: self.degree, terms: self.terms.clone() })
    }

    /// Re-indexes onto a larger coframe, mapping index `i` to `map[i]`.
    pub fn embed(&self, target: &Coframe, map: &[usize]) -> Result<Self> {
        if map.len() != self.coframe.dim() {
            return Err(Error::DimensionMismatch { expected: self.coframe.dim(), got: map.len() });
        }
        let mut out = Self::zero(target, self.degree);
        for (b, c) in &self.terms {
            let idx: Vec<usize> = blade_indices(*b).into_iter().map(|i| map[i]).collect();
            if let Some((bb, neg)) = blade_from_indices(&idx) {
                out.accumulate(bb, if neg { -c.clone() } else { c.clone() });
            }
        }
        Ok(out)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        let mut out = Form::<T>::zero(&self.coframe, self.degree);
        for (b, c) in &self.terms {
            out.insert(*b, f(c));
        }
        out
    }

    pub fn to_f64(&self) -> Form<f64> {
        self.map(|c| c.to_f64())
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(b, c)| {
                let mut m = c.to_json();
                m.insert("blade".into(), json!(blade_indices(*b)));
                Value::Object(m)
            })
            .collect();
        json!({"coframe": self.coframe.names(), "degree": self.degree, "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let names: Vec<String> = v
            .get("coframe")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing coframe".into()))?
            .iter()
            .map(|n| n.as_str().map(str::to_owned).ok_or_else(|| Error::Parse("bad name".into())))
            .collect::<Result<_>>()?;
        let coframe = Coframe::new(names)?;
        let degree = v
            .get("degree")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing degree".into()))? as usize;
        let mut terms = Vec::new();
        for t in v.get("terms").and_then(Value::as_array).into_iter().flatten() {
            let idx: Vec<usize> = t
                .get("blade")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("missing blade".into()))?
                .iter()
                .map(|i| i.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse("bad index".into())))
                .collect::<Result<_>>()?;
            terms.push((idx, S::from_json(t)?));
        }
        Self::from_terms(&coframe, degree, terms)
    }
}

impl<S: Scalar> Add for &Form<S> {
    type Output = Form<S>;
    /// Panics if the coframes differ; use [`Form::try_add`] for fallible addition.
    fn add(self, rhs: &Form<S>) -> Form<S> {
        self.try_add(rhs).expect("adding forms on different coframes")
    }
}

impl<S: Scalar> Add for Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: Form<S>) -> Form<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Neg for &Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Neg for Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        -&self
    }
}

impl<S: Scalar> Sub for &Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: &Form<S>) -> Form<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Sub for Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: Form<S>) -> Form<S> {
        &self - &rhs
    }
}

/// A tangent vector in the frame dual to a coframe.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorElem<S: Scalar> {
    pub coframe: Coframe,
    pub coords: Vec<S>,
}

impl<S: Scalar> VectorElem<S> {
    pub fn new(coframe: &Coframe, coords: Vec<S>) -> Result<Self> {
        if coords.len() != coframe.dim() {
            return Err(Error::DimensionMismatch { expected: coframe.dim(), got: coords.len() });
        }
        Ok(VectorElem { coframe: coframe.clone(), coords })
    }
}

/// Evaluates a k-form on k vectors (given as coordinate slices).
pub fn evaluate<S: Scalar>(form: &Form<S>, vectors: &[Vec<S>]) -> Result<S> {
    if vectors.len() != form.degree() {
        return Err(Error::DegreeOutOfRange { degree: vectors.len(), dim: form.degree() });
    }
    let mut f = form.clone();
    for v in vectors {
        f = f.interior(v)?;
    }
    Ok(f.scalar_value())
}
