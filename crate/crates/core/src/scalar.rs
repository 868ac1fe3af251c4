//! Coefficient rings for forms and matrices: exact rationals and `f64`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A field of coefficients. `EXACT` rings compare with `==`; float rings use tolerances.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn to_rational(&self) -> Option<Rational>;
    fn signum_i(&self) -> i8;
    /// Absolute value as a float; used for pivoting.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    fn to_json(&self) -> serde_json::Map<String, Value>;
    fn from_json(v: &Value) -> Result<Self>;
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

fn bigint_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(v) => json!(v),
        None => Value::String(b.to_string()),
    }
}

fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}"))),
        other => Err(Error::Parse(format!("expected integer, got {other}"))),
    }
}

/// Parses `{"num":..,"den":..}`, a bare integer, or a string like `"-3/4"`.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Object(m) => {
            let num = bigint_from_json(m.get("num").ok_or_else(|| Error::Parse("missing num".into()))?)?;
            let den = match m.get("den") {
                Some(d) => bigint_from_json(d)?,
                None => BigInt::one(),
            };
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(BigRational::new(num, den))
        }
        Value::Number(_) => Ok(BigRational::from_integer(bigint_from_json(v)?)),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("expected rational, got {other}"))),
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |e: String| Error::Parse(format!("bad rational {s:?}: {e}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|e| bad(format!("{e}")))?;
        let d: BigInt = d.trim().parse().map_err(|e| bad(format!("{e}")))?;
        if d.is_zero() {
            return Err(bad("zero denominator".into()));
        }
        Ok(BigRational::new(n, d))
    } else if s.contains(['.', 'e', 'E']) {
        let f: f64 = s.parse().map_err(|e| bad(format!("{e}")))?;
        BigRational::from_float(f).ok_or_else(|| bad("not finite".into()))
    } else {
        let n: BigInt = s.parse().map_err(|e| bad(format!("{e}")))?;
        Ok(BigRational::from_integer(n))
    }
}

pub fn rational_to_json(q: &Rational) -> Value {
    json!({"num": bigint_json(q.numer()), "den": bigint_json(q.denom())})
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        rat_int(v)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn signum_i(&self) -> i8 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
    fn to_json(&self) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("num".into(), bigint_json(self.numer()));
        m.insert("den".into(), bigint_json(self.denom()));
        m
    }
    fn from_json(v: &Value) -> Result<Self> {
        rational_from_json(v)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Option<Rational> {
        None
    }
    fn signum_i(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
    fn to_json(&self) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("coeff".into(), json!(self));
        m
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(m) => {
                if let Some(c) = m.get("coeff") {
                    c.as_f64().ok_or_else(|| Error::Parse(format!("bad coeff {c}")))
                } else {
                    Ok(ToPrimitive::to_f64(&rational_from_json(v)?).unwrap_or(f64::NAN))
                }
            }
            Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
            Value::String(s) => Ok(ToPrimitive::to_f64(&parse_rational(s)?).unwrap_or(f64::NAN)),
            other => Err(Error::Parse(format!("expected number, got {other}"))),
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}
