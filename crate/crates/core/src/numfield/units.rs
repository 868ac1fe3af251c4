//! Unit discovery by bounded box search, with a continued-fraction oracle for real quadratic fields.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numfield::{NumberField, OrderElement};

/// Largest number of enumerated coordinate vectors.
pub const MAX_CANDIDATES: u64 = 1_000_000;
/// Log-embedding norm below which a unit is treated as a root of unity.
pub const TORSION_TOL: f64 = 1e-9;
/// Largest order tried when verifying a root of unity exactly.
pub const MAX_TORSION_ORDER: u32 = 12;

/// Candidate budget used when no box bound is given.
pub const DEFAULT_CANDIDATES: u64 = 100_000;

/// Largest box bound whose candidate count stays within [`DEFAULT_CANDIDATES`].
pub fn default_box_bound(degree: usize) -> i64 {
    let mut b = 1i64;
    while ((2 * (b + 1) + 1) as u64).checked_pow(degree as u32).is_some_and(|c| c <= DEFAULT_CANDIDATES) && b < 1000 {
        b += 1;
    }
    b
}

#[derive(Clone, Debug)]
pub struct UnitGroup {
    /// Every root of unity found, sorted.
    pub torsion: Vec<OrderElement>,
    /// A root of unity of maximal order.
    pub torsion_generator: OrderElement,
    pub torsion_order: u32,
    /// Free generators, normalized so the first nonzero log coordinate is positive.
    pub free: Vec<OrderElement>,
    pub rank: usize,
    pub box_bound: i64,
    pub candidates: u64,
    pub units_found: usize,
    /// Degree-2 totally real fields: whether the box search and the Pell oracle agree.
    pub pell_agrees: Option<bool>,
}

impl UnitGroup {
    pub fn to_json(&self, field: &NumberField) -> Value {
        json!({
            "torsion": self.torsion.iter().map(OrderElement::to_json).collect::<Vec<_>>(),
            "torsion_generator": self.torsion_generator.to_json(),
            "torsion_order": self.torsion_order,
            "free": self.free.iter().map(|u| json!({
                "coords": u.to_json(),
                "norm": field.norm(u).ok(),
                "log": field.log_abs(u),
            })).collect::<Vec<_>>(),
            "rank": self.rank,
            "box_bound": self.box_bound,
            "candidates": self.candidates,
            "units_found": self.units_found,
            "pell_agrees": self.pell_agrees,
        })
    }
}

fn log_norm(field: &NumberField, u: &OrderElement) -> f64 {
    field.log_abs(u).iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn torsion_order(field: &NumberField, u: &OrderElement) -> Result<Option<u32>> {
    let mut acc = u.clone();
    for m in 1..=MAX_TORSION_ORDER {
        if acc.is_one() {
            return Ok(Some(m));
        }
        acc = field.mul(&acc, u)?;
    }
    Ok(None)
}

/// Replaces `u` by `u⁻¹` when its first non-negligible log coordinate is negative, then by `−u`
/// when its first real embedding is negative.
pub fn normalize_free(field: &NumberField, u: &OrderElement) -> Result<OrderElement> {
    let first = field.log_abs(u).into_iter().find(|x| x.abs() > 1e-9).unwrap_or(0.0);
    let u = if first < 0.0 { field.unit_inverse(u)? } else { u.clone() };
    let negative = field.signature().0 > 0 && field.embed(&u)[0].re < 0.0;
    Ok(if negative { u.neg() } else { u })
}

/// Enumerates `|coord| ≤ box_bound`, keeps exact norm `±1`, separates roots of unity and picks
/// free generators greedily (shortest log vector first) until the Dirichlet rank `r + s − 1`.
pub fn find_units(field: &NumberField, box_bound: i64) -> Result<UnitGroup> {
    let n = field.degree();
    if box_bound < 1 {
        return Err(Error::Precondition("box bound must be at least 1".into()));
    }
    let side = (2 * box_bound + 1) as u64;
    let candidates = side
        .checked_pow(n as u32)
        .filter(|&c| c <= MAX_CANDIDATES)
        .ok_or_else(|| Error::Precondition(format!("box bound {box_bound} gives more than {MAX_CANDIDATES} candidates")))?;
    let decode = |mut idx: u64| {
        let mut c = vec![0i64; n];
        for x in c.iter_mut() {
            *x = (idx % side) as i64 - box_bound;
            idx /= side;
        }
        OrderElement(c)
    };
    let mut units: Vec<OrderElement> = (0..candidates)
        .into_par_iter()
        .filter_map(|i| {
            let x = decode(i);
            match field.norm(&x) {
                Ok(v) if v.abs() == 1 => Some(Ok(x)),
                Ok(_) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    units.sort();
    let units_found = units.len();

    let mut torsion = Vec::new();
    let mut free_candidates = Vec::new();
    for u in units {
        let ln = log_norm(field, &u);
        if ln <= TORSION_TOL {
            let m = torsion_order(field, &u)?.ok_or_else(|| {
                Error::Numerical(format!("{:?} has trivial log vector but no order ≤ {MAX_TORSION_ORDER}", u.0))
            })?;
            torsion.push((m, u));
        } else {
            free_candidates.push((ln, u));
        }
    }
    let (torsion_order, torsion_generator) = torsion
        .iter()
        .max_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .cloned()
        .unwrap_or((1, OrderElement::one(n)));
    let torsion: Vec<OrderElement> = torsion.into_iter().map(|(_, u)| u).collect();

    let (r, s) = field.signature();
    let rank = r + s - 1;
    free_candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut free = Vec::new();
    for (_, u) in free_candidates {
        if free.len() == rank {
            break;
        }
        let v = field.log_abs(&u);
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut res = v.clone();
        for b in &basis {
            let dot: f64 = res.iter().zip(b).map(|(x, y)| x * y).sum();
            res.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        let rn = res.iter().map(|x| x * x).sum::<f64>().sqrt();
        if rn > 1e-8 * len {
            basis.push(res.into_iter().map(|x| x / rn).collect());
            free.push(normalize_free(field, &u)?);
        }
    }
    if free.len() < rank {
        return Err(Error::SearchExhausted(format!(
            "found {} independent units, Dirichlet rank is {rank}; increase box_bound (was {box_bound})",
            free.len()
        )));
    }
    let mut group = UnitGroup {
        torsion,
        torsion_generator,
        torsion_order,
        free,
        rank,
        box_bound,
        candidates,
        units_found,
        pell_agrees: None,
    };
    if n == 2 && r == 2 {
        let pell = positive_units(field, &[pell_fundamental_unit(field)?])?;
        let boxed = positive_units(field, &group.free)?;
        group.pell_agrees = Some(pell == boxed);
        if pell != boxed {
            return Err(Error::Numerical(format!(
                "box search positive unit {:?} differs from the Pell unit {:?}",
                boxed[0].0, pell[0].0
            )));
        }
    }
    Ok(group)
}

/// Keeps generators with every real embedding positive and squares the others.
pub fn positive_units(field: &NumberField, gens: &[OrderElement]) -> Result<Vec<OrderElement>> {
    let r = field.signature().0;
    gens.iter()
        .map(|u| {
            let positive = field.embed(u)[..r].iter().all(|z| z.re > 0.0);
            if positive {
                Ok(u.clone())
            } else {
                field.mul(u, u)
            }
        })
        .collect()
}

/// Fundamental unit of `ℤ[θ]`, `θ` a root of `X² + bX + c`, from the continued fraction of
/// `ξ = θ + b = (b + √D)/2`: the first convergent `p/q` with `N(p − qξ) = ±1`.
pub fn pell_fundamental_unit(field: &NumberField) -> Result<OrderElement> {
    let c = field.poly.coeffs();
    if c.len() != 3 || field.signature() != (2, 0) {
        return Err(Error::Precondition("Pell oracle needs a real quadratic field".into()));
    }
    let (cc, b) = (c[0] as i128, c[1] as i128);
    let d = b * b - 4 * cc;
    let sd = {
        let mut r = (d as f64).sqrt() as i128;
        while r * r > d {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= d {
            r += 1;
        }
        r
    };
    let (mut p_k, mut q_k) = (b, 2i128);
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let overflow = || Error::Numerical("Pell continued fraction overflowed".into());
    for _ in 0..10_000 {
        // ⌊(P + √D)/Q⌋ with √D irrational.
        let a = if q_k > 0 { floor_div(p_k + sd, q_k) } else { -floor_div(p_k + sd, -q_k) - 1 };
        let h2 = a.checked_mul(h1).and_then(|x| x.checked_add(h0)).ok_or_else(overflow)?;
        let k2 = a.checked_mul(k1).and_then(|x| x.checked_add(k0)).ok_or_else(overflow)?;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if k1 >= 1 {
            let coords = [h1 - k1 * b, -k1];
            let x = OrderElement(
                coords.iter().map(|&v| i64::try_from(v).map_err(|_| overflow())).collect::<Result<Vec<_>>>()?,
            );
            if field.norm(&x)?.abs() == 1 {
                return normalize_free(field, &x);
            }
        }
        p_k = a * q_k - p_k;
        q_k = (d - p_k * p_k) / q_k;
    }
    Err(Error::SearchExhausted("no unit within 10⁴ partial quotients".into()))
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}
