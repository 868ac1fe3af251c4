//! Coefficient functions of one or two real parameters, with exact symbolic derivatives.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Smooth monotone ramps `S: [0,1] → [0,1]` with `S(0) = 0`, `S(1) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothstep {
    /// `x³(10 − 15x + 6x²)`, C².
    Quintic,
    /// `x⁴(35 − 84x + 70x² − 20x³)`, C³.
    Septic,
}

impl Smoothstep {
    /// Ascending coefficients.
    pub fn coeffs(self) -> Vec<f64> {
        match self {
            Smoothstep::Quintic => vec![0.0, 0.0, 0.0, 10.0, -15.0, 6.0],
            Smoothstep::Septic => vec![0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Smoothstep::Quintic => "quintic",
            Smoothstep::Septic => "septic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "quintic" => Ok(Smoothstep::Quintic),
            "septic" => Ok(Smoothstep::Septic),
            other => Err(Error::Parse(format!("unknown smoothstep {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Const(f64),
    Var(usize),
    Add(ProfileFn, ProfileFn),
    Mul(ProfileFn, ProfileFn),
    Exp(ProfileFn),
    Sin(ProfileFn),
    Cos(ProfileFn),
    /// `p(x)` on `[0,1]`, `lo` below, `hi` above.
    ClampPoly { coeffs: Vec<f64>, lo: f64, hi: f64, arg: ProfileFn },
    /// `pieces[i]` where `breaks[i-1] ≤ arg < breaks[i]`.
    Piecewise { arg: ProfileFn, breaks: Vec<f64>, pieces: Vec<ProfileFn> },
}

/// An expression in the parameters `p_0, p_1, ...`, closed under differentiation.
#[derive(Clone, PartialEq)]
pub struct ProfileFn(Arc<Node>);

impl fmt::Debug for ProfileFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(i) => write!(f, "p{i}"),
            Node::Add(a, b) => write!(f, "({a:?} + {b:?})"),
            Node::Mul(a, b) => write!(f, "{a:?}·{b:?}"),
            Node::Exp(a) => write!(f, "exp({a:?})"),
            Node::Sin(a) => write!(f, "sin({a:?})"),
            Node::Cos(a) => write!(f, "cos({a:?})"),
            Node::ClampPoly { coeffs, arg, .. } => write!(f, "clamp{coeffs:?}({arg:?})"),
            Node::Piecewise { arg, breaks, .. } => write!(f, "piecewise{breaks:?}({arg:?})"),
        }
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

impl ProfileFn {
    fn wrap(n: Node) -> Self {
        ProfileFn(Arc::new(n))
    }

    pub fn constant(c: f64) -> Self {
        Self::wrap(Node::Const(c))
    }

    pub fn var(i: usize) -> Self {
        Self::wrap(Node::Var(i))
    }

    /// The single parameter `s = p_0`.
    pub fn s() -> Self {
        Self::var(0)
    }

    /// `a·p_i + b`.
    pub fn linear_in(i: usize, a: f64, b: f64) -> Self {
        Self::var(i) * a + b
    }

    pub fn linear(a: f64, b: f64) -> Self {
        Self::linear_in(0, a, b)
    }

    pub fn exp(self) -> Self {
        if let Some(c) = self.as_const() {
            return Self::constant(c.exp());
        }
        Self::wrap(Node::Exp(self))
    }

    pub fn sin(self) -> Self {
        if let Some(c) = self.as_const() {
            return Self::constant(c.sin());
        }
        Self::wrap(Node::Sin(self))
    }

    pub fn cos(self) -> Self {
        if let Some(c) = self.as_const() {
            return Self::constant(c.cos());
        }
        Self::wrap(Node::Cos(self))
    }

    /// `exp(a·s + b)`.
    pub fn exp_linear(a: f64, b: f64) -> Self {
        Self::linear(a, b).exp()
    }

    pub fn clamp_poly(coeffs: Vec<f64>, lo: f64, hi: f64, arg: ProfileFn) -> Self {
        Self::wrap(Node::ClampPoly { coeffs, lo, hi, arg })
    }

    /// Ramp from 0 at `arg = 0` to 1 at `arg = 1`, constant outside.
    pub fn ramp(kind: Smoothstep, arg: ProfileFn) -> Self {
        Self::clamp_poly(kind.coeffs(), 0.0, 1.0, arg)
    }

    /// Ramp in `s` from 0 at `a` to 1 at `b` (`a < b`), or descending when `a > b`.
    pub fn step(kind: Smoothstep, a: f64, b: f64) -> Self {
        Self::ramp(kind, Self::linear(1.0 / (b - a), -a / (b - a)))
    }

    pub fn piecewise(arg: ProfileFn, breaks: Vec<f64>, pieces: Vec<ProfileFn>) -> Result<Self> {
        if pieces.len() != breaks.len() + 1 || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("piecewise needs sorted breaks and one more piece".into()));
        }
        Ok(Self::wrap(Node::Piecewise { arg, breaks, pieces }))
    }

    pub fn as_const(&self) -> Option<f64> {
        match &*self.0 {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    /// Number of parameters referenced (highest index + 1).
    pub fn arity(&self) -> usize {
        match &*self.0 {
            Node::Const(_) => 0,
            Node::Var(i) => i + 1,
            Node::Add(a, b) | Node::Mul(a, b) => a.arity().max(b.arity()),
            Node::Exp(a) | Node::Sin(a) | Node::Cos(a) => a.arity(),
            Node::ClampPoly { arg, .. } => arg.arity(),
            Node::Piecewise { arg, pieces, .. } => pieces.iter().map(Self::arity).fold(arg.arity(), usize::max),
        }
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        match &*self.0 {
            Node::Const(c) => *c,
            Node::Var(i) => p[*i],
            Node::Add(a, b) => a.eval(p) + b.eval(p),
            Node::Mul(a, b) => a.eval(p) * b.eval(p),
            Node::Exp(a) => a.eval(p).exp(),
            Node::Sin(a) => a.eval(p).sin(),
            Node::Cos(a) => a.eval(p).cos(),
            Node::ClampPoly { coeffs, lo, hi, arg } => {
                let x = arg.eval(p);
                if x < 0.0 {
                    *lo
                } else if x > 1.0 {
                    *hi
                } else {
                    horner(coeffs, x)
                }
            }
            Node::Piecewise { arg, breaks, pieces } => {
                let x = arg.eval(p);
                let i = breaks.partition_point(|&b| b <= x);
                pieces[i].eval(p)
            }
        }
    }

    pub fn eval1(&self, s: f64) -> f64 {
        self.eval(&[s])
    }

    /// `∂/∂p_i`.
    pub fn partial(&self, i: usize) -> Self {
        match &*self.0 {
            Node::Const(_) => Self::constant(0.0),
            Node::Var(j) => Self::constant(if *j == i { 1.0 } else { 0.0 }),
            Node::Add(a, b) => a.partial(i) + b.partial(i),
            Node::Mul(a, b) => a.partial(i) * b.clone() + a.clone() * b.partial(i),
            Node::Exp(a) => a.partial(i) * self.clone(),
            Node::Sin(a) => a.partial(i) * a.clone().cos(),
            Node::Cos(a) => -(a.partial(i) * a.clone().sin()),
            Node::ClampPoly { coeffs, arg, .. } => {
                let d: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
                let da = arg.partial(i);
                if da.is_zero() {
                    return Self::constant(0.0);
                }
                Self::clamp_poly(d, 0.0, 0.0, arg.clone()) * da
            }
            Node::Piecewise { arg, breaks, pieces } => Self::wrap(Node::Piecewise {
                arg: arg.clone(),
                breaks: breaks.clone(),
                pieces: pieces.iter().map(|p| p.partial(i)).collect(),
            }),
        }
    }

    /// `d/ds` for one-parameter profiles.
    pub fn deriv(&self) -> Self {
        self.partial(0)
    }

    /// Compares `∂_i` against central differences (step `1e-5`) at 64 seeded points of
    /// `[lo, hi]`, other parameters fixed at `base`.
    pub fn verify_partial(&self, i: usize, base: &[f64], lo: f64, hi: f64, seed: u64) -> Result<()> {
        const H: f64 = 1e-5;
        let d = self.partial(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = base.to_vec();
        if p.len() <= i {
            p.resize(i + 1, 0.0);
        }
        for _ in 0..64 {
            let x = rng.random_range(lo..=hi);
            p[i] = x + H;
            let fp = self.eval(&p);
            p[i] = x - H;
            let fm = self.eval(&p);
            p[i] = x;
            let fd = (fp - fm) / (2.0 * H);
            let an = d.eval(&p);
            if (fd - an).abs() > 1e-6 * (1.0 + an.abs()) {
                return Err(Error::ProfileDerivative { at: x, analytic: an, fd });
            }
        }
        Ok(())
    }

    pub fn verify_derivative(&self, lo: f64, hi: f64) -> Result<()> {
        self.verify_partial(0, &[0.0], lo, hi, 0x5eed)
    }
}

impl From<f64> for ProfileFn {
    fn from(c: f64) -> Self {
        ProfileFn::constant(c)
    }
}

impl Add for ProfileFn {
    type Output = ProfileFn;
    fn add(self, o: ProfileFn) -> ProfileFn {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => ProfileFn::constant(a + b),
            (Some(a), _) if a == 0.0 => o,
            (_, Some(b)) if b == 0.0 => self,
            _ => ProfileFn::wrap(Node::Add(self, o)),
        }
    }
}

impl Add<f64> for ProfileFn {
    type Output = ProfileFn;
    fn add(self, o: f64) -> ProfileFn {
        self + ProfileFn::constant(o)
    }
}

impl Mul for ProfileFn {
    type Output = ProfileFn;
    fn mul(self, o: ProfileFn) -> ProfileFn {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => ProfileFn::constant(a * b),
            (Some(a), _) | (_, Some(a)) if a == 0.0 => ProfileFn::constant(0.0),
            (Some(a), _) if a == 1.0 => o,
            (_, Some(b)) if b == 1.0 => self,
            _ => ProfileFn::wrap(Node::Mul(self, o)),
        }
    }
}

impl Mul<f64> for ProfileFn {
    type Output = ProfileFn;
    fn mul(self, o: f64) -> ProfileFn {
        self * ProfileFn::constant(o)
    }
}

impl Neg for ProfileFn {
    type Output = ProfileFn;
    fn neg(self) -> ProfileFn {
        self * -1.0
    }
}

impl Sub for ProfileFn {
    type Output = ProfileFn;
    fn sub(self, o: ProfileFn) -> ProfileFn {
        self + (-o)
    }
}

/// `φ_k(s) = s + 2πk·S((s − ε/3)/(ε/3))`: slope 1 outside `[ε/3, 2ε/3]`, total lift `2πk`.
pub fn phi_k(k: u32, eps: f64, kind: Smoothstep) -> ProfileFn {
    let third = eps / 3.0;
    ProfileFn::s() + ProfileFn::step(kind, third, 2.0 * third) * (2.0 * PI * k as f64)
}

/// Bump on `[0, ε]`: zero near both ends, equal to 1 exactly on `[ε/3, 2ε/3]`.
pub fn plateau(eps: f64, kind: Smoothstep) -> ProfileFn {
    let up = ProfileFn::step(kind, eps / 12.0, eps / 3.0);
    let down = ProfileFn::step(kind, 11.0 * eps / 12.0, 2.0 * eps / 3.0);
    up * down
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_derivatives() {
        let f = ProfileFn::s().sin();
        assert_eq!(f.deriv().eval1(0.3), 0.3f64.cos());
        f.verify_derivative(-3.0, 3.0).unwrap();
        ProfileFn::s().cos().verify_derivative(-3.0, 3.0).unwrap();
    }

    #[test]
    fn smoothstep_endpoints() {
        for kind in [Smoothstep::Quintic, Smoothstep::Septic] {
            let f = ProfileFn::step(kind, 0.0, 1.0);
            assert_eq!(f.eval1(-1.0), 0.0);
            assert_eq!(f.eval1(2.0), 1.0);
            assert!((f.eval1(1.0) - 1.0).abs() < 1e-15);
            assert!((f.eval1(0.5) - 0.5).abs() < 1e-15);
            assert!(f.deriv().eval1(0.0).abs() < 1e-15);
            f.verify_derivative(-0.5, 1.5).unwrap();
            f.deriv().verify_derivative(-0.5, 1.5).unwrap();
        }
    }

    #[test]
    fn phi_and_plateau_shape() {
        let phi = phi_k(2, 1.0, Smoothstep::Quintic);
        assert!((phi.eval1(0.9) - 0.9 - 4.0 * PI).abs() < 1e-12);
        assert_eq!(phi.eval1(0.1), 0.1);
        assert_eq!(phi.deriv().eval1(0.2), 1.0);
        phi.verify_derivative(-1.0, 1.0).unwrap();
        let psi = plateau(1.0, Smoothstep::Septic);
        assert_eq!(psi.eval1(0.5), 1.0);
        assert_eq!(psi.eval1(0.05), 0.0);
        assert_eq!(psi.eval1(0.95), 0.0);
        psi.verify_derivative(0.0, 1.0).unwrap();
    }

    #[test]
    fn piecewise_glue() {
        let f = ProfileFn::piecewise(ProfileFn::s(), vec![0.0], vec![ProfileFn::constant(0.0), ProfileFn::s() * ProfileFn::s()])
            .unwrap();
        assert_eq!(f.eval1(-1.0), 0.0);
        assert_eq!(f.eval1(2.0), 4.0);
        assert_eq!(f.deriv().eval1(2.0), 4.0);
        f.verify_derivative(0.1, 2.0).unwrap();
    }

    #[test]
    fn jump_is_caught() {
        // Jumps from 1 to 5 at s = 1; every sample straddles it.
        let f = ProfileFn::clamp_poly(vec![0.0, 1.0], 0.0, 5.0, ProfileFn::s());
        assert!(f.verify_derivative(1.0 - 1e-6, 1.0 + 1e-6).is_err());
    }

    #[test]
    fn two_parameter_partials() {
        let f = ProfileFn::var(0).exp() * (ProfileFn::var(1) * 2.0).sin();
        f.verify_partial(0, &[0.0, 0.4], -1.0, 1.0, 1).unwrap();
        f.verify_partial(1, &[0.3, 0.0], -1.0, 1.0, 2).unwrap();
        assert_eq!(f.arity(), 2);
    }
}
