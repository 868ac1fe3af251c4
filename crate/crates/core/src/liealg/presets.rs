//! Named algebras with their distinguished left-invariant 1-forms.
//!
//! Preset ids: `affr`, `affc`, `grs:r,s`, `grs1:r,s`, `totreal:m`, `geiges:n`, `sol:a,b,c,d`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::liealg::LieAlgebra;
use crate::scalar::{rat_int, Rational};

#[derive(Clone, Debug)]
pub struct Preset {
    pub id: String,
    pub algebra: LieAlgebra,
    /// Candidate Liouville pair `(α₊, α₋)`, when the preset has one.
    pub pair: Option<(Form<Rational>, Form<Rational>)>,
}

impl Preset {
    /// Orientation convention: the basis order of the algebra.
    pub fn orientation(&self) -> Vec<String> {
        self.algebra.names().to_vec()
    }

    pub fn liouville_pair(&self) -> Result<LiouvillePair> {
        let (plus, minus) = self
            .pair
            .clone()
            .ok_or_else(|| Error::Precondition(format!("preset {} has no distinguished pair", self.id)))?;
        Ok(LiouvillePair { id: self.id.clone(), algebra: self.algebra.clone(), plus, minus })
    }
}

/// An algebra together with candidate forms `(α₊, α₋)`.
#[derive(Clone, Debug)]
pub struct LiouvillePair {
    pub id: String,
    pub algebra: LieAlgebra,
    pub plus: Form<Rational>,
    pub minus: Form<Rational>,
}

impl LiouvillePair {
    pub fn new(id: &str, algebra: LieAlgebra, plus: Form<Rational>, minus: Form<Rational>) -> Result<Self> {
        if plus.coframe() != algebra.coframe() || minus.coframe() != algebra.coframe() {
            return Err(Error::CoframeMismatch("pair forms must live on the algebra".into()));
        }
        if plus.degree() != 1 || minus.degree() != 1 {
            return Err(Error::Precondition("pair forms must be 1-forms".into()));
        }
        Ok(LiouvillePair { id: id.to_string(), algebra, plus, minus })
    }

    pub fn from_preset(id: &str) -> Result<Self> {
        preset(id)?.liouville_pair()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn d_plus(&self) -> Form<Rational> {
        self.algebra.ce_differential(&self.plus).expect("pair lives on the algebra")
    }

    pub fn d_minus(&self) -> Form<Rational> {
        self.algebra.ce_differential(&self.minus).expect("pair lives on the algebra")
    }
}

fn q(n: i64) -> Rational {
    rat_int(n)
}

fn zeros(n: usize) -> Vec<Vec<Rational>> {
    vec![vec![Rational::zero(); n]; n]
}

/// `Aff⁺(ℝ)`: `[T, Θ] = Θ`.
pub fn aff_r() -> LieAlgebra {
    LieAlgebra::from_brackets(&["T", "Θ"], [(0, 1, vec![(1, q(1))])]).expect("valid preset")
}

/// `Aff⁺(ℂ)`: `[U,X]=X, [U,Y]=Y, [V,X]=Y, [V,Y]=-X`.
pub fn aff_c() -> LieAlgebra {
    LieAlgebra::from_brackets(
        &["U", "V", "X", "Y"],
        [
            (0, 2, vec![(2, q(1))]),
            (0, 3, vec![(3, q(1))]),
            (1, 2, vec![(3, q(1))]),
            (1, 3, vec![(2, q(-1))]),
        ],
    )
    .expect("valid preset")
}

/// Fiber layout `(Θ.., X1, Y1, ..)` and the matrices of the elementary actions.
struct Fiber {
    names: Vec<String>,
    r: usize,
    s: usize,
}

impl Fiber {
    fn new(r: usize, s: usize, theta_from_zero: bool) -> Self {
        let mut names = Vec::new();
        for i in 0..r {
            names.push(format!("Θ{}", if theta_from_zero { i } else { i + 1 }));
        }
        for j in 1..=s {
            names.push(format!("X{j}"));
            names.push(format!("Y{j}"));
        }
        Fiber { names, r, s }
    }

    fn dim(&self) -> usize {
        self.r + 2 * self.s
    }

    /// Action of `τ_i` (real scaling of `Θ_i`).
    fn tau(&self, i: usize) -> Vec<Vec<Rational>> {
        let mut a = zeros(self.dim());
        a[i][i] = q(1);
        a
    }

    /// Action of `u_j` (scaling of `X_j, Y_j`).
    fn u(&self, j: usize) -> Vec<Vec<Rational>> {
        let mut a = zeros(self.dim());
        let x = self.r + 2 * j;
        a[x][x] = q(1);
        a[x + 1][x + 1] = q(1);
        a
    }

    /// Action of `v_j` (rotation `X_j ↦ Y_j ↦ -X_j`).
    fn v(&self, j: usize) -> Vec<Vec<Rational>> {
        let mut a = zeros(self.dim());
        let x = self.r + 2 * j;
        a[x + 1][x] = q(1);
        a[x][x + 1] = q(-1);
        a
    }
}

fn lin(terms: &[(Rational, &Vec<Vec<Rational>>)], n: usize) -> Vec<Vec<Rational>> {
    let mut out = zeros(n);
    for (c, m) in terms {
        for i in 0..n {
            for j in 0..n {
                out[i][j] += c * &m[i][j];
            }
        }
    }
    out
}

/// `𝒢^{r,s} = Aff⁺(ℝ)^r × Aff⁺(ℂ)^s`, basis `T1.., U1, V1, .., Θ1.., X1, Y1, ..`.
pub fn grs(r: usize, s: usize) -> Result<LieAlgebra> {
    if r + s == 0 {
        return Err(Error::Precondition("r + s must be positive".into()));
    }
    let fib = Fiber::new(r, s, false);
    let mut base = Vec::new();
    let mut action = Vec::new();
    for i in 0..r {
        base.push(format!("T{}", i + 1));
        action.push(fib.tau(i));
    }
    for j in 0..s {
        base.push(format!("U{}", j + 1));
        action.push(fib.u(j));
        base.push(format!("V{}", j + 1));
        action.push(fib.v(j));
    }
    let b: Vec<&str> = base.iter().map(String::as_str).collect();
    let f: Vec<&str> = fib.names.iter().map(String::as_str).collect();
    LieAlgebra::semidirect_sum(&b, &f, &action)
}

/// Unimodular subalgebra `𝒢^{r,s}_1` (kernel of `Σ t_i + 2 Σ Re w_j`).
///
/// Base basis: `T_i = τ_i - τ_0` (`i ≥ 1`, listed as `T_{r-1}, .., T_1`), `U_j = u_j - 2τ_0`, `V_j`;
/// when `r = 0`, `U_j = u_j - u_1` (`j ≥ 2`) and `V_j`. Fiber: `Θ0.., X1, Y1, ..`.
/// The descending `T` order makes `α₊` of [`grs1_pair`] positive in every dimension.
pub fn grs1(r: usize, s: usize) -> Result<LieAlgebra> {
    if r + s == 0 {
        return Err(Error::Precondition("r + s must be positive".into()));
    }
    let fib = Fiber::new(r, s, true);
    let n = fib.dim();
    let mut base = Vec::new();
    let mut action = Vec::new();
    for i in (1..r).rev() {
        base.push(format!("T{i}"));
        action.push(lin(&[(q(1), &fib.tau(i)), (q(-1), &fib.tau(0))], n));
    }
    for j in 0..s {
        if r > 0 {
            base.push(format!("U{}", j + 1));
            action.push(lin(&[(q(1), &fib.u(j)), (q(-2), &fib.tau(0))], n));
        } else if j > 0 {
            base.push(format!("U{}", j + 1));
            action.push(lin(&[(q(1), &fib.u(j)), (q(-1), &fib.u(0))], n));
        }
        base.push(format!("V{}", j + 1));
        action.push(fib.v(j));
    }
    let b: Vec<&str> = base.iter().map(String::as_str).collect();
    let f: Vec<&str> = fib.names.iter().map(String::as_str).collect();
    LieAlgebra::semidirect_sum(&b, &f, &action)
}

/// Candidate pair on `𝒢^{r,s}_1`: `α_± = ±Θ0* + Σ_{i≥1} Θi* + Σ_j Xj*`.
///
/// Requires `r > 0`: the construction singles out one real factor.
pub fn grs1_pair(g: &LieAlgebra, r: usize, s: usize) -> Result<(Form<Rational>, Form<Rational>)> {
    if r == 0 {
        return Err(Error::Precondition("a Liouville-pair preset needs r > 0".into()));
    }
    let cf = g.coframe();
    let idx = |name: &str| {
        cf.index_of(name)
            .ok_or_else(|| Error::Precondition(format!("algebra has no generator {name}")))
    };
    let mut rest = Form::zero(cf, 1);
    for i in 1..r {
        rest = &rest + &Form::basis(cf, idx(&format!("Θ{i}"))?);
    }
    for j in 1..=s {
        rest = &rest + &Form::basis(cf, idx(&format!("X{j}"))?);
    }
    let e: Form<Rational> = Form::basis(cf, idx("Θ0")?);
    Ok((&rest + &e, &rest - &e))
}

/// The algebra of the Sol-type solvmanifold `𝒢^{m,0}_1` for a totally real field of degree `m`.
pub fn totally_real(m: usize) -> Result<LieAlgebra> {
    grs1(m, 0)
}

/// Geiges' matrix: `A e_2 = -e_1`, `A e_i = e_{i-1}` (`i ≥ 3`), `A e_1 = -e_n`.
pub fn geiges_matrix(n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    if n == 1 {
        a[0][0] = -1;
        return a;
    }
    a[n - 1][0] = -1;
    a[0][1] = -1;
    for j in 2..n {
        a[j - 1][j] = 1;
    }
    a
}

pub(crate) fn int_matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let p = b[0].len();
    let mut out = vec![vec![0i64; p]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k] != 0 {
                for j in 0..p {
                    out[i][j] += a[i][k] * bk[j];
                }
            }
        }
    }
    out
}

/// Pair `(-E_1*, -E_n*)` on Geiges' algebra, swapped when needed so that `α₊` is positive.
pub fn geiges_pair(g: &LieAlgebra) -> (Form<Rational>, Form<Rational>) {
    let cf = g.coframe();
    let n = g.dim().div_ceil(2);
    if n == 1 {
        let e: Form<Rational> = Form::basis(cf, 0);
        return (e.clone(), -e);
    }
    let first: Form<Rational> = -Form::basis(cf, n - 1);
    let last: Form<Rational> = -Form::basis(cf, g.dim() - 1);
    let positive = crate::liealg::contact_check(g, &first).map(|c| c.is_positive()).unwrap_or(false);
    if positive {
        (first, last)
    } else {
        (last, first)
    }
}

/// Geiges' algebra: `Y_1..Y_{n-1}`, `E_1..E_n`, `[Y_k, E_i] = Σ_j (A^k)_{ji} E_j`.
pub fn geiges(n: usize) -> Result<LieAlgebra> {
    if n < 1 {
        return Err(Error::Precondition("geiges algebra needs n ≥ 1".into()));
    }
    let a = geiges_matrix(n);
    let mut pow = a.clone();
    let mut action = Vec::new();
    for _ in 1..n {
        action.push(pow.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect());
        pow = int_matmul(&pow, &a);
    }
    let base: Vec<String> = (1..n).map(|k| format!("Y{k}")).collect();
    let fiber: Vec<String> = (1..=n).map(|i| format!("E{i}")).collect();
    let b: Vec<&str> = base.iter().map(String::as_str).collect();
    let f: Vec<&str> = fiber.iter().map(String::as_str).collect();
    LieAlgebra::semidirect_sum(&b, &f, &action)
}

/// Left-invariant model of the Sol manifold `M_A`: basis `(T, X, Y)` dual to
/// `(dt, e^t dx, e^{-t} dy)`, so `[T, X] = -X`, `[T, Y] = Y`; pair `±X* + Y*`.
pub fn sol() -> (LieAlgebra, (Form<Rational>, Form<Rational>)) {
    let g = LieAlgebra::from_brackets(
        &["T", "X", "Y"],
        [(0, 1, vec![(1, q(-1))]), (0, 2, vec![(2, q(1))])],
    )
    .expect("valid preset");
    let cf = g.coframe().clone();
    let x: Form<Rational> = Form::basis(&cf, 1);
    let y: Form<Rational> = Form::basis(&cf, 2);
    let pair = (&x + &y, &y - &x);
    (g, pair)
}

fn parse_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
        .collect()
}

/// Sol model for a hyperbolic `A ∈ SL(2,ℤ)`. The left-invariant data do not depend on `A`;
/// `A` only fixes the lattice (see `numfield::hyperbolic_sl2_lattice`).
pub fn sol_from_sl2(a: [[i64; 2]; 2]) -> Result<Preset> {
    let (tr, det) = (a[0][0] + a[1][1], a[0][0] * a[1][1] - a[0][1] * a[1][0]);
    if det != 1 || tr.abs() <= 2 {
        return Err(Error::Precondition(format!("{a:?} is not hyperbolic in SL(2,ℤ)")));
    }
    let (algebra, pair) = sol();
    Ok(Preset {
        id: format!("sol:{},{},{},{}", a[0][0], a[0][1], a[1][0], a[1][1]),
        algebra,
        pair: Some(pair),
    })
}

/// Resolves a preset id.
pub fn preset(id: &str) -> Result<Preset> {
    let id = id.trim();
    let (name, args) = id.split_once(':').unwrap_or((id, ""));
    let nums = if args.is_empty() { vec![] } else { parse_list(args)? };
    let want = |k: usize| -> Result<()> {
        if nums.len() != k || nums.iter().any(|&x| x < 0) {
            Err(Error::UnknownPreset(format!("{id}: expected {k} non-negative arguments")))
        } else {
            Ok(())
        }
    };
    let (algebra, pair) = match name {
        "affr" => {
            want(0)?;
            (aff_r(), None)
        }
        "affc" => {
            want(0)?;
            (aff_c(), None)
        }
        "grs" => {
            want(2)?;
            (grs(nums[0] as usize, nums[1] as usize)?, None)
        }
        "grs1" | "totreal" => {
            let (r, s) = if name == "grs1" {
                want(2)?;
                (nums[0] as usize, nums[1] as usize)
            } else {
                want(1)?;
                (nums[0] as usize, 0)
            };
            if r + 2 * s > 8 {
                return Err(Error::Precondition("field degree r + 2s must be at most 8".into()));
            }
            let g = grs1(r, s)?;
            let pair = if r > 0 { Some(grs1_pair(&g, r, s)?) } else { None };
            (g, pair)
        }
        "geiges" => {
            want(1)?;
            if nums[0] > 8 {
                return Err(Error::Precondition("geiges n must be at most 8".into()));
            }
            let g = geiges(nums[0] as usize)?;
            let pair = geiges_pair(&g);
            (g, Some(pair))
        }
        "sol" => {
            if nums.len() != 4 {
                return Err(Error::UnknownPreset(format!("{id}: expected 4 matrix entries")));
            }
            let p = sol_from_sl2([[nums[0], nums[1]], [nums[2], nums[3]]])?;
            (p.algebra, p.pair)
        }
        _ => return Err(Error::UnknownPreset(id.to_string())),
    };
    Ok(Preset { id: id.to_string(), algebra, pair })
}
