//! Simultaneous normal form of a pair of symplectic forms and block-wise construction of a
//! cotamed complex structure.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{Complex, ComplexField, DMatrix, DVector};
use serde_json::{json, Value};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::symplin::{
    cotamed_exists, from_dmatrix, pencil_endomorphism, taming_margin, to_dmatrix,
    ComplexStructure, SkewForm, CONVENTION,
};

/// Relative clustering tolerance for eigenvalues of `B`.
pub const CLUSTER_TOL: f64 = 1e-7;
/// `|Im| ≤ REAL_TOL·|Re|` counts as real.
pub const REAL_TOL: f64 = 1e-8;
pub const EPS_START: f64 = 1e-3;
pub const MAX_RETRIES: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub enum PencilBlock {
    /// `ω₁ ≈ λ Ω_{2(k+1)}` on `(v_0..v_k, w_0..w_k)`.
    Real { lambda: f64, chain: usize, offset: usize },
    /// `k+1` copies of the 4×4 `(μ, ν)` model on `(v_j^±, w_j^±)`.
    Complex { mu: f64, nu: f64, chain: usize, offset: usize },
}

impl PencilBlock {
    pub fn size(&self) -> usize {
        match self {
            PencilBlock::Real { chain, .. } => 2 * chain,
            PencilBlock::Complex { chain, .. } => 4 * chain,
        }
    }

    /// `λ` of a real block, `μ` of a complex one.
    pub fn lambda(&self) -> f64 {
        match self {
            PencilBlock::Real { lambda, .. } => *lambda,
            PencilBlock::Complex { mu, .. } => *mu,
        }
    }

    pub fn offset(&self) -> usize {
        match self {
            PencilBlock::Real { offset, .. } | PencilBlock::Complex { offset, .. } => *offset,
        }
    }

    pub fn chain(&self) -> usize {
        match self {
            PencilBlock::Real { chain, .. } | PencilBlock::Complex { chain, .. } => *chain,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            PencilBlock::Real { lambda, chain, offset } => {
                json!({"kind": "real", "lambda": lambda, "chain": chain, "size": self.size(), "offset": offset})
            }
            PencilBlock::Complex { mu, nu, chain, offset } => {
                json!({"kind": "complex", "mu": mu, "nu": nu, "chain": chain, "size": self.size(), "offset": offset})
            }
        }
    }

    /// Model matrices `(ω₀, ω₁)` of this block without the `ε` chain terms.
    pub fn model(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.size();
        let h = n / 2;
        let mut a0 = DMatrix::zeros(n, n);
        let mut a1 = DMatrix::zeros(n, n);
        for i in 0..h {
            a0[(i, h + i)] = 1.0;
            a0[(h + i, i)] = -1.0;
        }
        match *self {
            PencilBlock::Real { lambda, .. } => a1 = &a0 * lambda,
            PencilBlock::Complex { mu, nu, chain, .. } => {
                for j in 0..chain {
                    let (x, y) = (2 * j, h + 2 * j);
                    for (r, c, v) in [(x, y, mu), (x, y + 1, nu), (x + 1, y, -nu), (x + 1, y + 1, mu)] {
                        a1[(r, c)] = v;
                        a1[(c, r)] = -v;
                    }
                }
            }
        }
        (a0, a1)
    }
}

#[derive(Clone, Debug)]
pub struct PencilBlocks {
    pub blocks: Vec<PencilBlock>,
    /// Columns are the new basis vectors.
    pub basis: DMatrix<f64>,
    pub eps: f64,
    /// `‖PᵀA₀P − Ω-blocks‖_max`.
    pub residual0: f64,
    /// `‖PᵀA₁P − model‖_max`.
    pub residual1: f64,
    /// Set when some chain has length > 1.
    pub experimental: bool,
}

impl PencilBlocks {
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Block-diagonal model matrices.
    pub fn model(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.dim();
        let (mut m0, mut m1) = (DMatrix::zeros(n, n), DMatrix::zeros(n, n));
        for b in &self.blocks {
            let (b0, b1) = b.model();
            let (o, s) = (b.offset(), b.size());
            m0.view_mut((o, o), (s, s)).copy_from(&b0);
            m1.view_mut((o, o), (s, s)).copy_from(&b1);
        }
        (m0, m1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "blocks": self.blocks.iter().map(PencilBlock::to_json).collect::<Vec<_>>(),
            "basis": from_dmatrix(&self.basis),
            "eps": self.eps,
            "residual0": self.residual0,
            "residual1": self.residual1,
            "experimental": self.experimental,
            "convention": CONVENTION,
        })
    }
}

/// Orthonormal basis of the `k` right singular directions with smallest singular values.
fn null_space<T: ComplexField<RealField = f64> + Copy>(m: &DMatrix<T>, k: usize) -> DMatrix<T> {
    let (r, c) = m.shape();
    if k == 0 {
        return DMatrix::zeros(c, 0);
    }
    let mut sq = DMatrix::<T>::zeros(r.max(c), c);
    sq.view_mut((0, 0), (r, c)).copy_from(m);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let mut out = DMatrix::zeros(c, k);
    for (col, &i) in order.iter().take(k).enumerate() {
        out.set_column(col, &vt.row(i).adjoint());
    }
    out
}

fn top_singular_vector<T: ComplexField<RealField = f64> + Copy>(m: &DMatrix<T>) -> DVector<T> {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let i = (0..svd.singular_values.len()).max_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    vt.row(i.unwrap_or(0)).adjoint()
}

struct Chain<T: ComplexField> {
    v: Vec<DVector<T>>,
    w: Vec<DVector<T>>,
}

/// Chains `v_{j+1} = ε⁻¹(B − λ)v_j` in `span(u)` and dual chains `w_{j−1} = ε⁻¹(B − λ̄)w_j` in the
/// partner space (`u` itself when `partner` is `None`), peeled off one at a time.
fn build_chains<T: ComplexField<RealField = f64> + Copy>(
    b: &DMatrix<T>,
    a0: &DMatrix<T>,
    lam: T,
    mut u: DMatrix<T>,
    mut partner: Option<DMatrix<T>>,
    eps: f64,
) -> Result<Vec<Chain<T>>> {
    let n = b.nrows();
    let id = DMatrix::<T>::identity(n, n);
    let nb = b - &id * lam;
    let nb_bar = b - &id * lam.conjugate();
    let scale = b.norm().max(1.0);
    let inv_eps = T::from_real(1.0 / eps);
    let mut chains = Vec::new();
    while u.ncols() > 0 {
        let m = u.ncols();
        let nu = u.adjoint() * &nb * &u;
        let mut k = 0;
        let mut pw = nu.clone();
        while 2 * (k + 2) <= m && pw.norm() > 1e-6 * scale.powi(k as i32 + 1) {
            k += 1;
            pw = &pw * &nu;
        }
        let x = if k == 0 {
            DVector::from_fn(m, |i, _| if i == 0 { T::one() } else { T::zero() })
        } else {
            top_singular_vector(&nu.pow((k) as u32))
        };
        let mut v0 = &u * x;
        let nv = v0.norm();
        v0 /= T::from_real(nv);
        let mut v = vec![v0];
        for j in 0..k {
            let next = (&nb * &v[j]) * inv_eps;
            v.push(next);
        }
        let ws = partner.as_ref().unwrap_or(&u).clone();
        let vm = DMatrix::from_columns(&v);
        let g = vm.adjoint() * a0 * &ws;
        let mut e = DVector::<T>::zeros(k + 1);
        e[k] = T::one();
        let pinv = g.clone().pseudo_inverse(1e-13).map_err(|e| Error::Numerical(e.to_string()))?;
        let c = pinv * &e;
        if (&g * &c - &e).norm() > 1e-8 {
            return Err(Error::Numerical("no dual chain vector; pencil is ill-conditioned".into()));
        }
        let mut w = vec![DVector::zeros(n); k + 1];
        w[k] = &ws * c;
        for j in (1..=k).rev() {
            w[j - 1] = (&nb_bar * &w[j]) * inv_eps;
        }
        // v ↦ cv, w ↦ w/c keeps every pairing; equalize the norms.
        let nv: f64 = v.iter().map(|z| z.norm_squared()).sum();
        let nw: f64 = w.iter().map(|z| z.norm_squared()).sum();
        let c = (nw / nv).sqrt().sqrt();
        if c.is_finite() && c > 0.0 {
            v.iter_mut().for_each(|z| *z *= T::from_real(c));
            w.iter_mut().for_each(|z| *z /= T::from_real(c));
        }
        // A chain uses `k + 1` vectors of `span(u)` for the `v_j` and `k + 1` for the `w̄_j`.
        let taken = 2 * (k + 1);
        let mut xs: Vec<DVector<T>> = v.iter().chain(&w).cloned().collect();
        if partner.is_some() {
            xs.extend(v.iter().chain(&w).map(|z| z.conjugate()).collect::<Vec<_>>());
        }
        let xm = DMatrix::from_columns(&xs);
        let cons_u = xm.adjoint() * a0 * &u;
        u = &u * null_space(&cons_u, m - taken);
        if let Some(p) = partner.take() {
            let cons_p = xm.adjoint() * a0 * &p;
            let mp = p.ncols();
            partner = Some(&p * null_space(&cons_p, mp - taken));
        }
        chains.push(Chain { v, w });
    }
    Ok(chains)
}

/// Eigenvalue clusters of `B`: `(mean, members)`.
fn cluster(eigs: &[Complex<f64>]) -> Vec<(Complex<f64>, Vec<Complex<f64>>)> {
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = (eigs[i] - eigs[j]).norm();
            if d <= CLUSTER_TOL * eigs[i].norm().max(eigs[j].norm()) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex<f64>>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, g)) => g.push(eigs[i]),
            None => groups.push((r, vec![eigs[i]])),
        }
    }
    let mut out: Vec<(Complex<f64>, Vec<Complex<f64>>)> = groups
        .into_iter()
        .map(|(_, g)| (g.iter().sum::<Complex<f64>>() / g.len() as f64, g))
        .collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

fn is_real(z: Complex<f64>) -> bool {
    z.im.abs() <= REAL_TOL * z.re.abs()
}

fn reduce_once(b: &DMatrix<f64>, a0: &DMatrix<f64>, a1: &DMatrix<f64>, eps: f64) -> Result<PencilBlocks> {
    let n = b.nrows();
    let eigs: Vec<Complex<f64>> = crate::symplin::eigenvalues(b);
    let clusters = cluster(&eigs);
    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    let ill = |msg: String| Error::Numerical(format!("ill-conditioned pencil: {msg}"));
    for (mean, members) in &clusters {
        if members.len() % 2 == 1 {
            return Err(ill(format!("eigenvalue cluster at {mean} has odd size {}", members.len())));
        }
        if is_real(*mean) {
            let lam = mean.re;
            let mut m = DMatrix::<f64>::identity(n, n);
            for z in members {
                m *= b - DMatrix::identity(n, n) * z.re;
            }
            let u = null_space(&m, members.len());
            for ch in build_chains(b, a0, lam, u, None, eps)? {
                let offset = columns.len();
                blocks.push(PencilBlock::Real { lambda: lam, chain: ch.v.len(), offset });
                columns.extend(ch.v);
                columns.extend(ch.w);
            }
        } else if mean.im > 0.0 {
            let conj = clusters.iter().filter(|(m2, g)| (m2.conj() - mean).norm() <= CLUSTER_TOL * mean.norm() && g.len() == members.len());
            if conj.count() != 1 {
                return Err(ill(format!("no conjugate partner for the cluster at {mean}")));
            }
            let bc = b.map(|x| Complex::new(x, 0.0));
            let a0c = a0.map(|x| Complex::new(x, 0.0));
            let id = DMatrix::<Complex<f64>>::identity(n, n);
            let mut m = id.clone();
            for z in members {
                m *= &bc - &id * *z;
            }
            let u = null_space(&m, members.len());
            let partner = u.map(|z| z.conj());
            for ch in build_chains(&bc, &a0c, *mean, u, Some(partner), eps)? {
                let offset = columns.len();
                blocks.push(PencilBlock::Complex { mu: mean.re, nu: mean.im, chain: ch.v.len(), offset });
                for vecs in [&ch.v, &ch.w] {
                    for z in vecs.iter() {
                        columns.push(z.map(|c| SQRT_2 * c.re));
                        columns.push(z.map(|c| -SQRT_2 * c.im));
                    }
                }
            }
        }
    }
    if columns.len() != n {
        return Err(ill(format!("recovered {} of {n} basis vectors", columns.len())));
    }
    let basis = symplectic_refine(DMatrix::from_columns(&columns), a0, &blocks);
    let mut out = PencilBlocks { blocks, basis, eps, residual0: 0.0, residual1: 0.0, experimental: false };
    out.experimental = out.blocks.iter().any(|b| b.chain() > 1);
    let (m0, m1) = out.model();
    let p = &out.basis;
    out.residual0 = (p.transpose() * a0 * p - m0).abs().max();
    out.residual1 = (p.transpose() * a1 * p - m1).abs().max();
    Ok(out)
}

/// Two steps of `P ↦ P(I + ½ΩE)` with `E = PᵀA₀P − Ω`, which cancel `E` to first order.
fn symplectic_refine(mut p: DMatrix<f64>, a0: &DMatrix<f64>, blocks: &[PencilBlock]) -> DMatrix<f64> {
    let n = p.nrows();
    let mut omega = DMatrix::zeros(n, n);
    for b in blocks {
        let (o, h) = (b.offset(), b.size() / 2);
        for i in 0..h {
            omega[(o + i, o + h + i)] = 1.0;
            omega[(o + h + i, o + i)] = -1.0;
        }
    }
    for _ in 0..2 {
        let e = p.transpose() * a0 * &p - &omega;
        let e = (&e - e.transpose()) * 0.5;
        p = &p * (DMatrix::identity(n, n) + &omega * e * 0.5);
    }
    p
}

/// Basis in which `ω₀` is block-standard (to `1e−9`) and `ω₁` is within `10ε` of the block
/// model. On failure `ε` is halved up to six times.
pub fn simultaneous_reduce(a0: &SkewForm<f64>, a1: &SkewForm<f64>, eps: f64) -> Result<PencilBlocks> {
    if !(eps > 0.0) {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    if !a0.is_nondegenerate()? || !a1.is_nondegenerate()? {
        return Err(Error::Degenerate);
    }
    let b = to_dmatrix(&pencil_endomorphism(a0, a1)?);
    let (m0, m1) = (a0.to_dmatrix(), a1.to_dmatrix());
    let mut eps = eps;
    let mut last = String::new();
    for _ in 0..=MAX_RETRIES {
        match reduce_once(&b, &m0, &m1, eps) {
            Ok(r) if r.residual0 <= 1e-9 && r.residual1 <= 10.0 * eps => return Ok(r),
            Ok(r) => last = format!("residuals {:e}, {:e} at ε = {eps:e}", r.residual0, r.residual1),
            Err(e) => last = e.to_string(),
        }
        eps /= 2.0;
    }
    Err(Error::Numerical(format!("simultaneous reduction failed after {MAX_RETRIES} retries: {last}")))
}

/// Continued-fraction approximation with denominator at most `max_den`.
fn approx_rational(x: f64, max_den: i64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a.checked_mul(h1)?.checked_add(h0)?, a.checked_mul(k1)?.checked_add(k0)?);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    (k1 != 0).then(|| crate::scalar::rat(h1, k1))
}

/// Exact kernel basis by reduced row echelon form.
fn kernel(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let d = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() / d.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = a[r][j].clone();
                    a[i][j] = a[i][j].clone() - f.clone() * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::from_i64(0); cols];
            v[f] = Rational::from_i64(1);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactBlocks {
    /// One `(λ, 2×2 block)` per symplectic pair, in basis order.
    pub lambdas: Vec<Rational>,
    /// Columns `v_1, w_1, v_2, w_2, …`.
    pub basis: Vec<Vec<Rational>>,
}

/// Exact reduction when `B` is diagonalizable with rational spectrum: `PᵀA₀P` is a sum of
/// standard 2×2 blocks and `PᵀA₁P` of `λ`-multiples of them, both exactly.
pub fn simultaneous_reduce_exact(a0: &SkewForm<Rational>, a1: &SkewForm<Rational>) -> Result<ExactBlocks> {
    if !a0.is_nondegenerate()? || !a1.is_nondegenerate()? {
        return Err(Error::Degenerate);
    }
    let n = a0.dim();
    let b = pencil_endomorphism(a0, a1)?;
    let eigs = crate::symplin::eigenvalues(&to_dmatrix(&b));
    let mut lams: Vec<Rational> = Vec::new();
    for z in eigs.iter() {
        if z.im.abs() > 1e-6 * z.norm().max(1.0) {
            return Err(Error::Precondition("spectrum is not real".into()));
        }
        let q = approx_rational(z.re, 1_000_000).ok_or_else(|| Error::Numerical("eigenvalue overflow".into()))?;
        if !lams.contains(&q) {
            lams.push(q);
        }
    }
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut lambdas = Vec::new();
    let om = |v: &[Rational], w: &[Rational]| a0.eval(v, w);
    for lam in &lams {
        let shifted: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| b[i][j].clone() - if i == j { lam.clone() } else { Rational::from_i64(0) }).collect())
            .collect();
        let mut space = kernel(&shifted);
        while !space.is_empty() {
            let v = space.remove(0);
            let pos = space
                .iter()
                .position(|e| !om(&v, e).is_zero())
                .ok_or_else(|| Error::Precondition("eigenspace is not symplectic".into()))?;
            let e = space.remove(pos);
            let c = om(&v, &e);
            let w: Vec<Rational> = e.iter().map(|x| x.clone() / c.clone()).collect();
            space = space
                .into_iter()
                .map(|u| {
                    let (uw, uv) = (om(&u, &w), om(&u, &v));
                    (0..n).map(|i| u[i].clone() - uw.clone() * v[i].clone() + uv.clone() * w[i].clone()).collect()
                })
                .collect();
            cols.push(v);
            cols.push(w);
            lambdas.push(lam.clone());
        }
    }
    if cols.len() != n {
        return Err(Error::Precondition("B is not diagonalizable over ℚ".into()));
    }
    let basis: Vec<Vec<Rational>> = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    Ok(ExactBlocks { lambdas, basis })
}

impl ExactBlocks {
    /// `PᵀAP` computed exactly.
    pub fn transport(&self, a: &SkewForm<Rational>) -> Vec<Vec<Rational>> {
        let n = self.basis.len();
        let col = |k: usize| -> Vec<Rational> { (0..n).map(|i| self.basis[i][k].clone()).collect() };
        (0..n).map(|r| (0..n).map(|c| a.eval(&col(r), &col(c))).collect()).collect()
    }

    /// Exact check of both normal forms.
    pub fn verify(&self, a0: &SkewForm<Rational>, a1: &SkewForm<Rational>) -> bool {
        let (t0, t1) = (self.transport(a0), self.transport(a1));
        let n = self.basis.len();
        let zero = Rational::from_i64(0);
        for r in 0..n {
            for c in 0..n {
                let (e0, e1) = if r / 2 == c / 2 && r != c {
                    let s = Rational::from_i64(if r < c { 1 } else { -1 });
                    (s.clone(), s * self.lambdas[r / 2].clone())
                } else {
                    (zero.clone(), zero.clone())
                };
                if t0[r][c] != e0 || t1[r][c] != e1 {
                    return false;
                }
            }
        }
        true
    }
}

/// `J_φ` on one complex 4·k block: `[[0, R(φ)], [−R(−φ), 0]]` with `R` a rotation per pair.
fn j_phi(chain: usize, phi: f64) -> DMatrix<f64> {
    let n = 4 * chain;
    let h = n / 2;
    let (c, s) = (phi.cos(), phi.sin());
    let mut j = DMatrix::zeros(n, n);
    for p in 0..chain {
        let (x, y) = (2 * p, h + 2 * p);
        // x-part gets R(φ)·y
        j[(x, y)] = c;
        j[(x, y + 1)] = -s;
        j[(x + 1, y)] = s;
        j[(x + 1, y + 1)] = c;
        // y-part gets −R(−φ)·x
        j[(y, x)] = -c;
        j[(y, x + 1)] = -s;
        j[(y + 1, x)] = s;
        j[(y + 1, x + 1)] = -c;
    }
    j
}

fn model_margin(a: &DMatrix<f64>, j: &DMatrix<f64>) -> f64 {
    let s = (a * j + (a * j).transpose()) * 0.5;
    let ev = s.symmetric_eigenvalues();
    ev.min() / ev.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE)
}

/// Block complex structure tamed by both block models.
fn block_structure(block: &PencilBlock) -> Result<DMatrix<f64>> {
    let (m0, m1) = block.model();
    match *block {
        PencilBlock::Real { lambda, chain, .. } => {
            if lambda <= 0.0 {
                return Err(Error::Precondition(format!("real block with λ = {lambda} ≤ 0")));
            }
            let mut j = DMatrix::zeros(2 * chain, 2 * chain);
            for i in 0..chain {
                j[(i, chain + i)] = -1.0;
                j[(chain + i, i)] = 1.0;
            }
            Ok(j)
        }
        PencilBlock::Complex { mu, nu, chain, .. } => {
            for psi in [nu.atan2(mu), (-nu).atan2(mu)] {
                let j = j_phi(chain, PI + psi / 2.0);
                if model_margin(&m0, &j) > 0.0 && model_margin(&m1, &j) > 0.0 {
                    return Ok(j);
                }
            }
            Err(Error::Numerical(format!("no J_φ tames the (μ, ν) = ({mu}, {nu}) model")))
        }
    }
}

#[derive(Clone, Debug)]
pub struct CotameResult {
    pub j: ComplexStructure<f64>,
    pub blocks: PencilBlocks,
    pub margin0: f64,
    pub margin1: f64,
    pub attempts: usize,
}

impl CotameResult {
    pub fn to_json(&self) -> Value {
        json!({
            "J": self.j.to_json(),
            "blocks": self.blocks.to_json(),
            "margin0": self.margin0,
            "margin1": self.margin1,
            "attempts": self.attempts,
            "defect": self.j.defect(),
            "convention": CONVENTION,
        })
    }
}

/// A complex structure tamed by both forms, built block-wise and verified.
pub fn construct_cotamed(a0: &SkewForm<f64>, a1: &SkewForm<f64>) -> Result<CotameResult> {
    if !cotamed_exists(a0, a1)? {
        return Err(Error::Precondition("B has an eigenvalue on the negative real axis".into()));
    }
    let mut eps = EPS_START;
    let mut last = String::new();
    for attempt in 1..=MAX_RETRIES + 1 {
        let blocks = match simultaneous_reduce(a0, a1, eps) {
            Ok(b) => b,
            Err(e) => {
                last = e.to_string();
                eps /= 2.0;
                continue;
            }
        };
        let n = blocks.dim();
        let mut jb = DMatrix::zeros(n, n);
        for b in &blocks.blocks {
            let (o, s) = (b.offset(), b.size());
            jb.view_mut((o, o), (s, s)).copy_from(&block_structure(b)?);
        }
        let p = &blocks.basis;
        let pinv = p.clone().try_inverse().ok_or_else(|| Error::Singular("reduction basis".into()))?;
        let j = ComplexStructure::from_dmatrix_polished(&(p * jb * pinv))?;
        let (m0, m1) = (taming_margin(a0, &j)?, taming_margin(a1, &j)?);
        if m0 > 1e-10 && m1 > 1e-10 && j.defect() <= 1e-10 {
            return Ok(CotameResult { j, blocks, margin0: m0, margin1: m1, attempts: attempt });
        }
        let sv = p.clone().singular_values();
        last = format!(
            "margins ({m0:e}, {m1:e}), basis condition number {:e}",
            sv.max() / sv.min().max(f64::MIN_POSITIVE)
        );
        eps /= 2.0;
    }
    Err(Error::Numerical(format!("cotamed construction failed: {last}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn conj(a: &DMatrix<f64>, p: &DMatrix<f64>) -> SkewForm<f64> {
        let m = p.transpose() * a * p;
        let m = (&m - m.transpose()) * 0.5;
        SkewForm::new(from_dmatrix(&m)).unwrap()
    }

    fn p0() -> DMatrix<f64> {
        DMatrix::from_row_slice(4, 4, &[1.0, 0.3, -0.2, 0.5, 0.1, 1.2, 0.4, -0.3, 0.0, -0.5, 0.9, 0.2, 0.7, 0.1, 0.3, 1.1])
    }

    #[test]
    fn complex_model_is_recovered() {
        let blk = PencilBlock::Complex { mu: 1.0, nu: 2.0, chain: 1, offset: 0 };
        let (m0, m1) = blk.model();
        let r = simultaneous_reduce(&conj(&m0, &p0()), &conj(&m1, &p0()), 1e-3).unwrap();
        assert_eq!(r.blocks.len(), 1);
        match r.blocks[0] {
            PencilBlock::Complex { mu, nu, .. } => {
                assert!((mu - 1.0).abs() < 1e-6 && (nu - 2.0).abs() < 1e-6, "{mu} {nu}");
            }
            ref b => panic!("unexpected block {b:?}"),
        }
        assert!(r.residual0 < 1e-9 && r.residual1 < 1e-8);
    }

    #[test]
    fn jordan_chain_is_recovered() {
        let m0 = SkewForm::<f64>::standard(2).to_dmatrix();
        let mut m1 = &m0 * 2.0;
        m1[(0, 3)] = 1.0;
        m1[(3, 0)] = -1.0;
        let r = simultaneous_reduce(&conj(&m0, &p0()), &conj(&m1, &p0()), 1e-3).unwrap();
        assert_eq!(r.blocks, vec![PencilBlock::Real { lambda: r.blocks[0].lambda(), chain: 2, offset: 0 }]);
        assert!((r.blocks[0].lambda() - 2.0).abs() < 1e-6);
        assert!(r.residual1 <= 10.0 * r.eps);
        assert!(r.experimental);
    }

    #[test]
    fn exact_reduction_of_diagonal_pencil() {
        let a0 = SkewForm::<Rational>::standard(2);
        let mut m = a0.matrix().to_vec();
        m[0][2] = rat_int(3);
        m[2][0] = rat_int(-3);
        m[1][3] = rat_int(5);
        m[3][1] = rat_int(-5);
        let a1 = SkewForm::new(m).unwrap();
        let r = simultaneous_reduce_exact(&a0, &a1).unwrap();
        assert!(r.verify(&a0, &a1));
        let mut l = r.lambdas.clone();
        l.sort();
        assert_eq!(l, vec![rat_int(3), rat_int(5)]);
    }

    #[test]
    fn remark_pair_is_cotamed() {
        let (a0, a1) = crate::symplin::suite::remark_pair();
        let (a0, a1) = (a0.to_f64(), a1.to_f64());
        let r = construct_cotamed(&a0, &a1).unwrap();
        assert!(r.margin0 > 0.0 && r.margin1 > 0.0);
    }
}
