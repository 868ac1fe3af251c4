//! Explicit isomorphism from Geiges' algebra onto the unimodular part of `𝒢^{r,s}`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::liealg::presets::{geiges, geiges_matrix, grs, int_matmul};
use crate::liealg::LieAlgebra;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct GeigesIsomorphism {
    pub n: usize,
    pub r: usize,
    pub s: usize,
    /// `P` with `A = P⁻¹ B P`, `B` block diagonal.
    pub p: DMatrix<f64>,
    pub b: DMatrix<f64>,
    /// Images of `Y_1..Y_{n-1}, E_1..E_n` in the basis of `𝒢^{r,s}`, as columns.
    pub map: DMatrix<f64>,
    /// `tr(A^j)` for `1 ≤ j ≤ n - 1`, exactly.
    pub traces: Vec<i64>,
    /// Largest structure-constant mismatch `|Φ[x, y] - [Φx, Φy]|`.
    pub residual: f64,
    /// Largest `|Σ t_i + 2 Σ Re w_j|` over the images of the `Y_k`.
    pub trace_form_residual: f64,
    /// `|A - P⁻¹ B P|_max`.
    pub conjugation_residual: f64,
    pub rank: usize,
}

impl GeigesIsomorphism {
    pub fn passes(&self, tol: f64) -> bool {
        self.residual <= tol
            && self.trace_form_residual <= tol
            && self.conjugation_residual <= tol
            && self.traces.iter().all(|&t| t == 0)
            && self.rank == 2 * self.n - 1
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "r": self.r, "s": self.s,
            "traces": self.traces,
            "residual": self.residual,
            "trace_form_residual": self.trace_form_residual,
            "conjugation_residual": self.conjugation_residual,
            "rank": self.rank,
        })
    }
}

fn float_bracket(g: &LieAlgebra, x: &[f64], y: &[f64]) -> Vec<f64> {
    g.bracket(x, y)
}

/// Builds the isomorphism `G_{2n-1} → 𝒢^{r,s}_1` (`r = 1` for odd `n`, `r = 2` for even `n`).
pub fn geiges_isomorphism(n: usize) -> Result<GeigesIsomorphism> {
    if !(1..=8).contains(&n) {
        return Err(Error::Precondition("geiges isomorphism needs 1 ≤ n ≤ 8".into()));
    }
    if n == 1 {
        // G_1 = ℝ, sent to the fiber Θ1 of Aff(ℝ).
        let one = DMatrix::from_element(1, 1, 1.0);
        return Ok(GeigesIsomorphism {
            n,
            r: 1,
            s: 0,
            p: one.clone(),
            b: one,
            map: DMatrix::from_column_slice(2, 1, &[0.0, 1.0]),
            traces: vec![],
            residual: 0.0,
            trace_form_residual: 0.0,
            conjugation_residual: 0.0,
            rank: 1,
        });
    }
    let a_int = geiges_matrix(n);
    let mut traces = Vec::new();
    let mut pow = a_int.clone();
    for _ in 1..n {
        traces.push((0..n).map(|i| pow[i][i]).sum());
        pow = int_matmul(&pow, &a_int);
    }
    let r = if n % 2 == 1 { 1 } else { 2 };
    let s = (n - r) / 2;
    let theta = 2.0 * PI / n as f64;

    // A is the cyclic shift A f_i = f_{i-1} in the basis f_1 = -e_1, f_i = e_i.
    // Eigenvectors Σ_i ω^{ij} f_i give the real blocks of B.
    let f_to_e = |i: usize| if i == 0 { -1.0 } else { 1.0 };
    let mut q = DMatrix::<f64>::zeros(n, n);
    let mut col = 0;
    for i in 0..n {
        q[(i, col)] = f_to_e(i);
    }
    col += 1;
    if r == 2 {
        for i in 0..n {
            let sign = if (i + 1) % 2 == 0 { 1.0 } else { -1.0 };
            q[(i, col)] = f_to_e(i) * sign;
        }
        col += 1;
    }
    for j in 1..=s {
        for i in 0..n {
            let ang = ((i + 1) * j) as f64 * theta;
            q[(i, col)] = f_to_e(i) * ang.cos();
            q[(i, col + 1)] = -f_to_e(i) * ang.sin();
        }
        col += 2;
    }
    let mut b = DMatrix::<f64>::zeros(n, n);
    b[(0, 0)] = 1.0;
    if r == 2 {
        b[(1, 1)] = -1.0;
    }
    for j in 1..=s {
        let k = r + 2 * (j - 1);
        let ang = j as f64 * theta;
        b[(k, k)] = ang.cos();
        b[(k, k + 1)] = -ang.sin();
        b[(k + 1, k)] = ang.sin();
        b[(k + 1, k + 1)] = ang.cos();
    }
    let p = q.clone().try_inverse().ok_or_else(|| Error::Singular("eigenbasis".into()))?;
    let a = DMatrix::from_fn(n, n, |i, j| a_int[i][j] as f64);
    let conjugation_residual = (&a - &q * &b * &p).amax();

    let src = geiges(n)?;
    let dst = grs(r, s)?;
    let dim = 2 * n - 1;
    let target_dim = dst.dim();
    let base_dim = r + 2 * s;
    // Columns: images of Y_1..Y_{n-1}, then E_1..E_n, in the basis of 𝒢^{r,s}.
    let mut map = DMatrix::<f64>::zeros(target_dim, dim);
    for k in 1..n {
        let c = k - 1;
        map[(0, c)] = 1.0;
        if r == 2 {
            map[(1, c)] = if k % 2 == 0 { 1.0 } else { -1.0 };
        }
        for j in 1..=s {
            let ang = (j * k) as f64 * theta;
            map[(r + 2 * (j - 1), c)] = ang.cos();
            map[(r + 2 * (j - 1) + 1, c)] = ang.sin();
        }
    }
    for i in 0..n {
        for l in 0..n {
            map[(base_dim + l, n - 1 + i)] = p[(l, i)];
        }
    }
    // Σ t_i + 2 Σ Re w_j on the image of each Y_k.
    let mut trace_form_residual: f64 = 0.0;
    for c in 0..n - 1 {
        let mut t: f64 = (0..r).map(|i| map[(i, c)]).sum();
        for j in 0..s {
            t += 2.0 * map[(r + 2 * j, c)];
        }
        trace_form_residual = trace_form_residual.max(t.abs());
    }
    let col_vec = |c: usize| -> Vec<f64> { map.column(c).iter().copied().collect() };
    let mut residual: f64 = 0.0;
    for x in 0..dim {
        for y in x + 1..dim {
            let br = src.bracket_basis(x, y);
            let mut lhs = vec![0.0; target_dim];
            for (k, ck) in br {
                let ck = ck.to_f64();
                for (t, v) in lhs.iter_mut().enumerate() {
                    *v += ck * map[(t, k)];
                }
            }
            let rhs = float_bracket(&dst, &col_vec(x), &col_vec(y));
            for t in 0..target_dim {
                residual = residual.max((lhs[t] - rhs[t]).abs());
            }
        }
    }
    let rank = map.clone().svd(false, false).rank(1e-9);
    Ok(GeigesIsomorphism {
        n,
        r,
        s,
        p,
        b,
        map,
        traces,
        residual,
        trace_form_residual,
        conjugation_residual,
        rank,
    })
}
