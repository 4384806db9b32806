//! Independent checks: dense eigensolvers, and the Bargmann-space solution
//! of `elem·Ψ = zΨ` as a first-order matrix ODE in `ζ`.

use crate::coupled::AlgebraElement;
use crate::error::{invalid, Error, Result};
use crate::fock::{settle, JointState, SpaceSpec, Truncation};
use crate::linalg::{CMatrix, CVector};
use crate::special::factorial_ratio_f64;
use crate::su2::{su2_state_jacobi, Su2Case};
use crate::{c, C64};
use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Sorted by real part, then imaginary part.
    pub values: Vec<C64>,
    /// Unit columns matching `values`.
    pub vectors: CMatrix,
    /// `max_k ‖Av_k − λ_k v_k‖ / ‖A‖_F`.
    pub max_residual: f64,
}

/// Complex Schur form followed by back-substitution on the triangular factor.
pub fn dense_eigen(m: &CMatrix) -> Result<Eigen> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::ShapeMismatch { expected: n, got: m.ncols() });
    }
    let scale = m.norm();
    if !scale.is_finite() {
        return Err(Error::Numerical("non-finite matrix entries".into()));
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 100 * n.max(10))
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let smin = (f64::EPSILON * scale).max(f64::MIN_POSITIVE);
    let mut vectors = CMatrix::zeros(n, n);
    for k in 0..n {
        let lk = t[(k, k)];
        let mut y = CVector::zeros(n);
        y[k] = c(1.0);
        for i in (0..k).rev() {
            let mut s = c(0.0);
            for l in i + 1..=k {
                s += t[(i, l)] * y[l];
            }
            let mut d = t[(i, i)] - lk;
            if d.norm() < smin {
                d = c(smin);
            }
            y[i] = -s / d;
        }
        let v = &q * y;
        let nv = v.norm();
        vectors.set_column(k, &(v / c(nv)));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<C64> = (0..n).map(|k| t[(k, k)]).collect();
    order.sort_by(|&a, &b| {
        diag[a].re.total_cmp(&diag[b].re).then(diag[a].im.total_cmp(&diag[b].im))
    });
    let values: Vec<C64> = order.iter().map(|&k| diag[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| vectors[(r, order[col])]);
    let mut max_residual: f64 = 0.0;
    for (k, &l) in values.iter().enumerate() {
        let v = vectors.column(k);
        let r = (m * v - v * l).norm() / scale.max(f64::MIN_POSITIVE);
        max_residual = max_residual.max(r);
    }
    if !max_residual.is_finite() || max_residual > 1e-8 {
        return Err(Error::Numerical(format!("eigenvector residual {max_residual:.3e}")));
    }
    Ok(Eigen { values, vectors, max_residual })
}

pub fn element_eigen(elem: &AlgebraElement, spec: SpaceSpec) -> Result<Eigen> {
    dense_eigen(&elem.operator(spec).matrix)
}

/// Number of singular values above `rel_tol·σ_max`.
pub fn matrix_rank(m: &CMatrix, rel_tol: f64) -> usize {
    let sv = m.singular_values();
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Ranks of `(A − shift)^k` for `k = 1..=n`, each relative to `‖A − shift‖₂^k`.
pub fn power_ranks(m: &CMatrix, shift: C64, rel_tol: f64) -> Vec<usize> {
    let n = m.nrows();
    let b = m - CMatrix::identity(n, n) * shift;
    let s1 = b.singular_values().max();
    let mut p = b.clone();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let sv = p.singular_values();
        let floor = rel_tol * s1.powi(k as i32);
        out.push(sv.iter().filter(|&&s| s > floor).count());
        p = &p * &b;
    }
    out
}

/// The `(2j+1)×(2j+1)` matrix of `β₋J₊ + β₊J₋ + β₃J₃` in the order `m = −j..j`.
pub fn bargmann_coupling_matrix(elem: &AlgebraElement, two_j: u32) -> CMatrix {
    elem.su2().matrix(two_j)
}

/// `Ψ(ζ) = exp(c_linear ζ + c_quad ζ²) Σ_k poly[k] ζ^k`, with spin-vector
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct BargmannSolution {
    pub two_j: u32,
    pub c_linear: C64,
    pub c_quad: C64,
    pub poly: Vec<CVector>,
    /// Eigenvalue of the spin part carried by this solution.
    pub lambda: C64,
}

impl BargmannSolution {
    /// Fock coefficients `c_n = √n! [ζⁿ]Ψ`.
    pub fn fock_vector(&self, len: usize) -> CVector {
        let d = self.two_j as usize + 1;
        let mut g = CVector::zeros(len);
        if len > 0 {
            g[0] = c(1.0);
        }
        // g_n = √n! t_n with (n+1) t_{n+1} = c₁ t_n + 2c₂ t_{n−1}.
        for n in 0..len.saturating_sub(1) {
            let prev = if n > 0 { g[n - 1] * (n as f64).sqrt() } else { c(0.0) };
            g[n + 1] = (self.c_linear * g[n] + self.c_quad * 2.0 * prev) / ((n + 1) as f64).sqrt();
        }
        let mut out = CVector::zeros(len * d);
        for n in 0..len {
            let mut f = 1.0;
            for (k, p) in self.poly.iter().enumerate().take(n + 1) {
                if k > 0 {
                    f *= ((n + 1 - k) as f64).sqrt();
                }
                let w = g[n - k] * f;
                for i in 0..d {
                    out[n * d + i] += w * p[i];
                }
            }
        }
        out
    }

    pub fn to_fock(&self, trunc: Truncation) -> Result<JointState> {
        settle(self.two_j, trunc, self.poly.len(), |len| Ok(self.fock_vector(len)))
    }
}

fn check_element(elem: &AlgebraElement) -> Result<()> {
    if elem.alpha_minus.norm() == 0.0 {
        return Err(Error::NoSolution("α₋ = 0 turns the equation into an algebraic one without solutions".into()));
    }
    if (elem.alpha_plus / elem.alpha_minus).norm() >= 1.0 {
        return invalid("|α₊/α₋| ≥ 1 gives non-normalizable solutions");
    }
    Ok(())
}

/// Column `m` of the diagonalizing matrix and its eigenvalue.
fn s_column(elem: &AlgebraElement, two_j: u32, two_m: i32) -> Result<(CVector, C64)> {
    let k = elem.su2();
    let d = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let m = two_m as f64 / 2.0;
    let mi = ((two_m + two_j as i32) / 2) as usize;
    let mut v = CVector::zeros(d);
    match k.case() {
        Su2Case::Generic => return Ok((su2_state_jacobi(&k, two_j, two_m)?.coeffs, k.b * m)),
        Su2Case::Diagonal => v[mi] = c(1.0),
        Su2Case::UpperTriangular => {
            // Components u ≥ m: (−β₋/β₃)^{u−m}/(u−m)! √((j−m)!(j+u)!/((j−u)!(j+m)!)).
            let r = -k.beta_minus / k.beta_3;
            for ui in mi..d {
                let s = (ui - mi) as u32;
                let u = ui as f64 - j;
                let f = factorial_ratio_f64((j + u) as u32, (j + m) as u32)? * factorial_ratio_f64((j - m) as u32, (j - u) as u32)?;
                v[ui] = r.powu(s) * (f.sqrt() / factorial_ratio_f64(s, 0)?);
            }
        }
        Su2Case::LowerTriangular => {
            // Components u ≤ m: (β₊/β₃)^{m−u}/(m−u)! √((j+m)!(j−u)!/((j+u)!(j−m)!)).
            let r = k.beta_plus / k.beta_3;
            for ui in 0..=mi {
                let s = (mi - ui) as u32;
                let u = ui as f64 - j;
                let f = factorial_ratio_f64((j + m) as u32, (j + u) as u32)? * factorial_ratio_f64((j - u) as u32, (j - m) as u32)?;
                v[ui] = r.powu(s) * (f.sqrt() / factorial_ratio_f64(s, 0)?);
            }
        }
        Su2Case::DegenerateFull | Su2Case::DegenerateLadder => {
            return invalid("b = 0 is not diagonalizable");
        }
    }
    Ok((v, k.beta_3 * m))
}

/// The solution with `Ψ(0) = v` when `b = 0`, from the Picard iteration
/// `P_{k+1}(ζ) = v − (1/α₋) ∫₀^ζ K P_k`, which terminates because `K` is
/// nilpotent.
pub fn bargmann_from_initial(elem: &AlgebraElement, two_j: u32, z: C64, v: &CVector) -> Result<BargmannSolution> {
    check_element(elem)?;
    let d = two_j as usize + 1;
    if v.len() != d {
        return Err(Error::ShapeMismatch { expected: d, got: v.len() });
    }
    let k = bargmann_coupling_matrix(elem, two_j);
    let am = elem.alpha_minus;
    let mut p: Vec<CVector> = vec![v.clone()];
    for _ in 0..d {
        let mut next = vec![v.clone()];
        for (i, pk) in p.iter().enumerate() {
            next.push(&k * pk * (-c(1.0) / (am * (i + 1) as f64)));
        }
        p = next;
    }
    while p.len() > 1 && p.last().is_some_and(|x| x.norm() <= 1e-14 * v.norm()) {
        p.pop();
    }
    Ok(BargmannSolution {
        two_j,
        c_linear: (z - elem.alpha_3) / am,
        c_quad: -elem.alpha_plus / (am * 2.0),
        poly: p,
        lambda: c(0.0),
    })
}

/// `2j+1` independent solutions with eigenvalue `z`, labelled `m = −j..j`.
///
/// For `b ≠ 0` solution `m` is `exp(−α₊ζ²/(2α₋) + (z−α₃−λ_m)ζ/α₋)` times the
/// `m`-th eigenvector of the spin matrix; for `b = 0` solution `m` starts from
/// `|j, m⟩` at `ζ = 0`.
pub fn bargmann_solve(elem: &AlgebraElement, two_j: u32, z: C64) -> Result<Vec<BargmannSolution>> {
    check_element(elem)?;
    let d = two_j as usize + 1;
    let degenerate = elem.su2().is_degenerate();
    let mut out = Vec::with_capacity(d);
    for mi in 0..d {
        let two_m = 2 * mi as i32 - two_j as i32;
        if degenerate {
            let mut e = CVector::zeros(d);
            e[mi] = c(1.0);
            out.push(bargmann_from_initial(elem, two_j, z, &e)?);
        } else {
            let (col, lambda) = s_column(elem, two_j, two_m)?;
            out.push(BargmannSolution {
                two_j,
                c_linear: (z - elem.alpha_3 - lambda) / elem.alpha_minus,
                c_quad: -elem.alpha_plus / (elem.alpha_minus * 2.0),
                poly: vec![col],
                lambda,
            });
        }
    }
    Ok(out)
}

pub fn bargmann_states(elem: &AlgebraElement, two_j: u32, z: C64, trunc: Truncation) -> Result<Vec<JointState>> {
    bargmann_solve(elem, two_j, z)?.iter().map(|s| s.to_fock(trunc)).collect()
}

/// `‖Pψ‖²` for the orthogonal projector `P` onto the span of `basis`.
pub fn span_overlap(state: &JointState, basis: &[JointState]) -> Result<f64> {
    let n = basis.iter().map(|b| b.spec.fock_dim).chain([state.spec.fock_dim]).max().unwrap_or(1);
    let dim = state.resized(n).coeffs.len();
    let m = CMatrix::from_fn(dim, basis.len(), |r, k| basis[k].resized(n).coeffs[r]);
    let svd = m.svd(true, false);
    let u = svd.u.ok_or_else(|| Error::Numerical("SVD without U".into()))?;
    let top = svd.singular_values.max();
    let psi = state.resized(n).coeffs;
    let mut s = 0.0;
    for (k, &sv) in svd.singular_values.iter().enumerate() {
        if sv > 1e-10 * top {
            s += u.column(k).dotc(&psi).norm_sqr();
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub total: f64,
    /// Rows below the top two Fock levels.
    pub interior: f64,
    /// Rows of the top two Fock levels, which feel the truncation.
    pub edge: f64,
    /// `edge > 100·max(interior, 1e−8)`: the truncation is too tight.
    pub edge_dominated: bool,
}

/// `‖elem·ψ − zψ‖₂` split into interior and edge parts.
pub fn residual(elem: &AlgebraElement, state: &JointState, z: C64) -> Residual {
    let spec = state.spec;
    let r = elem.apply(spec, &state.coeffs) - &state.coeffs * z;
    let cut = spec.fock_dim.saturating_sub(2) * spec.spin_dim();
    let interior = r.rows(0, cut).norm();
    let edge = r.rows(cut, r.len() - cut).norm();
    Residual { total: r.norm(), interior, edge, edge_dominated: edge > 100.0 * interior.max(1e-8) }
}

/// Gauss–Laguerre nodes and weights for `∫₀^∞ e^{−t} f(t) dt`.
pub fn gauss_laguerre(k: usize) -> (Vec<f64>, Vec<f64>) {
    let jm = DMatrix::<f64>::from_fn(k, k, |r, c| {
        if r == c {
            (2 * r + 1) as f64
        } else if r.abs_diff(c) == 1 {
            r.max(c) as f64
        } else {
            0.0
        }
    });
    let e = SymmetricEigen::new(jm);
    let mut pairs: Vec<(f64, f64)> =
        (0..k).map(|i| (e.eigenvalues[i], e.eigenvectors[(0, i)].powi(2))).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// `(1/π) ∫ |f(ζ)|² e^{−|ζ|²} d²ζ` for a polynomial `f = Σ a_n ζⁿ`, by
/// quadrature in `t = |ζ|²` and the angle.
pub fn bargmann_norm_sqr(a: &[C64]) -> f64 {
    let n = a.len().max(1);
    let (nodes, weights) = gauss_laguerre(n + 1);
    let angles = 2 * n + 2;
    let mut s = 0.0;
    for (t, w) in nodes.iter().zip(&weights) {
        let r = t.sqrt();
        let mut ring = 0.0;
        for q in 0..angles {
            let zeta = C64::from_polar(r, 2.0 * std::f64::consts::PI * q as f64 / angles as f64);
            let f = a.iter().rev().fold(c(0.0), |acc, &x| acc * zeta + x);
            ring += f.norm_sqr();
        }
        s += w * ring / angles as f64;
    }
    s
}
