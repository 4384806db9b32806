//! Small dense building blocks: ladder matrices, Kronecker products,
//! the matrix exponential and Gaussian Fock series.

use crate::C64;
use nalgebra::{DMatrix, DVector};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Bosonic annihilation operator on levels `0..n`.
pub fn annihilation(n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for k in 1..n {
        m[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
    }
    m
}

/// Bosonic creation operator on levels `0..n`; the top level maps to zero.
pub fn creation(n: usize) -> CMatrix {
    annihilation(n).adjoint()
}

/// `(J₊, J₋, J₃)` for spin `two_j / 2`, basis ordered by ascending `m`.
pub fn spin_matrices(two_j: u32) -> (CMatrix, CMatrix, CMatrix) {
    let d = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let mut jp = CMatrix::zeros(d, d);
    let mut j3 = CMatrix::zeros(d, d);
    for k in 0..d {
        let m = k as f64 - j;
        j3[(k, k)] = C64::new(m, 0.0);
        if k + 1 < d {
            jp[(k + 1, k)] = C64::new(((j - m) * (j + m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    (jp, jm, j3)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

fn norm1(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a Taylor core.
///
/// The scaled matrix has 1-norm at most ½ and the series is summed until
/// the next term falls below `1e-16` relative, which keeps the overall
/// error well inside `1e-13` for the sizes used here.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let nrm = norm1(a);
    let mut s = 0u32;
    if nrm > 0.5 {
        s = (nrm / 0.5).log2().ceil() as u32;
    }
    let scale = 0.5f64.powi(s as i32);
    let x = a * C64::new(scale, 0.0);
    let mut sum = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..60 {
        term = &term * &x * C64::new(1.0 / k as f64, 0.0);
        sum += &term;
        if norm1(&term) <= 1e-17 * norm1(&sum) {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(A) v` without forming `exp(A)`.
///
/// The non-zero entries of `A` are gathered once, and the action is split
/// into `s` steps with `‖A‖₁/s ≤ 1`, each summed as a Taylor series. This is
/// cheap for the banded ladder generators, where dense `expm` is not.
pub fn expm_apply(a: &CMatrix, v: &CVector) -> CVector {
    let nz: Vec<(usize, usize, C64)> = (0..a.ncols())
        .flat_map(|c| (0..a.nrows()).map(move |r| (r, c)))
        .filter_map(|(r, c)| {
            let z = a[(r, c)];
            (z != ZERO).then_some((r, c, z))
        })
        .collect();
    let matvec = |x: &CVector| {
        let mut y = CVector::zeros(x.len());
        for &(r, c, z) in &nz {
            y[r] += z * x[c];
        }
        y
    };
    expm_apply_op(matvec, norm1(a), v)
}

/// `exp(A) v` given only `x ↦ Ax` and a bound on `‖A‖`.
pub fn expm_apply_op<F: Fn(&CVector) -> CVector>(matvec: F, norm_bound: f64, v: &CVector) -> CVector {
    let steps = (norm_bound / 4.0).ceil().max(1.0) as usize;
    let inv = C64::new(1.0 / steps as f64, 0.0);
    let mut out = v.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let base = out.norm();
        for k in 1..80 {
            term = matvec(&term) * (inv / k as f64);
            out += &term;
            if term.norm() <= 1e-17 * base {
                break;
            }
        }
    }
    out
}

/// `S(χ)D(η)` applied to a bosonic vector, on its own length.
pub fn squeeze_displace_apply(chi: C64, eta: C64, v: &CVector) -> CVector {
    let n = v.len();
    let mut out = v.clone();
    if eta != ZERO {
        let gen = |x: &CVector| {
            let mut y = CVector::zeros(n);
            for k in 0..n.saturating_sub(1) {
                let s = ((k + 1) as f64).sqrt();
                y[k + 1] += eta * s * x[k];
                y[k] -= eta.conj() * s * x[k + 1];
            }
            y
        };
        out = expm_apply_op(gen, 2.0 * eta.norm() * (n as f64).sqrt(), &out);
    }
    if chi != ZERO {
        let gen = |x: &CVector| {
            let mut y = CVector::zeros(n);
            for k in 0..n.saturating_sub(2) {
                let s = (((k + 1) * (k + 2)) as f64).sqrt() * 0.5;
                y[k + 2] += chi * s * x[k];
                y[k] -= chi.conj() * s * x[k + 2];
            }
            y
        };
        out = expm_apply_op(gen, chi.norm() * n as f64, &out);
    }
    out
}

/// `(χ a†² − χ̄ a²)/2` on `n` levels.
pub fn squeeze_generator(chi: C64, n: usize) -> CMatrix {
    let mut g = CMatrix::zeros(n, n);
    for k in 0..n.saturating_sub(2) {
        let s = (((k + 1) * (k + 2)) as f64).sqrt() * 0.5;
        g[(k + 2, k)] = chi * s;
        g[(k, k + 2)] = -chi.conj() * s;
    }
    g
}

/// `η a† − η̄ a` on `n` levels.
pub fn displace_generator(eta: C64, n: usize) -> CMatrix {
    let mut g = CMatrix::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        let s = ((k + 1) as f64).sqrt();
        g[(k + 1, k)] = eta * s;
        g[(k, k + 1)] = -eta.conj() * s;
    }
    g
}

/// `exp(X) v` for a nilpotent `X`, summed exactly.
pub fn expm_nilpotent_apply(x: &CMatrix, v: &CVector) -> CVector {
    let mut out = v.clone();
    let mut term = v.clone();
    for k in 1..=x.nrows() {
        term = x * term * C64::new(1.0 / k as f64, 0.0);
        if term.iter().all(|z| *z == ZERO) {
            break;
        }
        out += &term;
    }
    out
}

/// Fock coefficients of `exp(c₂ a†² + c₁ a†)|0⟩` on levels `0..len`,
/// unnormalized with the vacuum coefficient equal to one.
///
/// The recurrence `F_{n+1} = (c₁ F_n + 2 c₂ √n F_{n−1}) / √(n+1)` is exact,
/// so truncation only drops levels and never corrupts kept ones.
pub fn gaussian_fock(c1: C64, c2: C64, len: usize) -> CVector {
    let mut v = CVector::zeros(len);
    if len == 0 {
        return v;
    }
    v[0] = ONE;
    if len > 1 {
        v[1] = c1;
    }
    for n in 1..len.saturating_sub(1) {
        let nf = n as f64;
        v[n + 1] = (c1 * v[n] + c2 * v[n - 1] * (2.0 * nf.sqrt())) / (nf + 1.0).sqrt();
    }
    v
}

/// `(a†)^k` applied to a bosonic coefficient vector, keeping length.
pub fn raise(v: &CVector, k: usize) -> CVector {
    let len = v.len();
    let mut out = CVector::zeros(len);
    for n in k..len {
        let mut f = 1.0;
        for i in (n - k + 1)..=n {
            f *= (i as f64).sqrt();
        }
        out[n] = v[n - k] * f;
    }
    out
}

/// Product vector `boson ⊗ spin` in the joint basis.
pub fn tensor(boson: &CVector, spin: &CVector) -> CVector {
    let d = spin.len();
    let mut out = CVector::zeros(boson.len() * d);
    for (n, b) in boson.iter().enumerate() {
        for (k, s) in spin.iter().enumerate() {
            out[n * d + k] = b * s;
        }
    }
    out
}

pub fn normalize(v: &CVector) -> CVector {
    let n = v.norm();
    if n == 0.0 {
        v.clone()
    } else {
        v / C64::new(n, 0.0)
    }
}

/// Maximum total dimension for truncation growth (`AES_LAB_MAX_DIM`, default 4096).
pub fn max_dim() -> usize {
    std::env::var("AES_LAB_MAX_DIM")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&d| d > 0)
        .unwrap_or(4096)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_diagonal() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 0)] = C64::new(1.5, 0.2);
        a[(1, 1)] = C64::new(-4.0, 1.0);
        a[(2, 2)] = C64::new(0.0, 3.0);
        let e = expm(&a);
        for k in 0..3 {
            let want = a[(k, k)].exp();
            assert!((e[(k, k)] - want).norm() < 1e-13 * want.norm().max(1.0));
        }
    }

    #[test]
    fn expm_rotation_is_unitary() {
        let (jp, jm, _) = spin_matrices(3);
        let g = (&jp - &jm) * C64::new(0.7, 0.0);
        let u = expm(&g);
        let err = max_abs_diff(&(u.adjoint() * &u), &identity(4));
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn gaussian_series_matches_power_series() {
        // exp(c1 ζ) Taylor coefficients c1^n/n! times √n! give c1^n/√n!.
        let c1 = C64::new(0.8, -0.3);
        let v = gaussian_fock(c1, ZERO, 12);
        let mut f = 1.0;
        for n in 0..12 {
            if n > 0 {
                f *= (n as f64).sqrt();
            }
            assert!((v[n] - c1.powu(n as u32) / f).norm() < 1e-14);
        }
    }

    #[test]
    fn structured_apply_matches_generators() {
        let (chi, eta) = (C64::new(0.4, -0.3), C64::new(-0.7, 0.5));
        let mut v = CVector::zeros(40);
        v[0] = C64::new(1.0, 0.0);
        v[3] = C64::new(0.2, 0.1);
        let dense = expm_apply(&squeeze_generator(chi, 40), &expm_apply(&displace_generator(eta, 40), &v));
        assert!((squeeze_displace_apply(chi, eta, &v) - dense).norm() < 1e-12);
    }

    #[test]
    fn generators_match_products() {
        let a = annihilation(9);
        let ad = a.adjoint();
        let (chi, eta) = (C64::new(0.3, -0.8), C64::new(-1.1, 0.4));
        let s = (&ad * &ad) * (chi * 0.5) - (&a * &a) * (chi.conj() * 0.5);
        let d = &ad * eta - &a * eta.conj();
        assert!(max_abs_diff(&s, &squeeze_generator(chi, 9)) < 1e-14);
        assert!(max_abs_diff(&d, &displace_generator(eta, 9)) < 1e-15);
    }

    #[test]
    fn expm_apply_matches_dense() {
        let a = annihilation(30);
        let ad = a.adjoint();
        let g = (&ad * &ad) * C64::new(0.2, 0.1) - (&a * &a) * C64::new(0.2, -0.1) + &ad * C64::new(0.5, 0.0);
        let mut v = CVector::zeros(30);
        v[0] = ONE;
        v[3] = C64::new(0.0, 0.5);
        let err = (expm_apply(&g, &v) - expm(&g) * &v).norm();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn spin_half_ladder() {
        let (jp, _, j3) = spin_matrices(1);
        assert_eq!(jp[(1, 0)], ONE);
        assert_eq!(j3[(0, 0)], C64::new(-0.5, 0.0));
    }
}
