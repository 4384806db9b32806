//! Algebra eigenstates of h(1) ⊕ su(2): eigenvectors of
//! `α₋a + α₊a† + α₃I + β₋J₊ + β₊J₋ + β₃J₃`, including the `b = 0` branches,
//! and the super-position/super-momentum family built on them.

use crate::error::{invalid, Error, Result};
use crate::fock::{
    check_two_m, report_from_images, settle, DispersionReport, JointState, LinearOperator, SpaceSpec, Truncation,
};
use crate::linalg::{self, CMatrix, CVector};
use crate::mus::{dispersions_from_c, MusDispersions, MusParam};
use crate::special::{binomial_f64, factorial_ratio_f64, jacobi_p_real};
use crate::su2::{su2_eigenvector, Su2Case, Su2Coeffs};
use crate::{c, C64, I};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub alpha_minus: C64,
    pub alpha_plus: C64,
    pub alpha_3: C64,
    pub beta_minus: C64,
    pub beta_plus: C64,
    pub beta_3: C64,
}

/// Coefficients of the hermitian `A₁a + Ā₁a† + A₂I + A₃J₊ + Ā₃J₋ + A₄J₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermitianCoeffs {
    pub a1: C64,
    pub a2: f64,
    pub a3: C64,
    pub a4: f64,
}

impl HermitianCoeffs {
    pub fn element(&self) -> AlgebraElement {
        AlgebraElement {
            alpha_minus: self.a1,
            alpha_plus: self.a1.conj(),
            alpha_3: c(self.a2),
            beta_minus: self.a3,
            beta_plus: self.a3.conj(),
            beta_3: c(self.a4),
        }
    }
}

impl AlgebraElement {
    pub fn new(alpha_minus: C64, alpha_plus: C64, alpha_3: C64, beta_minus: C64, beta_plus: C64, beta_3: C64) -> Self {
        AlgebraElement { alpha_minus, alpha_plus, alpha_3, beta_minus, beta_plus, beta_3 }
    }

    pub fn su2(&self) -> Su2Coeffs {
        Su2Coeffs::new(self.beta_minus, self.beta_plus, self.beta_3)
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            alpha_minus: self.alpha_plus.conj(),
            alpha_plus: self.alpha_minus.conj(),
            alpha_3: self.alpha_3.conj(),
            beta_minus: self.beta_plus.conj(),
            beta_plus: self.beta_minus.conj(),
            beta_3: self.beta_3.conj(),
        }
    }

    /// `α₊ = ᾱ₋`, `α₃` real, `β₊ = β̄₋`, `β₃` real, all within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self.alpha_plus - self.alpha_minus.conj()).norm() <= tol
            && self.alpha_3.im.abs() <= tol
            && (self.beta_plus - self.beta_minus.conj()).norm() <= tol
            && self.beta_3.im.abs() <= tol
    }

    /// Dense matrix on the truncated space.
    pub fn operator(&self, spec: SpaceSpec) -> LinearOperator {
        let n = spec.fock_dim;
        let a = linalg::annihilation(n);
        let (jp, jm, j3) = linalg::spin_matrices(spec.two_j);
        let ib = linalg::identity(n);
        let is = linalg::identity(spec.spin_dim());
        let boson = &a * self.alpha_minus + a.adjoint() * self.alpha_plus + &ib * self.alpha_3;
        let spin = jp * self.beta_minus + jm * self.beta_plus + j3 * self.beta_3;
        let m = linalg::kron(&boson, &is) + linalg::kron(&ib, &spin);
        LinearOperator { spec, matrix: m }
    }

    /// Action on a joint vector without forming the matrix.
    pub fn apply(&self, spec: SpaceSpec, v: &CVector) -> CVector {
        let d = spec.spin_dim();
        let j = spec.j();
        let mut out = CVector::zeros(v.len());
        for n in 0..spec.fock_dim {
            for k in 0..d {
                let i = n * d + k;
                let x = v[i];
                if x == c(0.0) {
                    continue;
                }
                let m = k as f64 - j;
                out[i] += x * (self.alpha_3 + self.beta_3 * m);
                if n > 0 {
                    out[i - d] += x * self.alpha_minus * (n as f64).sqrt();
                }
                if n + 1 < spec.fock_dim {
                    out[i + d] += x * self.alpha_plus * ((n + 1) as f64).sqrt();
                }
                if k + 1 < d {
                    out[i + 1] += x * self.beta_minus * ((j - m) * (j + m + 1.0)).sqrt();
                }
                if k > 0 {
                    out[i - 1] += x * self.beta_plus * ((j + m) * (j - m + 1.0)).sqrt();
                }
            }
        }
        out
    }

    /// `‖(elem − z)ψ‖` over all but the top Fock level, whose rows need the
    /// first discarded amplitude.
    pub fn residual(&self, state: &JointState, z: C64) -> f64 {
        let r = self.apply(state.spec, &state.coeffs) - &state.coeffs * z;
        let keep = (state.spec.fock_dim.saturating_sub(1)).max(1) * state.spec.spin_dim();
        r.rows(0, keep).norm()
    }
}

/// [`crate::fock::srur_report`] for two hermitian elements, evaluated
/// without dense matrices.
pub fn element_report(a: &HermitianCoeffs, b: &HermitianCoeffs, state: &JointState) -> DispersionReport {
    let psi = &state.coeffs;
    report_from_images(psi, &a.element().apply(state.spec, psi), &b.element().apply(state.spec, psi))
}

/// `A + iλB` in the `(α, β)` coordinates.
pub fn element_from_ab(a: &HermitianCoeffs, b: &HermitianCoeffs, lambda: C64) -> AlgebraElement {
    let il = I * lambda;
    AlgebraElement {
        alpha_minus: a.a1 + il * b.a1,
        alpha_plus: a.a1.conj() + il * b.a1.conj(),
        alpha_3: c(a.a2) + il * b.a2,
        beta_minus: a.a3 + il * b.a3,
        beta_plus: a.a3.conj() + il * b.a3.conj(),
        beta_3: c(a.a4) + il * b.a4,
    }
}

/// `C = −i[A, B]` from the coefficient formula.
pub fn commutator_c(a: &HermitianCoeffs, b: &HermitianCoeffs, spec: SpaceSpec) -> LinearOperator {
    let n = spec.fock_dim;
    let (jp, jm, j3) = linalg::spin_matrices(spec.two_j);
    let ident = I * (a.a1.conj() * b.a1 - a.a1 * b.a1.conj());
    let c3 = I * 2.0 * (b.a3 * a.a3.conj() - b.a3.conj() * a.a3);
    let cp = I * (a.a3 * b.a4 - b.a3 * a.a4);
    let cm = I * (b.a3.conj() * a.a4 - a.a3.conj() * b.a4);
    let spin = linalg::identity(spec.spin_dim()) * ident + j3 * c3 + jp * cp + jm * cm;
    LinearOperator::from_parts(spec, &linalg::identity(n), &spin)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AesState {
    pub state: JointState,
    pub eigenvalue: C64,
}

fn check_bosonic(elem: &AlgebraElement) -> Result<()> {
    if elem.alpha_minus.norm() == 0.0 {
        if elem.alpha_plus.norm() != 0.0 {
            return Err(Error::NoSolution("α₋ = 0 with α₊ ≠ 0 has no eigenstates".into()));
        }
        return invalid("α₋ = 0: the bosonic part is not an annihilation-type operator");
    }
    let r = (elem.alpha_plus / elem.alpha_minus).norm();
    if r >= 1.0 {
        return invalid(format!("|α₊/α₋| = {r} ≥ 1 gives a non-normalizable state"));
    }
    Ok(())
}

/// Dispatches to [`aes_general`] or [`aes_degenerate`] on `b`.
pub fn aes_state(elem: &AlgebraElement, two_j: u32, two_m: i32, rho: C64, trunc: Truncation) -> Result<AesState> {
    if elem.su2().is_degenerate() {
        aes_degenerate(elem, two_j, two_m, rho, trunc)
    } else {
        aes_general(elem, two_j, two_m, rho, trunc)
    }
}

/// `exp(−(α₊/2α₋)a†² + (ρ/α₋)a†) T_eff |0; j, m⟩` with eigenvalue
/// `ρ + α₃ + m·b`.
pub fn aes_general(elem: &AlgebraElement, two_j: u32, two_m: i32, rho: C64, trunc: Truncation) -> Result<AesState> {
    check_two_m(two_j, two_m)?;
    check_bosonic(elem)?;
    let k = elem.su2();
    if k.is_degenerate() {
        return invalid("b = 0: use the degenerate construction");
    }
    let spin = su2_eigenvector(&k, two_j, two_m)?.coeffs;
    let c1 = rho / elem.alpha_minus;
    let c2 = -elem.alpha_plus / (elem.alpha_minus * 2.0);
    let state = settle(two_j, trunc, 1, |len| Ok(linalg::tensor(&linalg::gaussian_fock(c1, c2, len), &spin)))?;
    Ok(AesState { state, eigenvalue: rho + elem.alpha_3 + k.b * (two_m as f64 / 2.0) })
}

/// The `b = 0` solutions with eigenvalue `ρ + α₃`.
///
/// Each is the Gaussian times `Σ_k (−1)^k C(j−m,k) (2j−k)!/(2j)! (a†)^{j−m−k} X_k`,
/// where `X_k` is `(α₋J₋/β₋)^k|j,j⟩`, `(α₋J₊/β₊)^k|j,−j⟩`, or
/// `(α₋/β₊)^k J₊^k e^{ϑJ₊}|j,−j⟩` with `ϑ = β₃/(2β₊)`, according to which
/// coefficients vanish.
pub fn aes_degenerate(elem: &AlgebraElement, two_j: u32, two_m: i32, rho: C64, trunc: Truncation) -> Result<AesState> {
    check_two_m(two_j, two_m)?;
    check_bosonic(elem)?;
    let k = elem.su2();
    if !k.is_degenerate() {
        return invalid("b ≠ 0: use the general construction");
    }
    let d = two_j as usize + 1;
    let (jp, jm, _) = linalg::spin_matrices(two_j);
    let am = elem.alpha_minus;
    let (seed, step) = match k.case() {
        Su2Case::Diagonal => return invalid("β₊ = β₋ = β₃ = 0: the spin part is arbitrary"),
        Su2Case::DegenerateLadder if k.beta_plus.norm() == 0.0 || k.beta_plus.norm() < k.beta_minus.norm() * 1e-14 => {
            let mut top = CVector::zeros(d);
            top[d - 1] = c(1.0);
            (top, &jm * (am / k.beta_minus))
        }
        Su2Case::DegenerateLadder => {
            let mut bottom = CVector::zeros(d);
            bottom[0] = c(1.0);
            (bottom, &jp * (am / k.beta_plus))
        }
        Su2Case::DegenerateFull => {
            let t1 = k.beta_3 / (k.beta_plus * 2.0);
            let t2 = -k.beta_minus * 2.0 / k.beta_3;
            if (t1 - t2).norm() > 1e-10 * t1.norm().max(1.0) {
                return invalid(format!("ϑ is defined twice inconsistently: {t1} vs {t2}"));
            }
            let mut bottom = CVector::zeros(d);
            bottom[0] = c(1.0);
            let seed = linalg::expm(&(&jp * t1)) * bottom;
            (seed, &jp * (am / k.beta_plus))
        }
        _ => unreachable!("degenerate b with a non-degenerate case"),
    };
    let p = ((two_j as i32 - two_m) / 2) as u32;
    let mut terms = Vec::with_capacity(p as usize + 1);
    let mut x = seed;
    for kk in 0..=p {
        let sign = if kk % 2 == 0 { 1.0 } else { -1.0 };
        let coef = sign * binomial_f64(p, kk)? * factorial_ratio_f64(two_j - kk, two_j)?;
        terms.push(((p - kk) as usize, &x * c(coef)));
        x = &step * x;
    }
    let c1 = rho / am;
    let c2 = -elem.alpha_plus / (am * 2.0);
    let state = settle(two_j, trunc, p as usize + 1, |len| {
        let g = linalg::gaussian_fock(c1, c2, len);
        let mut v = CVector::zeros(len * d);
        for (pow, spin) in &terms {
            v += linalg::tensor(&linalg::raise(&g, *pow), spin);
        }
        Ok(v)
    })?;
    Ok(AesState { state, eigenvalue: rho + elem.alpha_3 })
}

/// `X = (μa + μ̄a† + τJ₊ + τ̄J₋)/√2` and `P = i(μ̄a† − μa + τ̄J₋ − τJ₊)/√2`.
pub fn super_xp_coeffs(mu: C64, tau: C64) -> (HermitianCoeffs, HermitianCoeffs) {
    let x = HermitianCoeffs { a1: mu * FRAC_1_SQRT_2, a2: 0.0, a3: tau * FRAC_1_SQRT_2, a4: 0.0 };
    let p = HermitianCoeffs { a1: -I * mu * FRAC_1_SQRT_2, a2: 0.0, a3: -I * tau * FRAC_1_SQRT_2, a4: 0.0 };
    (x, p)
}

pub fn super_xp(mu: C64, tau: C64, spec: SpaceSpec) -> Result<(LinearOperator, LinearOperator)> {
    if mu.norm() == 0.0 {
        return invalid("μ = 0 is excluded");
    }
    let (x, p) = super_xp_coeffs(mu, tau);
    Ok((x.element().operator(spec), p.element().operator(spec)))
}

/// Parameters of `(X + iλP)|ψ⟩ = z|ψ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperXPSpec {
    pub mu: C64,
    pub tau: C64,
    pub param: MusParam,
    pub z: C64,
}

impl SuperXPSpec {
    pub fn new(mu: C64, tau: C64, param: MusParam, z: C64) -> Result<Self> {
        if mu.norm() == 0.0 {
            return invalid("μ = 0 is excluded");
        }
        Ok(SuperXPSpec { mu, tau, param, z })
    }

    pub fn element(&self) -> AlgebraElement {
        let (x, p) = super_xp_coeffs(self.mu, self.tau);
        element_from_ab(&x, &p, self.param.lambda)
    }
}

fn scs_check(spec: &SuperXPSpec) -> Result<()> {
    if (spec.param.lambda - 1.0).norm() > 1e-14 {
        return invalid("the supercoherent family needs λ = 1");
    }
    if spec.tau.norm() == 0.0 {
        return invalid("τ = 0 is the bosonic coherent state");
    }
    Ok(())
}

/// `Σ_k (−1)^k C(j−m,k) (2j−k)!/(2j)! D(ξ)(phase·a†)^{j−m−k}|0⟩ ⊗ step^k seed`
/// on `len` levels.
pub(crate) fn displaced_ladder(
    xi: C64,
    phase: C64,
    seed: &CVector,
    step: &CMatrix,
    two_j: u32,
    two_m: i32,
    len: usize,
) -> Result<CVector> {
    let d = two_j as usize + 1;
    let mut coh = CVector::zeros(len);
    coh[0] = c((-0.5 * xi.norm_sqr()).exp());
    for n in 1..len {
        coh[n] = coh[n - 1] * xi / (n as f64).sqrt();
    }
    let p = ((two_j as i32 - two_m) / 2) as u32;
    // D(ξ)(a†)^q|0⟩ = (a† − ξ̄)^q D(ξ)|0⟩.
    let mut shifted = vec![coh];
    for q in 1..=p as usize {
        let prev = &shifted[q - 1];
        shifted.push((linalg::raise(prev, 1) - prev * xi.conj()) * phase);
    }
    let mut x = seed.clone();
    let mut v = CVector::zeros(len * d);
    for kk in 0..=p {
        let sign = if kk % 2 == 0 { 1.0 } else { -1.0 };
        let coef = sign * binomial_f64(p, kk)? * factorial_ratio_f64(two_j - kk, two_j)?;
        v += linalg::tensor(&shifted[(p - kk) as usize], &(&x * c(coef)));
        x = step * x;
    }
    Ok(v)
}

/// Unnormalized supercoherent vector on `len` levels: the ladder sum for
/// `a + (τ/μ)J₊` with `ξ = z/(μ√2)`.
fn scs_vector(spec: &SuperXPSpec, two_j: u32, two_m: i32, len: usize) -> Result<CVector> {
    let d = two_j as usize + 1;
    let (_, jm, _) = linalg::spin_matrices(two_j);
    let mut top = CVector::zeros(d);
    top[d - 1] = c(1.0);
    let xi = spec.z / (spec.mu * SQRT_2);
    displaced_ladder(xi, c(1.0), &top, &(jm * (spec.mu / spec.tau)), two_j, two_m, len)
}

/// Supercoherent state (`λ = 1`) with label `m`.
pub fn scs_lambda1(spec: &SuperXPSpec, two_j: u32, two_m: i32, trunc: Truncation) -> Result<JointState> {
    check_two_m(two_j, two_m)?;
    scs_check(spec)?;
    let p = ((two_j as i32 - two_m) / 2) as usize;
    settle(two_j, trunc, p + 1, |len| scs_vector(spec, two_j, two_m, len))
}

/// `C^j_m(μ, τ) = (j−m)! Σ_k C(j−m,k) (2j−k)!/(2j)! (|μ|²/|τ|²)^k`, the squared
/// norm of the unnormalized supercoherent state.
pub fn scs_norm(two_j: u32, two_m: i32, mu: C64, tau: C64) -> Result<f64> {
    check_two_m(two_j, two_m)?;
    let p = ((two_j as i32 - two_m) / 2) as u32;
    let r = mu.norm_sqr() / tau.norm_sqr();
    let mut s = 0.0;
    for kk in 0..=p {
        s += binomial_f64(p, kk)? * factorial_ratio_f64(two_j - kk, two_j)? * r.powi(kk as i32);
    }
    Ok(factorial_ratio_f64(p, 0)? * s)
}

/// `⟨C⟩ = |μ|² + 2|τ|²(j + |τ|² ∂ ln C^j_m / ∂|τ|²)` in the supercoherent state.
pub fn c_mean_lambda1(two_j: u32, two_m: i32, mu: C64, tau: C64) -> Result<f64> {
    check_two_m(two_j, two_m)?;
    if tau.norm() == 0.0 {
        return invalid("τ = 0 is the bosonic coherent state");
    }
    let p = ((two_j as i32 - two_m) / 2) as u32;
    let r = mu.norm_sqr() / tau.norm_sqr();
    let (mut s, mut sk) = (0.0, 0.0);
    for kk in 0..=p {
        let t = binomial_f64(p, kk)? * factorial_ratio_f64(two_j - kk, two_j)? * r.powi(kk as i32);
        s += t;
        sk += kk as f64 * t;
    }
    // |τ|² ∂/∂|τ|² of ln Σ c_k (|μ|²/|τ|²)^k is −Σ k c_k r^k / Σ c_k r^k.
    Ok(mu.norm_sqr() + 2.0 * tau.norm_sqr() * (two_j as f64 / 2.0 - sk / s))
}

fn xp_check(spec: &SuperXPSpec) -> Result<()> {
    let d = spec.param.delta;
    if d == 0.0 {
        return invalid("δ = 0 is the supercoherent family");
    }
    if d >= 1.0 {
        return invalid(format!("δ = {d} ≥ 1 gives a non-normalizable state"));
    }
    if spec.tau.norm() == 0.0 {
        return invalid("τ = 0 reduces to the oscillator states");
    }
    Ok(())
}

/// `S(χ(δ, φ−2φ_μ)) D(η_m) exp(−τδ^{−½}e^{−iφ/2}/|τ| J₊) exp(τ̄δ^{½}e^{iφ/2}/(2|τ|) J₋) |0; j, m⟩`
/// with `η_m = (z(1+δe^{iφ})/√2 − 2m|τ|δ^{½}e^{iφ/2}) / (μ√(1−δ²))`.
pub fn general_squeezed_xp(spec: &SuperXPSpec, two_j: u32, two_m: i32, trunc: Truncation) -> Result<AesState> {
    check_two_m(two_j, two_m)?;
    xp_check(spec)?;
    let (d, phi) = (spec.param.delta, spec.param.phi);
    let m = two_m as f64 / 2.0;
    let tn = spec.tau.norm();
    let half = C64::from_polar(1.0, phi / 2.0);
    let (jp, jm, _) = linalg::spin_matrices(two_j);
    let up = linalg::expm(&(&jp * (-spec.tau / tn / d.sqrt() * half.conj())));
    let down = linalg::expm(&(&jm * (spec.tau.conj() * d.sqrt() * half / (2.0 * tn))));
    let mut e = CVector::zeros(two_j as usize + 1);
    e[((two_m + two_j as i32) / 2) as usize] = c(1.0);
    let spin = up * (down * e);
    let eta = (spec.z * (spec.param.w() + 1.0) / SQRT_2 - half * (2.0 * m * tn * d.sqrt()))
        / (spec.mu * (1.0 - d * d).sqrt());
    let chi = C64::from_polar(-d.atanh(), wrap_pi(phi - 2.0 * spec.mu.arg()));
    let state = settle(two_j, trunc, 1, |len| {
        let n = 2 * len + 40;
        let mut vac = CVector::zeros(n);
        vac[0] = c(1.0);
        let boson = linalg::squeeze_displace_apply(chi, eta, &vac);
        Ok(linalg::tensor(&boson.rows(0, len).into_owned(), &spin))
    })?;
    Ok(AesState { state, eigenvalue: spec.z })
}

fn wrap_pi(x: f64) -> f64 {
    let w = (x + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
    if w >= std::f64::consts::PI {
        w - 2.0 * std::f64::consts::PI
    } else {
        w
    }
}

/// `⟨C⟩ = |μ|² + 2|τ|² (1−δ)/(1+δ) (j − 4(j+|m|)δ/(1+δ)² Ω)` with the Jacobi
/// ratio `Ω`, zero for `m = ±j`.
pub fn xp_c_mean(two_j: u32, two_m: i32, mu: C64, tau: C64, delta: f64) -> Result<f64> {
    check_two_m(two_j, two_m)?;
    let j = two_j as f64 / 2.0;
    let am = two_m.unsigned_abs() as f64 / 2.0;
    let n = ((two_j - two_m.unsigned_abs()) / 2) as i64;
    let x = 1.0 - 8.0 * delta / (1.0 + delta).powi(2);
    let omega = if n == 0 {
        0.0
    } else {
        jacobi_p_real(n - 1, -2.0 * j, 1.0, x)? / jacobi_p_real(n, -2.0 * j - 1.0, 0.0, x)?
    };
    let spin = j - 4.0 * (j + am) * delta / (1.0 + delta).powi(2) * omega;
    Ok(mu.norm_sqr() + 2.0 * tau.norm_sqr() * (1.0 - delta) / (1.0 + delta) * spin)
}

/// Closed-form `(ΔX)², (ΔP)², Δ, ⟨F⟩` together with `⟨C⟩`.
pub fn xp_dispersions(spec: &SuperXPSpec, two_j: u32, two_m: i32) -> Result<(MusDispersions, f64)> {
    xp_check(spec)?;
    let mc = xp_c_mean(two_j, two_m, spec.mu, spec.tau, spec.param.delta)?;
    Ok((dispersions_from_c(&spec.param, mc, None)?, mc))
}

/// The spin-½ expressions for `(ΔX)², (ΔP)², Δ`.
pub fn xp_dispersions_spin_half(param: &MusParam, mu: C64, tau: C64) -> (f64, f64, f64) {
    let (d, phi) = (param.delta, param.phi);
    let k = mu.norm_sqr() + tau.norm_sqr() * (1.0 - d) / (1.0 + d);
    let den = 2.0 * (1.0 - d * d);
    (
        (1.0 - 2.0 * d * phi.cos() + d * d) / den * k,
        (1.0 + 2.0 * d * phi.cos() + d * d) / den * k,
        ((1.0 - d * d).powi(2) + 4.0 * d * d * phi.sin().powi(2)).sqrt() / den * k,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_ops, expectation, srur_report};
    use std::f64::consts::PI;

    fn herm(a1: C64, a2: f64, a3: C64, a4: f64) -> HermitianCoeffs {
        HermitianCoeffs { a1, a2, a3, a4 }
    }

    #[test]
    fn commutator_formula_matches_dense() {
        let spec = SpaceSpec::new(12, 3).unwrap();
        let a = herm(C64::new(0.3, -0.7), 0.4, C64::new(1.1, 0.2), -0.6);
        let b = herm(C64::new(-0.5, 0.1), -1.3, C64::new(0.2, 0.9), 0.8);
        let ao = a.element().operator(spec);
        let bo = b.element().operator(spec);
        let dense = ao.commutator(&bo).scale(-I);
        let formula = commutator_c(&a, &b, spec);
        // The truncated [a, a†] differs from I on the top level only.
        let d = spec.spin_dim();
        let keep = (spec.fock_dim - 1) * d;
        let diff = (dense.matrix.view((0, 0), (keep, keep)) - formula.matrix.view((0, 0), (keep, keep)))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12, "{diff}");
    }

    #[test]
    fn xp_commutator_is_diagonal() {
        let (mu, tau) = (C64::new(0.8, 0.3), C64::new(-0.4, 1.2));
        let (x, p) = super_xp_coeffs(mu, tau);
        let spec = SpaceSpec::new(4, 2).unwrap();
        let cm = commutator_c(&x, &p, spec);
        let ops = build_ops(spec);
        let want = &ops.identity.scale(c(mu.norm_sqr())) + &ops.j3.scale(c(2.0 * tau.norm_sqr()));
        assert!(linalg::max_abs_diff(&cm.matrix, &want.matrix) < 1e-14);
        assert!(commutator_c(&x, &x, spec).matrix.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn xp_with_zero_tau_is_x_and_p() {
        let spec = SpaceSpec::new(6, 1).unwrap();
        let (x, p) = super_xp(c(1.0), c(0.0), spec).unwrap();
        let ops = build_ops(spec);
        assert!(linalg::max_abs_diff(&x.matrix, &ops.x().matrix) < 1e-15);
        assert!(linalg::max_abs_diff(&p.matrix, &ops.p().matrix) < 1e-15);
        assert!(x.hermitian_deviation() < 1e-15 && p.hermitian_deviation() < 1e-15);
    }

    #[test]
    fn x_plus_i_lambda_p_coefficients() {
        let (x, p) = super_xp_coeffs(c(1.0), c(0.0));
        let l = C64::new(0.3, 0.2);
        let e = element_from_ab(&x, &p, l);
        assert!((e.alpha_minus - (l + 1.0) * FRAC_1_SQRT_2).norm() < 1e-15);
        assert!((e.alpha_plus - (c(1.0) - l) * FRAC_1_SQRT_2).norm() < 1e-15);
        assert!(x.element().is_hermitian(1e-15) && !e.is_hermitian(1e-3));
    }

    #[test]
    fn apply_matches_dense_operator() {
        let e = AlgebraElement::new(
            C64::new(0.3, 0.1),
            C64::new(-0.2, 0.5),
            C64::new(0.7, 0.0),
            C64::new(1.0, -1.0),
            C64::new(0.4, 0.4),
            C64::new(-0.3, 0.2),
        );
        let spec = SpaceSpec::new(7, 3).unwrap();
        let v = CVector::from_fn(spec.dim(), |i, _| C64::new((i as f64).sin(), (i as f64 * 0.3).cos()));
        let dense = e.operator(spec).apply(&v);
        assert!((dense - e.apply(spec, &v)).norm() < 1e-13);
    }

    #[test]
    fn plain_annihilation_gives_coherent_state() {
        let e = AlgebraElement::new(c(1.0), c(0.0), c(0.0), c(0.0), c(0.0), c(1.0));
        let eta = C64::new(0.6, -0.2);
        let s = aes_general(&e, 0, 0, eta, Truncation::auto()).unwrap();
        assert!((s.eigenvalue - eta).norm() < 1e-15);
        let want = (-0.5 * eta.norm_sqr()).exp();
        assert!((s.state.coeffs[0] - want).norm() < 1e-14);
    }

    #[test]
    fn general_aes_residuals() {
        let elems = [
            AlgebraElement::new(
                C64::new(1.0, 0.2),
                C64::new(0.3, -0.1),
                C64::new(0.1, 0.1),
                C64::new(0.5, 0.5),
                C64::new(-0.3, 0.8),
                C64::new(0.2, -0.6),
            ),
            // β₊ = 0: upper-triangular spin part.
            AlgebraElement::new(c(1.0), c(0.2), c(0.0), C64::new(0.4, 0.1), c(0.0), C64::new(-0.9, 0.3)),
        ];
        for e in &elems {
            for two_j in 1..=3u32 {
                for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                    let s = aes_general(e, two_j, tm, C64::new(0.3, -0.2), Truncation::auto()).unwrap();
                    let r = e.residual(&s.state, s.eigenvalue);
                    assert!(r < 1e-8, "{r}");
                }
            }
        }
    }

    #[test]
    fn rejects_invalid_bosonic_parts() {
        let e = AlgebraElement::new(c(0.0), c(1.0), c(0.0), c(1.0), c(1.0), c(0.0));
        assert!(matches!(aes_state(&e, 1, 1, c(0.0), Truncation::auto()), Err(Error::NoSolution(_))));
        let e = AlgebraElement::new(c(1.0), c(1.2), c(0.0), c(1.0), c(1.0), c(0.0));
        assert!(aes_state(&e, 1, 1, c(0.0), Truncation::auto()).is_err());
    }

    fn degenerate_elems() -> Vec<AlgebraElement> {
        let (bp, bm) = (C64::new(0.4, 0.3), C64::new(-0.2, 0.9));
        vec![
            AlgebraElement::new(C64::new(1.0, 0.3), C64::new(0.2, 0.1), c(0.2), C64::new(0.7, -0.4), c(0.0), c(0.0)),
            AlgebraElement::new(C64::new(0.8, -0.3), c(0.1), c(0.0), c(0.0), C64::new(0.5, 0.6), c(0.0)),
            AlgebraElement::new(c(1.0), C64::new(0.0, 0.3), c(0.0), bm, bp, (-(bp * bm) * 4.0).sqrt()),
        ]
    }

    #[test]
    fn degenerate_branches_are_eigenstates_and_independent() {
        for e in degenerate_elems() {
            for two_j in 1..=4u32 {
                let rho = C64::new(0.25, 0.4);
                let mut cols = Vec::new();
                for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                    let s = aes_degenerate(&e, two_j, tm, rho, Truncation::auto()).unwrap();
                    assert!((s.eigenvalue - rho - e.alpha_3).norm() < 1e-15);
                    let r = e.residual(&s.state, s.eigenvalue);
                    assert!(r < 1e-8, "2j={two_j} 2m={tm}: {r}");
                    cols.push(s.state);
                }
                let n = cols.iter().map(|s| s.spec.fock_dim).max().unwrap();
                let m = nalgebra::DMatrix::from_fn(n * (two_j as usize + 1), cols.len(), |r, k| {
                    cols[k].resized(n).coeffs[r]
                });
                let sv = m.singular_values();
                assert!(sv.min() > 1e-6 * sv.max(), "2j={two_j}: {sv}");
            }
        }
    }

    #[test]
    fn aragone_zypman_pair() {
        // √2(a + σ₊) at z = 0: |0,+⟩ and (a†|0,+⟩ − |0,−⟩)/√2.
        let e = AlgebraElement::new(c(SQRT_2), c(0.0), c(0.0), c(SQRT_2), c(0.0), c(0.0));
        let up = aes_degenerate(&e, 1, 1, c(0.0), Truncation::auto()).unwrap().state;
        assert!((up.amplitude(0, 1) - 1.0).norm() < 1e-15);
        let dn = aes_degenerate(&e, 1, -1, c(0.0), Truncation::auto()).unwrap().state;
        let r = FRAC_1_SQRT_2;
        assert!((dn.amplitude(1, 1) + r).norm() < 1e-15 && (dn.amplitude(0, -1) - r).norm() < 1e-15);
    }

    fn xp_spec(mu: C64, tau: C64, delta: f64, phi: f64, z: C64) -> SuperXPSpec {
        SuperXPSpec::new(mu, tau, MusParam::from_delta_phi(delta, phi).unwrap(), z).unwrap()
    }

    #[test]
    fn supercoherent_spin_half() {
        let (mu, tau) = (C64::new(0.9, 0.4), C64::new(0.5, -0.7));
        let z = C64::new(0.3, 0.8);
        let sp = xp_spec(mu, tau, 0.0, 0.0, z);
        let plus = scs_lambda1(&sp, 1, 1, Truncation::auto()).unwrap();
        let minus = scs_lambda1(&sp, 1, -1, Truncation::auto()).unwrap();
        assert!(plus.overlap(&minus).unwrap().norm() < 1e-12);
        let e = sp.element();
        for s in [&plus, &minus] {
            assert!(e.residual(s, z) < 1e-10);
        }
        let (mu2, tau2) = (mu.norm_sqr(), tau.norm_sqr());
        assert!((c_mean_lambda1(1, 1, mu, tau).unwrap() - (mu2 + tau2)).abs() < 1e-14);
        let want = mu2 + tau2 - 2.0 * mu2 * tau2 / (mu2 + tau2);
        assert!((c_mean_lambda1(1, -1, mu, tau).unwrap() - want).abs() < 1e-14);
        let ops = build_ops(minus.spec);
        let cm = &ops.identity.scale(c(mu2)) + &ops.j3.scale(c(2.0 * tau2));
        assert!((expectation(&cm, &minus).unwrap().re - want).abs() < 1e-10);
    }

    #[test]
    fn supercoherent_z_zero_matches_closed_pair() {
        let sp = xp_spec(c(1.0), c(1.0), 0.0, 0.0, c(0.0));
        let minus = scs_lambda1(&sp, 1, -1, Truncation::auto()).unwrap();
        let r = FRAC_1_SQRT_2;
        assert!((minus.amplitude(1, 1) + r).norm() < 1e-15 && (minus.amplitude(0, -1) - r).norm() < 1e-15);
    }

    #[test]
    fn supercoherent_norm_closed_form() {
        let (mu, tau) = (C64::new(1.3, 0.2), C64::new(0.6, 0.6));
        let sp = xp_spec(mu, tau, 0.0, 0.0, C64::new(0.7, 0.0));
        for two_j in 1..=4u32 {
            for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                let v = scs_vector(&sp, two_j, tm, 120).unwrap();
                let cf = scs_norm(two_j, tm, mu, tau).unwrap();
                assert!((v.norm_squared() - cf).abs() < 1e-10 * cf, "2j={two_j} 2m={tm}");
                let s = scs_lambda1(&sp, two_j, tm, Truncation::auto()).unwrap();
                let ops = build_ops(s.spec);
                let cm = &ops.identity.scale(c(mu.norm_sqr())) + &ops.j3.scale(c(2.0 * tau.norm_sqr()));
                let dense = expectation(&cm, &s).unwrap().re;
                assert!((dense - c_mean_lambda1(two_j, tm, mu, tau).unwrap()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn supercoherent_minimum() {
        let t2 = SQRT_2 - 1.0;
        let v = c_mean_lambda1(1, -1, c(1.0), c(t2.sqrt())).unwrap();
        assert!((v - 2.0 * (SQRT_2 - 1.0)).abs() < 1e-14);
        for &dt in &[-1e-3, 1e-3] {
            assert!(c_mean_lambda1(1, -1, c(1.0), c((t2 + dt).sqrt())).unwrap() > v);
        }
    }

    #[test]
    fn squeezed_xp_states() {
        let (mu, tau) = (C64::new(0.8, 0.5), C64::new(1.1, -0.4));
        for &(d, phi) in &[(0.5, PI / 6.0), (0.3, 2.0), (0.7, -1.0)] {
            let sp = xp_spec(mu, tau, d, phi, C64::new(0.4, 0.3));
            let e = sp.element();
            for two_j in 1..=4u32 {
                for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                    let s = general_squeezed_xp(&sp, two_j, tm, Truncation::auto()).unwrap();
                    let r = e.residual(&s.state, sp.z);
                    assert!(r < 1e-8, "δ={d} 2j={two_j} 2m={tm}: {r}");
                    let (x, p) = super_xp_coeffs(mu, tau);
                    let rep = element_report(&x, &p, &s.state);
                    let (cf, mc) = xp_dispersions(&sp, two_j, tm).unwrap();
                    assert!((rep.mean_c - mc).abs() < 1e-8, "⟨C⟩ {} vs {mc}", rep.mean_c);
                    assert!((rep.var_a - cf.var_a).abs() < 1e-8);
                    assert!((rep.var_b - cf.var_b).abs() < 1e-8);
                    assert!((rep.delta - cf.delta).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn element_report_matches_dense() {
        let (mu, tau) = (C64::new(0.8, 0.5), C64::new(1.1, -0.4));
        let sp = xp_spec(mu, tau, 0.3, 2.0, C64::new(0.4, 0.3));
        let s = general_squeezed_xp(&sp, 2, 0, Truncation::fixed(30)).unwrap();
        let (x, p) = super_xp_coeffs(mu, tau);
        let (xo, po) = super_xp(mu, tau, s.state.spec).unwrap();
        let dense = srur_report(&xo, &po, &s.state).unwrap();
        let fast = element_report(&x, &p, &s.state);
        for (u, v) in [(dense.var_a, fast.var_a), (dense.var_b, fast.var_b), (dense.mean_c, fast.mean_c), (dense.mean_f, fast.mean_f)] {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn squeezed_xp_extremal_label() {
        let (mu, tau) = (c(1.0), c(1.0));
        for two_j in 1..=4u32 {
            let v = xp_c_mean(two_j, two_j as i32, mu, tau, 0.5).unwrap();
            assert!((v - (1.0 + two_j as f64 / 3.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn squeezed_xp_spin_half_closed_form() {
        let (mu, tau) = (C64::new(0.6, 0.2), C64::new(0.9, 0.9));
        let sp = xp_spec(mu, tau, 0.4, 1.1, c(0.0));
        let (va, vb, dl) = xp_dispersions_spin_half(&sp.param, mu, tau);
        for tm in [-1, 1] {
            let (cf, _) = xp_dispersions(&sp, 1, tm).unwrap();
            assert!((cf.var_a - va).abs() < 1e-14 && (cf.var_b - vb).abs() < 1e-14 && (cf.delta - dl).abs() < 1e-14);
        }
    }

    #[test]
    fn squeezed_xp_rejects() {
        let sp = xp_spec(c(1.0), c(1.0), 0.0, 0.0, c(0.0));
        assert!(general_squeezed_xp(&sp, 1, 1, Truncation::auto()).is_err());
        assert!(SuperXPSpec::new(c(0.0), c(1.0), sp.param, c(0.0)).is_err());
    }
}
