//! Hamiltonians `H = wA†A` for elements `A` of h(1) ⊕ su(2) whose commutator
//! `[A, A†]` is `I`, `I + 2xJ₃`, or `I + γJ₊ + γ̄J₋`: eigenstates of `A`,
//! ladder states, energy statistics and the Jaynes–Cummings limit.

use crate::coupled::{displaced_ladder, AlgebraElement};
use crate::error::{invalid, Error, Result};
use crate::fock::{settle, JointState, LinearOperator, SpaceSpec, Truncation};
use crate::linalg::{self, CMatrix, CVector};
use crate::special::{binomial_f64, factorial_ratio_f64, jacobi_p_real};
use crate::{c, C64, I};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

fn check_w(w: f64) -> Result<()> {
    if !(w > 0.0) || !w.is_finite() {
        return invalid(format!("w = {w} must be positive"));
    }
    Ok(())
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return invalid(format!("{name} must be finite"));
    }
    Ok(())
}

/// `[A, A†]` restricted to the spin factor:
/// `(|α₋|²−|α₊|²)I + 2(|β₋|²−|β₊|²)J₃ + (β₃β̄₊ − β̄₃β₋)J₊ + (β̄₃β₊ − β₃β̄₋)J₋`.
pub fn adjoint_commutator(elem: &AlgebraElement, two_j: u32) -> CMatrix {
    let (jp, jm, j3) = linalg::spin_matrices(two_j);
    let (am, ap) = (elem.alpha_minus, elem.alpha_plus);
    let (bm, bp, b3) = (elem.beta_minus, elem.beta_plus, elem.beta_3);
    linalg::identity(two_j as usize + 1) * c(am.norm_sqr() - ap.norm_sqr())
        + j3 * c(2.0 * (bm.norm_sqr() - bp.norm_sqr()))
        + jp * (b3 * bp.conj() - b3.conj() * bm)
        + jm * (b3.conj() * bp - b3 * bm.conj())
}

/// `wA†A` on `spec`, compressed from `fock_dim + 1` levels so every entry is exact.
pub fn build_hamiltonian(elem: &AlgebraElement, w: f64, spec: SpaceSpec) -> Result<LinearOperator> {
    check_w(w)?;
    let big = SpaceSpec::new(spec.fock_dim + 1, spec.two_j)?;
    let a = elem.operator(big).matrix;
    let h = a.adjoint() * a * c(w);
    LinearOperator::new(spec, h.view((0, 0), (spec.dim(), spec.dim())).into_owned())
}

/// `Hψ` with the same exactness as [`build_hamiltonian`], without forming matrices.
pub fn hamiltonian_apply(elem: &AlgebraElement, w: f64, state: &JointState) -> CVector {
    let spec = state.spec;
    hamiltonian_image(elem, w, state).rows(0, spec.dim()).into_owned()
}

/// `Hψ` on `fock_dim + 3` levels, which holds the whole image.
fn hamiltonian_image(elem: &AlgebraElement, w: f64, state: &JointState) -> CVector {
    let spec = state.spec;
    let big = SpaceSpec { fock_dim: spec.fock_dim + 3, two_j: spec.two_j };
    let mut v = CVector::zeros(big.dim());
    v.rows_mut(0, spec.dim()).copy_from(&state.coeffs);
    let av = elem.apply(big, &v);
    elem.adjoint().apply(big, &av) * c(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyStats {
    /// `⟨H⟩` from the state.
    pub mean: f64,
    /// `⟨H²⟩ − ⟨H⟩²` from the state.
    pub var: f64,
    /// `w|z|²`.
    pub mean_closed: f64,
    /// `w²|z|²⟨[A, A†]⟩`.
    pub var_closed: f64,
}

/// Energy mean and variance of an eigenstate of `elem` with eigenvalue `z`.
pub fn energy_stats(elem: &AlgebraElement, z: C64, w: f64, state: &JointState) -> Result<EnergyStats> {
    check_w(w)?;
    let r = elem.residual(state, z);
    if r > 1e-8 {
        return invalid(format!("state is not an eigenstate of the element: residual {r:.3e}"));
    }
    let psi = &state.coeffs;
    let h = hamiltonian_image(elem, w, state);
    let mean = psi.dotc(&h.rows(0, psi.len())).re;
    let var = (h.norm_squared() - mean * mean).max(0.0);
    let cm = adjoint_commutator(elem, state.spec.two_j);
    let d = state.spec.spin_dim();
    let mut comm = c(0.0);
    for n in 0..state.spec.fock_dim {
        let s = psi.rows(n * d, d);
        comm += s.dotc(&(&cm * s));
    }
    let z2 = z.norm_sqr();
    Ok(EnergyStats { mean, var, mean_closed: w * z2, var_closed: w * w * z2 * comm.re })
}

/// Eigenvalues of a hermitian operator, ascending.
pub fn hermitian_spectrum(op: &LinearOperator) -> Result<Vec<f64>> {
    let dev = op.hermitian_deviation();
    if dev > 1e-10 {
        return Err(Error::NonHermitian(dev));
    }
    let e = nalgebra::SymmetricEigen::new(op.matrix.clone());
    let mut v: Vec<f64> = e.eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Builds `S(χ)D(η)ψ₀` where `ψ₀(n)` is the joint vector on `n` levels; each
/// trial length `L` is computed on `2L + 40` levels and cut.
fn framed_state<F>(two_j: u32, trunc: Truncation, min_levels: usize, chi: C64, eta: C64, psi0: F) -> Result<JointState>
where
    F: Fn(usize) -> Result<CVector>,
{
    let d = two_j as usize + 1;
    settle(two_j, trunc, min_levels, |len| {
        let n = 2 * len + 40;
        let v = psi0(n)?;
        let mut out = CVector::zeros(len * d);
        for k in 0..d {
            let col = CVector::from_fn(n, |i, _| v[i * d + k]);
            let t = linalg::squeeze_displace_apply(chi, eta, &col);
            for i in 0..len {
                out[i * d + k] = t[i];
            }
        }
        Ok(out)
    })
}

/// `D(ξ)|0⟩` on `n` levels, with magnitudes taken in log space so large `|ξ|` does not underflow.
fn coherent(xi: C64, n: usize) -> CVector {
    let r = xi.norm();
    let mut out = CVector::zeros(n);
    if r == 0.0 {
        out[0] = c(1.0);
        return out;
    }
    let (lr, ph) = (r.ln(), xi.arg());
    let mut lf = 0.0;
    for k in 0..n {
        if k > 0 {
            lf += (k as f64).ln();
        }
        let l = -0.5 * r * r + k as f64 * lr - 0.5 * lf;
        out[k] = C64::from_polar(l.exp(), k as f64 * ph);
    }
    out
}

fn basis(two_j: u32, two_m: i32) -> CVector {
    let mut e = CVector::zeros(two_j as usize + 1);
    e[((two_m + two_j as i32) / 2) as usize] = c(1.0);
    e
}

fn check_label(two_j: u32, two_m: i32) -> Result<()> {
    crate::fock::check_two_m(two_j, two_m)
}

/// Parameters of `A` with `[A, A†] = I`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalParams {
    pub alpha: f64,
    pub theta_minus: f64,
    pub theta_plus: f64,
    pub beta: f64,
    pub varphi_minus: f64,
    pub varphi_plus: f64,
    pub r: f64,
    /// Phase of `β₃` when `β = 0`.
    pub varphi_3: f64,
    pub alpha_3: C64,
    pub w: f64,
}

impl Default for CanonicalParams {
    fn default() -> Self {
        CanonicalParams {
            alpha: 0.0,
            theta_minus: 0.0,
            theta_plus: 0.0,
            beta: 0.0,
            varphi_minus: 0.0,
            varphi_plus: 0.0,
            r: 0.0,
            varphi_3: 0.0,
            alpha_3: c(0.0),
            w: 1.0,
        }
    }
}

impl CanonicalParams {
    pub fn validate(&self) -> Result<()> {
        check_w(self.w)?;
        for (n, x) in [
            ("α", self.alpha),
            ("θ₋", self.theta_minus),
            ("θ₊", self.theta_plus),
            ("φ₋", self.varphi_minus),
            ("φ₊", self.varphi_plus),
            ("φ₃", self.varphi_3),
        ] {
            check_finite(n, x)?;
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return invalid(format!("β = {} must be non-negative", self.beta));
        }
        if !(self.r >= 0.0) || !self.r.is_finite() {
            return invalid(format!("r = {} must be non-negative", self.r));
        }
        Ok(())
    }

    fn psi(&self) -> f64 {
        (self.varphi_plus + self.varphi_minus) / 2.0
    }

    pub fn element0(&self) -> AlgebraElement {
        let b3 = if self.beta != 0.0 {
            C64::from_polar(self.r, self.psi())
        } else {
            C64::from_polar(self.r, self.varphi_3)
        };
        AlgebraElement::new(
            C64::from_polar(1.0, self.theta_minus),
            c(0.0),
            c(0.0),
            C64::from_polar(self.beta, self.varphi_minus),
            C64::from_polar(self.beta, self.varphi_plus),
            b3,
        )
    }

    pub fn element(&self) -> AlgebraElement {
        let mut e = self.element0();
        e.alpha_minus = C64::from_polar(self.alpha.cosh(), self.theta_minus);
        e.alpha_plus = C64::from_polar(self.alpha.sinh(), self.theta_plus);
        e.alpha_3 = self.alpha_3;
        e
    }

    /// `√(4β² + r²) e^{i(φ₊+φ₋)/2}`, or `r e^{iφ₃}` when `β = 0`.
    pub fn b(&self) -> C64 {
        if self.beta != 0.0 {
            C64::from_polar((4.0 * self.beta * self.beta + self.r * self.r).sqrt(), self.psi())
        } else {
            C64::from_polar(self.r, self.varphi_3)
        }
    }

    /// Squeeze parameter `Λ = −α e^{i(θ₊−θ₋)}`.
    pub fn squeeze(&self) -> C64 {
        C64::from_polar(-self.alpha, self.theta_plus - self.theta_minus)
    }

    /// `θ̃/2 = tan⁻¹√(1 − r(√(4β²+r²) − r)/(2β²))`.
    pub fn half_theta_tilde(&self) -> f64 {
        let (b, r) = (self.beta, self.r);
        let big = (4.0 * b * b + r * r).sqrt();
        (1.0 - r * (big - r) / (2.0 * b * b)).max(0.0).sqrt().atan()
    }

    /// `T = exp(−(θ̃/2)[e^{−i(φ₊−φ₋)/2}J₊ − e^{i(φ₊−φ₋)/2}J₋])`, or `I` when `β = 0`.
    pub fn t_matrix(&self, two_j: u32) -> CMatrix {
        if self.beta == 0.0 {
            return linalg::identity(two_j as usize + 1);
        }
        let (jp, jm, _) = linalg::spin_matrices(two_j);
        let d = C64::from_polar(1.0, (self.varphi_plus - self.varphi_minus) / 2.0);
        linalg::expm(&((jp * d.conj() - jm * d) * c(-self.half_theta_tilde())))
    }
}

/// `S(Λ) D((z − α₃ − m b)e^{−iθ₋}) |0⟩ ⊗ T|j, m⟩`, eigenvalue `z`.
pub fn canonical_eigenstates(p: &CanonicalParams, two_j: u32, two_m: i32, z: C64, trunc: Truncation) -> Result<JointState> {
    p.validate()?;
    check_label(two_j, two_m)?;
    let m = two_m as f64 / 2.0;
    let xi = (z - p.alpha_3 - p.b() * m) * C64::from_polar(1.0, -p.theta_minus);
    let spin = p.t_matrix(two_j) * basis(two_j, two_m);
    framed_state(two_j, trunc, 1, p.squeeze(), c(0.0), |n| Ok(linalg::tensor(&coherent(xi, n), &spin)))
}

/// `U^m_n |n; j, m⟩` with `U^m_n = e^{−inθ₋} S(Λ) D(−(α₃ + m b)e^{−iθ₋}) T`, an
/// eigenstate of `H` with energy `n w`.
pub fn ladder_state(p: &CanonicalParams, two_j: u32, two_m: i32, n: usize, trunc: Truncation) -> Result<JointState> {
    p.validate()?;
    check_label(two_j, two_m)?;
    let m = two_m as f64 / 2.0;
    let eta = -(p.alpha_3 + p.b() * m) * C64::from_polar(1.0, -p.theta_minus);
    let spin = p.t_matrix(two_j) * basis(two_j, two_m) * C64::from_polar(1.0, -(n as f64) * p.theta_minus);
    framed_state(two_j, trunc, n + 1, p.squeeze(), eta, |len| {
        let mut fock = CVector::zeros(len);
        fock[n] = c(1.0);
        Ok(linalg::tensor(&fock, &spin))
    })
}

/// `𝒮(χ)𝒟(z)|0̃⟩^j_m` with `𝒟(z) = exp(z𝒜† − z̄𝒜)` and `𝒮(χ) = exp(χ𝒜†²/2 − χ̄𝒜²/2)`.
pub fn supersqueezed_state(p: &CanonicalParams, two_j: u32, two_m: i32, z: C64, chi: C64, trunc: Truncation) -> Result<JointState> {
    p.validate()?;
    check_label(two_j, two_m)?;
    let a = p.element();
    let ad = a.adjoint();
    let m = two_m as f64 / 2.0;
    let xi = (-p.alpha_3 - p.b() * m) * C64::from_polar(1.0, -p.theta_minus);
    let spin = p.t_matrix(two_j) * basis(two_j, two_m);
    let d = two_j as usize + 1;
    let scale = a.alpha_minus.norm() + a.alpha_plus.norm();
    let spin_scale = a.alpha_3.norm() + (two_j as f64) * (a.beta_minus.norm() + a.beta_plus.norm() + a.beta_3.norm());
    settle(two_j, trunc, 1, |len| {
        let n = 2 * len + 40;
        let big = SpaceSpec { fock_dim: n, two_j };
        let mut v = CVector::zeros(n * d);
        for k in 0..d {
            let col = linalg::squeeze_displace_apply(p.squeeze(), xi, &{
                let mut e = CVector::zeros(n);
                e[0] = c(1.0);
                e
            });
            for i in 0..n {
                v[i * d + k] = col[i] * spin[k];
            }
        }
        let bound = scale * (n as f64).sqrt() + spin_scale;
        let disp = |x: &CVector| ad.apply(big, x) * z - a.apply(big, x) * z.conj();
        v = linalg::expm_apply_op(disp, 2.0 * z.norm() * bound, &v);
        if chi != c(0.0) {
            let sq = |x: &CVector| {
                let a1 = ad.apply(big, &ad.apply(big, x)) * (chi * 0.5);
                a1 - a.apply(big, &a.apply(big, x)) * (chi.conj() * 0.5)
            };
            v = linalg::expm_apply_op(sq, chi.norm() * bound * bound, &v);
        }
        Ok(v.rows(0, len * d).into_owned())
    })
}

/// Parameters of `A` with `[A, A†] = I + 2xJ₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XCaseParams {
    pub x: f64,
    pub beta: f64,
    pub alpha: f64,
    pub theta_minus: f64,
    pub theta_plus: f64,
    pub varphi_minus: f64,
    pub varphi_plus: f64,
    pub alpha_3: C64,
    pub w: f64,
}

impl XCaseParams {
    /// Zero phases, no squeezing or shift, `w = 1`.
    pub fn simple(x: f64, beta: f64) -> Self {
        XCaseParams {
            x,
            beta,
            alpha: 0.0,
            theta_minus: 0.0,
            theta_plus: 0.0,
            varphi_minus: 0.0,
            varphi_plus: 0.0,
            alpha_3: c(0.0),
            w: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_w(self.w)?;
        if self.x == 0.0 {
            return invalid("x = 0 is the canonical case");
        }
        check_finite("x", self.x)?;
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return invalid(format!("β = {} must be non-negative", self.beta));
        }
        for (n, v) in [("α", self.alpha), ("θ₋", self.theta_minus), ("θ₊", self.theta_plus), ("φ₋", self.varphi_minus), ("φ₊", self.varphi_plus)] {
            check_finite(n, v)?;
        }
        Ok(())
    }

    fn psi(&self) -> f64 {
        (self.varphi_plus + self.varphi_minus) / 2.0
    }

    /// `(|β₋|, |β₊|)`: `√x(cosh β, sinh β)` for `x > 0`, `√|x|(sinh β, cosh β)` for `x < 0`.
    fn beta_moduli(&self) -> (f64, f64) {
        let s = self.x.abs().sqrt();
        if self.x > 0.0 {
            (s * self.beta.cosh(), s * self.beta.sinh())
        } else {
            (s * self.beta.sinh(), s * self.beta.cosh())
        }
    }

    pub fn element0(&self) -> AlgebraElement {
        let (bm, bp) = self.beta_moduli();
        AlgebraElement::new(
            C64::from_polar(1.0, self.theta_minus),
            c(0.0),
            c(0.0),
            C64::from_polar(bm, self.varphi_minus),
            C64::from_polar(bp, self.varphi_plus),
            c(0.0),
        )
    }

    pub fn element(&self) -> AlgebraElement {
        let mut e = self.element0();
        e.alpha_minus = C64::from_polar(self.alpha.cosh(), self.theta_minus);
        e.alpha_plus = C64::from_polar(self.alpha.sinh(), self.theta_plus);
        e.alpha_3 = self.alpha_3;
        e
    }

    /// `|x|^{1/2} √(2 sinh 2β) e^{i(φ₊+φ₋)/2}`.
    pub fn b(&self) -> C64 {
        C64::from_polar(self.x.abs().sqrt() * (2.0 * (2.0 * self.beta).sinh()).sqrt(), self.psi())
    }

    fn squeeze(&self) -> C64 {
        C64::from_polar(-self.alpha, self.theta_plus - self.theta_minus)
    }

    fn shift(&self) -> C64 {
        -self.alpha_3 * C64::from_polar(1.0, -self.theta_minus)
    }
}

/// Eigenstates of the x-deformed element with eigenvalue `z`.
///
/// For `β > 0`: `S(Λ)D(−α₃e^{−iθ₋})D(η_m) exp(−(x/2|x|) ln(tanh β) J₃) U |0; j, m⟩`
/// with `U = exp(−(π/4)(e^{−i(φ₊−φ₋)/2}J₊ − e^{i(φ₊−φ₋)/2}J₋))` and
/// `η_m = (z − m b)e^{−iθ₋}`. For `β = 0`, the ladder sum built on
/// `|0; j, ±j⟩` (sign of `x`) with steps `J_∓ e^{−iφ_∓}/√|x|`, displaced by
/// `z e^{−iθ₋}`.
pub fn x_case_eigenstates(p: &XCaseParams, two_j: u32, two_m: i32, z: C64, trunc: Truncation) -> Result<JointState> {
    p.validate()?;
    check_label(two_j, two_m)?;
    let rot = C64::from_polar(1.0, -p.theta_minus);
    let (jp, jm, j3) = linalg::spin_matrices(two_j);
    if p.beta > 0.0 {
        let m = two_m as f64 / 2.0;
        let dphi = C64::from_polar(1.0, (p.varphi_plus - p.varphi_minus) / 2.0);
        let u = linalg::expm(&((jp * dphi.conj() - jm * dphi) * c(-FRAC_PI_4)));
        let e = linalg::expm(&(j3 * c(-p.x.signum() * 0.5 * p.beta.tanh().ln())));
        let spin = e * (u * basis(two_j, two_m));
        let xi = (z - p.b() * m) * rot;
        return framed_state(two_j, trunc, 1, p.squeeze(), p.shift(), |n| Ok(linalg::tensor(&coherent(xi, n), &spin)));
    }
    let s = p.x.abs().sqrt();
    let (seed, step) = if p.x > 0.0 {
        (basis(two_j, two_j as i32), jm * C64::from_polar(1.0 / s, -p.varphi_minus))
    } else {
        (basis(two_j, -(two_j as i32)), jp * C64::from_polar(1.0 / s, -p.varphi_plus))
    };
    let pdeg = ((two_j as i32 - two_m) / 2) as usize;
    framed_state(two_j, trunc, pdeg + 1, p.squeeze(), p.shift(), |n| {
        displaced_ladder(z * rot, rot, &seed, &step, two_j, two_m, n)
    })
}

/// `t ∂ ln C̃/∂t` for `C̃(t) = (j−m)! Σ_k C(j−m,k) (2j−k)!/(2j)! t^{−k}`.
fn log_derivative_c_tilde(two_j: u32, two_m: i32, t: f64) -> Result<f64> {
    let p = ((two_j as i32 - two_m) / 2) as u32;
    let (mut s, mut sk) = (0.0, 0.0);
    for k in 0..=p {
        let term = binomial_f64(p, k)? * factorial_ratio_f64(two_j - k, two_j)? * t.powi(-(k as i32));
        s += term;
        sk += k as f64 * term;
    }
    Ok(-sk / s)
}

/// `C̃^j_m(t) = (j−m)! Σ_k C(j−m,k) (2j−k)!/(2j)! t^{−k}`.
pub fn c_tilde(two_j: u32, two_m: i32, t: f64) -> Result<f64> {
    check_label(two_j, two_m)?;
    let p = ((two_j as i32 - two_m) / 2) as u32;
    let mut s = 0.0;
    for k in 0..=p {
        s += binomial_f64(p, k)? * factorial_ratio_f64(two_j - k, two_j)? * t.powi(-(k as i32));
    }
    Ok(factorial_ratio_f64(p, 0)? * s)
}

/// `⟨J₃⟩` in [`x_case_eigenstates`].
///
/// `β > 0`: `sgn(x){|m|e^{−2β} + (j+|m|+1)/(2 sinh 2β) · P^{(1, 1+2|m|)}_{j−|m|−1}(coth 2β) / P^{(0, 2|m|)}_{j−|m|}(coth 2β)}`.
/// `β = 0`: `sgn(x)[j + |x| ∂ ln C̃^j_m(|x|)/∂|x|]`.
pub fn x_case_j3_mean(p: &XCaseParams, two_j: u32, two_m: i32) -> Result<f64> {
    p.validate()?;
    check_label(two_j, two_m)?;
    let j = two_j as f64 / 2.0;
    if p.beta == 0.0 {
        return Ok(p.x.signum() * (j + log_derivative_c_tilde(two_j, two_m, p.x.abs())?));
    }
    let am = two_m.unsigned_abs() as f64 / 2.0;
    let n = ((two_j - two_m.unsigned_abs()) / 2) as i64;
    let b2 = 2.0 * p.beta;
    let mut v = am * (-b2).exp();
    if n > 0 {
        let x = 1.0 / b2.tanh();
        let ratio = jacobi_p_real(n - 1, 1.0, 1.0 + 2.0 * am, x)? / jacobi_p_real(n, 0.0, 2.0 * am, x)?;
        v += (j + am + 1.0) / (2.0 * b2.sinh()) * ratio;
    }
    Ok(p.x.signum() * v)
}

/// `(ΔH)² = w²|z|²(1 + 2x⟨J₃⟩)`.
pub fn x_case_dispersion(p: &XCaseParams, two_j: u32, two_m: i32, z: C64) -> Result<f64> {
    Ok(p.w * p.w * z.norm_sqr() * (1.0 + 2.0 * p.x * x_case_j3_mean(p, two_j, two_m)?))
}

/// Spin-½ `(ΔH₀)²±/(w²|z|²)` at `β = 0`: `(1 + |x|, 1 + |x|(|x|−1)/(|x|+1))`.
pub fn x_case_beta0_spin_half(x_abs: f64) -> (f64, f64) {
    (1.0 + x_abs, 1.0 + x_abs * (x_abs - 1.0) / (x_abs + 1.0))
}

/// Spin-½ `H₀` written out: `w{(a†a + ½) − xJ₃ + c_β[e^{i(φ₊−θ₋)}a†J₋ + h.c.]
/// + s_β[e^{i(φ₋−θ₋)}a†J₊ + h.c.] + (|x|cosh 2β − 1)/2}` with
/// `(c_β, s_β) = √|x|(cosh β, sinh β)` for `x < 0` and swapped for `x > 0`.
pub fn x_case_h0_spin_half(p: &XCaseParams, fock_dim: usize) -> Result<LinearOperator> {
    p.validate()?;
    let spec = SpaceSpec::new(fock_dim, 1)?;
    let a = linalg::annihilation(fock_dim);
    let ad = a.adjoint();
    let (jp, jm, j3) = linalg::spin_matrices(1);
    let ib = linalg::identity(fock_dim);
    let is = linalg::identity(2);
    let s = p.x.abs().sqrt();
    let (cb, sb) = if p.x < 0.0 { (s * p.beta.cosh(), s * p.beta.sinh()) } else { (s * p.beta.sinh(), s * p.beta.cosh()) };
    let e1 = C64::from_polar(1.0, p.varphi_plus - p.theta_minus);
    let e2 = C64::from_polar(1.0, p.varphi_minus - p.theta_minus);
    let number = linalg::kron(&(&ad * &a + &ib * c(0.5)), &is);
    let m = number - linalg::kron(&ib, &j3) * c(p.x)
        + (linalg::kron(&ad, &jm) * e1 + linalg::kron(&a, &jp) * e1.conj()) * c(cb)
        + (linalg::kron(&ad, &jp) * e2 + linalg::kron(&a, &jm) * e2.conj()) * c(sb)
        + linalg::identity(spec.dim()) * c((p.x.abs() * (2.0 * p.beta).cosh() - 1.0) / 2.0);
    LinearOperator::new(spec, m * c(p.w))
}

/// `w(a†a + ½) + w₀J₃ + √(ww₀)(a†J₋ + aJ₊) + ((w₀ − w)/2)I` on spin ½.
pub fn jaynes_cummings_limit(w: f64, w0: f64, fock_dim: usize) -> Result<LinearOperator> {
    check_w(w)?;
    if !(w0 >= 0.0) || !w0.is_finite() {
        return invalid(format!("w₀ = {w0} must be non-negative"));
    }
    let spec = SpaceSpec::new(fock_dim, 1)?;
    let a = linalg::annihilation(fock_dim);
    let ad = a.adjoint();
    let (jp, jm, j3) = linalg::spin_matrices(1);
    let ib = linalg::identity(fock_dim);
    let g = (w * w0).sqrt();
    let m = linalg::kron(&(&ad * &a * c(w) + &ib * c(0.5 * w)), &linalg::identity(2))
        + linalg::kron(&ib, &j3) * c(w0)
        + (linalg::kron(&ad, &jm) + linalg::kron(&a, &jp)) * c(g)
        + linalg::identity(spec.dim()) * c((w0 - w) / 2.0);
    LinearOperator::new(spec, m)
}

/// Parameters of `A` with `[A, A†] = I + γJ₊ + γ̄J₋`, `γ = ρe^{iν}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonCanonicalParams {
    pub rho: f64,
    pub nu: f64,
    pub beta: f64,
    pub theta: f64,
    pub alpha: f64,
    pub theta_minus: f64,
    pub theta_plus: f64,
    pub varphi_minus: f64,
    pub alpha_3: C64,
    pub w: f64,
}

impl NonCanonicalParams {
    /// Zero phases, no squeezing or shift, `w = 1`.
    pub fn simple(rho: f64, beta: f64, theta: f64) -> Self {
        NonCanonicalParams {
            rho,
            nu: 0.0,
            beta,
            theta,
            alpha: 0.0,
            theta_minus: 0.0,
            theta_plus: 0.0,
            varphi_minus: 0.0,
            alpha_3: c(0.0),
            w: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_w(self.w)?;
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return invalid(format!("ρ = {} must be positive", self.rho));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return invalid(format!("β = {} must be positive", self.beta));
        }
        if !(self.theta > -FRAC_PI_2 && self.theta < 1.5 * PI) {
            return invalid(format!("θ = {} must lie in (−π/2, 3π/2)", self.theta));
        }
        if self.theta.cos() >= 0.0 {
            return invalid(format!(
                "θ = {} has cos θ ≥ 0: the element then has [A, A†] = I − γJ₊ − γ̄J₋, so θ must lie in (π/2, 3π/2)",
                self.theta
            ));
        }
        for (n, v) in [("ν", self.nu), ("α", self.alpha), ("θ₋", self.theta_minus), ("θ₊", self.theta_plus), ("φ₋", self.varphi_minus)] {
            check_finite(n, v)?;
        }
        Ok(())
    }

    fn psi(&self) -> f64 {
        self.varphi_minus - self.nu
    }

    pub fn element0(&self) -> AlgebraElement {
        let e = C64::from_polar(1.0, self.psi());
        let ac = self.theta.cos().abs();
        AlgebraElement::new(
            C64::from_polar(1.0, self.theta_minus),
            c(0.0),
            c(0.0),
            e * C64::from_polar(self.beta, self.nu),
            -e * C64::from_polar(self.beta, -self.nu),
            e * C64::from_polar(self.rho / (2.0 * self.beta * ac), self.theta),
        )
    }

    pub fn element(&self) -> AlgebraElement {
        let mut e = self.element0();
        e.alpha_minus = C64::from_polar(self.alpha.cosh(), self.theta_minus);
        e.alpha_plus = C64::from_polar(self.alpha.sinh(), self.theta_plus);
        e.alpha_3 = self.alpha_3;
        e
    }

    /// `(P, Q)` with spin part `e^{i(φ₋−ν)}(P𝕁₊ − Q𝕁₋)`.
    pub fn pq(&self) -> (C64, C64) {
        let ac = self.theta.cos().abs();
        let r = C64::from_polar(self.rho, self.theta);
        let den = 4.0 * self.beta * ac;
        ((c(4.0 * self.beta * self.beta * ac) - r) / den, (c(4.0 * self.beta * self.beta * ac) + r) / den)
    }

    /// `b = 0` exactly when `β = √ρ/2` and `θ = π`.
    pub fn is_degenerate(&self) -> bool {
        (self.beta - self.rho.sqrt() / 2.0).abs() <= 1e-12 && (self.theta - PI).abs() <= 1e-12
    }

    /// `(Φ₋, Φ₊) = (i√(P/Q), (i/2)√(Q/P))`.
    pub fn phis(&self) -> (C64, C64) {
        let (p, q) = self.pq();
        (I * (p / q).sqrt(), I * 0.5 * (q / p).sqrt())
    }

    /// The eigenvalue step `b` with `A₀ e^{Φ₋𝕁₊}e^{Φ₊𝕁₋}|J,M⟩ = M b (…)`.
    pub fn b(&self) -> C64 {
        let (p, _) = self.pq();
        let (phi_m, _) = self.phis();
        -C64::from_polar(2.0, self.psi()) * p / phi_m
    }

    fn squeeze(&self) -> C64 {
        C64::from_polar(-self.alpha, self.theta_plus - self.theta_minus)
    }

    fn shift(&self) -> C64 {
        -self.alpha_3 * C64::from_polar(1.0, -self.theta_minus)
    }
}

/// `(𝕁₃, 𝕁₊, 𝕁₋)` with `𝕁₃ = (e^{iν}J₊ + e^{−iν}J₋)/2` and
/// `𝕁± = ±(e^{iν}J₊ − e^{−iν}J₋)/2 − J₃`.
pub fn rotated_spin(nu: f64, two_j: u32) -> (CMatrix, CMatrix, CMatrix) {
    let (jp, jm, j3) = linalg::spin_matrices(two_j);
    let e = C64::from_polar(1.0, nu);
    let s = (&jp * e + &jm * e.conj()) * c(0.5);
    let a = (&jp * e - &jm * e.conj()) * c(0.5);
    (s, &a - &j3, -a - j3)
}

/// Columns `|J, M⟩`, `M = −J..J`, of the rotated basis with the standard
/// `𝕁±` matrix elements.
pub fn rotated_basis(nu: f64, two_j: u32) -> Result<CMatrix> {
    let d = two_j as usize + 1;
    let (s3, sp, _) = rotated_spin(nu, two_j);
    let e = nalgebra::SymmetricEigen::new(s3);
    let low = (0..d).min_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b])).unwrap_or(0);
    if (e.eigenvalues[low] + two_j as f64 / 2.0).abs() > 1e-10 {
        return Err(Error::Numerical("rotated spin has an unexpected spectrum".into()));
    }
    let mut out = CMatrix::zeros(d, d);
    let mut v: CVector = e.eigenvectors.column(low).into_owned();
    let j = two_j as f64 / 2.0;
    for k in 0..d {
        out.set_column(k, &v);
        let m = k as f64 - j;
        if k + 1 < d {
            v = &sp * v / c(((j - m) * (j + m + 1.0)).sqrt());
        }
    }
    Ok(out)
}

/// Eigenstates of the non-canonical element with eigenvalue `z`.
///
/// For `b ≠ 0`: `S(Λ)D(−α₃e^{−iθ₋})D((z − M b)e^{−iθ₋}) e^{Φ₋𝕁₊}e^{Φ₊𝕁₋} |0; J, M⟩`.
/// For `b = 0`: the ladder sum on `|0; J, J⟩` with steps `𝕁₋e^{−i(φ₋−ν)}/√ρ`,
/// displaced by `z e^{−iθ₋}`.
pub fn noncanonical_eigenstates(p: &NonCanonicalParams, two_j: u32, two_m: i32, z: C64, trunc: Truncation) -> Result<JointState> {
    p.validate()?;
    check_label(two_j, two_m)?;
    let rot = C64::from_polar(1.0, -p.theta_minus);
    let v = rotated_basis(p.nu, two_j)?;
    let (_, sp, sm) = rotated_spin(p.nu, two_j);
    let col = |tm: i32| v.column(((tm + two_j as i32) / 2) as usize).into_owned();
    if p.is_degenerate() {
        let step = sm * C64::from_polar(1.0 / p.rho.sqrt(), -p.psi());
        let seed = col(two_j as i32);
        let pdeg = ((two_j as i32 - two_m) / 2) as usize;
        return framed_state(two_j, trunc, pdeg + 1, p.squeeze(), p.shift(), |n| {
            displaced_ladder(z * rot, rot, &seed, &step, two_j, two_m, n)
        });
    }
    let (phi_m, phi_p) = p.phis();
    let spin = linalg::expm(&(sp * phi_m)) * (linalg::expm(&(sm * phi_p)) * col(two_m));
    let xi = (z - p.b() * (two_m as f64 / 2.0)) * rot;
    framed_state(two_j, trunc, 1, p.squeeze(), p.shift(), |n| Ok(linalg::tensor(&coherent(xi, n), &spin)))
}

/// `⟨𝕁₃⟩` in [`noncanonical_eigenstates`]. Spin ½ uses
/// `½(|Φ₋|² − 1)/(|Φ₋|² + 1)`; `b = 0` uses `J + ρ ∂ ln C̃^J_M(ρ)/∂ρ`; other
/// spins evaluate the finite spin vector.
pub fn noncanonical_j3_mean(p: &NonCanonicalParams, two_j: u32, two_m: i32) -> Result<f64> {
    p.validate()?;
    check_label(two_j, two_m)?;
    if p.is_degenerate() {
        return Ok(two_j as f64 / 2.0 + log_derivative_c_tilde(two_j, two_m, p.rho)?);
    }
    let (phi_m, phi_p) = p.phis();
    if two_j == 1 {
        let f = phi_m.norm_sqr();
        return Ok(0.5 * (f - 1.0) / (f + 1.0));
    }
    let v = rotated_basis(p.nu, two_j)?;
    let (s3, sp, sm) = rotated_spin(p.nu, two_j);
    let e = v.column(((two_m + two_j as i32) / 2) as usize).into_owned();
    let s = linalg::expm(&(sp * phi_m)) * (linalg::expm(&(sm * phi_p)) * e);
    Ok((s.dotc(&(&s3 * &s)) / s.norm_squared()).re)
}

/// `(ΔH₀)² = w²|z|²(1 + 2ρ⟨𝕁₃⟩)`.
pub fn noncanonical_dispersion(p: &NonCanonicalParams, two_j: u32, two_m: i32, z: C64) -> Result<f64> {
    Ok(p.w * p.w * z.norm_sqr() * (1.0 + 2.0 * p.rho * noncanonical_j3_mean(p, two_j, two_m)?))
}

/// Spin-½ `(ΔH₀)²±/(w²|z|²) = 1 + ρ(X − R)/(X + R)` with
/// `X = 16β⁴cos²θ + ρ² − 8ρβ²cos θ|cos θ|` and
/// `R = √((16β⁴cos²θ − ρ²cos 2θ)² + ρ⁴sin²2θ)`.
pub fn noncanonical_dispersion_spin_half(rho: f64, beta: f64, theta: f64) -> f64 {
    let ct = theta.cos();
    let b4 = 16.0 * beta.powi(4) * ct * ct;
    let x = b4 + rho * rho - 8.0 * rho * beta * beta * ct * ct.abs();
    let r = ((b4 - rho * rho * (2.0 * theta).cos()).powi(2) + rho.powi(4) * (2.0 * theta).sin().powi(2)).sqrt();
    1.0 + rho * (x - r) / (x + r)
}
