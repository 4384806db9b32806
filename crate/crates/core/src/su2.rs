//! Algebra eigenstates of su(2): eigenvectors of `β₋J₊ + β₊J₋ + β₃J₃`,
//! the angular-momentum MUS of `J₁ + iλJ₂` and their dispersions.
//!
//! Spin-only states are returned as [`JointState`]s with one bosonic level.

use crate::error::{invalid, Error, Result};
use crate::fock::{check_two_m, JointState, LinearOperator, SpaceSpec};
use crate::linalg::{self, CMatrix, CVector};
use crate::mus::{MusDispersions, MusParam};
use crate::special::{binomial_f64, jacobi_p, jacobi_p_real};
use crate::{c, C64, I};
use serde::{Deserialize, Serialize};

/// Coefficients of `β₋J₊ + β₊J₋ + β₃J₃` and `b = √(4β₊β₋ + β₃²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2Coeffs {
    pub beta_minus: C64,
    pub beta_plus: C64,
    pub beta_3: C64,
    pub b: C64,
}

/// Which closed form diagonalizes the element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Su2Case {
    /// `β₊ ≠ 0, β₋ ≠ 0, b ≠ 0`.
    Generic,
    /// `β₊ = 0, β₃ ≠ 0`.
    UpperTriangular,
    /// `β₋ = 0, β₃ ≠ 0`.
    LowerTriangular,
    /// `β₊ = β₋ = 0`.
    Diagonal,
    /// `b = 0` with all three coefficients non-zero.
    DegenerateFull,
    /// `β₃ = 0` and exactly one of `β±` non-zero.
    DegenerateLadder,
}

impl Su2Coeffs {
    pub fn new(beta_minus: C64, beta_plus: C64, beta_3: C64) -> Self {
        let b = (beta_plus * beta_minus * 4.0 + beta_3 * beta_3).sqrt();
        Su2Coeffs { beta_minus, beta_plus, beta_3, b }
    }

    /// From `β₁J₁ + β₂J₂ + β₃J₃`.
    pub fn from_cartesian(b1: C64, b2: C64, b3: C64) -> Self {
        Self::new((b1 - I * b2) * 0.5, (b1 + I * b2) * 0.5, b3)
    }

    fn scale(&self) -> f64 {
        self.beta_minus.norm().max(self.beta_plus.norm()).max(self.beta_3.norm())
    }

    fn is_zero(&self, z: C64) -> bool {
        z.norm() <= 1e-14 * self.scale()
    }

    /// `b² = 0` relative to the coefficient scale.
    pub fn is_degenerate(&self) -> bool {
        self.b.norm_sqr() <= 1e-12 * self.scale().powi(2)
    }

    pub fn case(&self) -> Su2Case {
        let (zm, zp, z3) = (self.is_zero(self.beta_minus), self.is_zero(self.beta_plus), self.is_zero(self.beta_3));
        if zm && zp {
            Su2Case::Diagonal
        } else if z3 && (zm || zp) {
            Su2Case::DegenerateLadder
        } else if zp {
            Su2Case::UpperTriangular
        } else if zm {
            Su2Case::LowerTriangular
        } else if self.is_degenerate() {
            Su2Case::DegenerateFull
        } else {
            Su2Case::Generic
        }
    }

    /// Dense matrix of the element in the `|j, m⟩` basis.
    pub fn matrix(&self, two_j: u32) -> CMatrix {
        let (jp, jm, j3) = linalg::spin_matrices(two_j);
        jp * self.beta_minus + jm * self.beta_plus + j3 * self.beta_3
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Su2Spectrum {
    /// `m·b` for ascending `m`, or the single value 0 when `b = 0`.
    pub values: Vec<C64>,
    /// Multiplicity of each listed value.
    pub multiplicity: usize,
}

pub fn su2_eigenvalues(coeffs: &Su2Coeffs, two_j: u32) -> Su2Spectrum {
    let d = two_j as usize + 1;
    if coeffs.is_degenerate() {
        return Su2Spectrum { values: vec![c(0.0)], multiplicity: d };
    }
    let values = (0..d).map(|k| coeffs.b * ((2 * k) as f64 - two_j as f64) / 2.0).collect();
    Su2Spectrum { values, multiplicity: 1 }
}

fn reverse_columns(m: &CMatrix) -> CMatrix {
    let d = m.ncols();
    CMatrix::from_fn(m.nrows(), d, |r, k| m[(r, d - 1 - k)])
}

/// Disentangled operator whose column `m` is an eigenvector with
/// eigenvalue `m·b`.
///
/// In the triangular cases the principal `b` may equal `−β₃`; the columns
/// are then reversed so the labelling still reads `m·b`. For `b = 0` with
/// all coefficients non-zero only the column `m = −j` is an eigenvector.
pub fn su2_t_eff(coeffs: &Su2Coeffs, two_j: u32) -> Result<LinearOperator> {
    let (jp, jm, _) = linalg::spin_matrices(two_j);
    let d = two_j as usize + 1;
    let (bm, bp, b3, b) = (coeffs.beta_minus, coeffs.beta_plus, coeffs.beta_3, coeffs.b);
    let t = match coeffs.case() {
        Su2Case::Generic => {
            let up = linalg::expm(&(&jp * (-bm * 2.0 / (b + b3))));
            let down = linalg::expm(&(&jm * (bp / b)));
            up * down
        }
        Su2Case::UpperTriangular => {
            let t = linalg::expm(&(&jp * (-bm / b3)));
            if (b + b3).norm() < (b - b3).norm() { reverse_columns(&t) } else { t }
        }
        Su2Case::LowerTriangular => {
            let t = linalg::expm(&(&jm * (bp / b3)));
            if (b + b3).norm() < (b - b3).norm() { reverse_columns(&t) } else { t }
        }
        Su2Case::Diagonal => linalg::identity(d),
        Su2Case::DegenerateFull => linalg::expm(&(&jp * (-bm * 2.0 / b3))),
        Su2Case::DegenerateLadder => {
            return invalid("β₃ = 0 with a single ladder term: only the extremal pure state is an eigenvector");
        }
    };
    LinearOperator::new(SpaceSpec::new(1, two_j)?, t)
}

/// The labelled eigenvector `|j, m⟩_b` of the element.
///
/// When `b = 0` and the element is not zero there is a single eigenvector;
/// it is returned for its own label only (`−j`, or `+j` for a pure `β₋J₊`).
pub fn su2_eigenvector(coeffs: &Su2Coeffs, two_j: u32, two_m: i32) -> Result<JointState> {
    check_two_m(two_j, two_m)?;
    let spec = SpaceSpec::new(1, two_j)?;
    let tj = two_j as i32;
    let col = ((two_m + tj) / 2) as usize;
    let v = match coeffs.case() {
        Su2Case::DegenerateLadder => {
            let top = coeffs.is_zero(coeffs.beta_plus);
            let want = if top { tj } else { -tj };
            if two_m != want {
                return Err(Error::NoSolution(format!("b = 0: the only eigenvector is |j, {}⟩", want as f64 / 2.0)));
            }
            let mut v = CVector::zeros(two_j as usize + 1);
            v[if top { two_j as usize } else { 0 }] = c(1.0);
            v
        }
        Su2Case::DegenerateFull if two_m != -tj => {
            return Err(Error::NoSolution("b = 0: the only eigenvector carries the label m = −j".into()));
        }
        _ => su2_t_eff(coeffs, two_j)?.matrix.column(col).into_owned(),
    };
    JointState::from_vector(spec, v, 0.0)
}

/// Closed Jacobi-polynomial form of the eigenvector with eigenvalue `m·b`:
/// coefficient of `|j, u⟩` is
/// `√((j+u)!(j−u)!/(2j)!) (b/β₊)^{j+u} P^{(−u+m, −u−m)}_{j+u}(β₃/b)`.
pub fn su2_state_jacobi(coeffs: &Su2Coeffs, two_j: u32, two_m: i32) -> Result<JointState> {
    check_two_m(two_j, two_m)?;
    if coeffs.is_zero(coeffs.beta_plus) {
        return invalid("β₊ = 0: use the triangular form instead");
    }
    if coeffs.is_degenerate() {
        return invalid("b = 0 has no Jacobi form");
    }
    let d = two_j as usize + 1;
    let m = two_m as f64 / 2.0;
    let j = two_j as f64 / 2.0;
    let ratio = coeffs.b / coeffs.beta_plus;
    let x = coeffs.beta_3 / coeffs.b;
    let mut v = CVector::zeros(d);
    for k in 0..d {
        let u = k as f64 - j;
        let pref = 1.0 / binomial_f64(two_j, k as u32)?.sqrt();
        let p = jacobi_p(k as i64, -u + m, -u - m, x)?;
        v[k] = ratio.powu(k as u32) * p * pref;
    }
    JointState::from_vector(SpaceSpec::new(1, two_j)?, v, 0.0)
}

/// Eigenstate of `J₁ + iλJ₂` with eigenvalue `m√(1−λ²)` (principal root).
///
/// For `λ = 1` the only eigenstate is `|j, j⟩` with eigenvalue 0; it is
/// returned for `|m| = j`.
pub fn angular_mus(param: &MusParam, two_j: u32, two_m: i32) -> Result<(JointState, C64)> {
    check_two_m(two_j, two_m)?;
    let k = angular_coeffs(param);
    if param.delta == 0.0 || (param.lambda - 1.0).norm() < 1e-15 {
        if two_m.unsigned_abs() != two_j {
            return invalid("λ = 1 has the single eigenstate |j, j⟩");
        }
        let mut v = CVector::zeros(two_j as usize + 1);
        v[two_j as usize] = c(1.0);
        return Ok((JointState::from_vector(SpaceSpec::new(1, two_j)?, v, 0.0)?, c(0.0)));
    }
    let state = su2_eigenvector(&k, two_j, two_m)?;
    Ok((state, k.b * (two_m as f64 / 2.0)))
}

/// `J₁ + iλJ₂ = ½(1+λ)J₊ + ½(1−λ)J₋`.
pub fn angular_coeffs(param: &MusParam) -> Su2Coeffs {
    let l = param.lambda;
    Su2Coeffs::new((l + 1.0) * 0.5, (c(1.0) - l) * 0.5, c(0.0))
}

/// `exp(−½ ln δ · J₃) U |j, m⟩` with `U = exp(−π/4 (e^{−iφ/2}J₊ − e^{iφ/2}J₋))`,
/// normalized. Requires `δ > 0`.
pub fn angular_u_form(param: &MusParam, two_j: u32, two_m: i32) -> Result<JointState> {
    check_two_m(two_j, two_m)?;
    if param.delta <= 0.0 {
        return invalid("the rotated form needs δ > 0");
    }
    let (jp, jm, j3) = linalg::spin_matrices(two_j);
    let h = C64::from_polar(1.0, param.phi / 2.0);
    let u = linalg::expm(&((&jp * h.conj() - &jm * h) * c(-std::f64::consts::FRAC_PI_4)));
    let s = linalg::expm(&(j3 * c(-0.5 * param.delta.ln())));
    let mut e = CVector::zeros(two_j as usize + 1);
    e[((two_m + two_j as i32) / 2) as usize] = c(1.0);
    JointState::from_vector(SpaceSpec::new(1, two_j)?, s * (u * e), 0.0)
}

/// `Λ^j_m(δ)`: the common factor of the angular dispersions, finite at `δ = 1`.
pub fn lambda_factor(two_j: u32, two_m: i32, delta: f64) -> Result<f64> {
    check_two_m(two_j, two_m)?;
    if !(delta > 0.0) || !delta.is_finite() {
        return invalid(format!("Λ needs 0 < δ < ∞, got {delta}"));
    }
    let j = two_j as f64 / 2.0;
    let am = two_m.unsigned_abs() as f64 / 2.0;
    let n = ((two_j - two_m.unsigned_abs()) / 2) as i64;
    let x = (1.0 + delta * delta) / (2.0 * delta);
    let num = jacobi_p_real(n - 1, 1.0, 1.0 + 2.0 * am, x)?;
    let den = jacobi_p_real(n, 0.0, 2.0 * am, x)?;
    Ok(am / (2.0 * (1.0 + delta).powi(2)) + (j + am + 1.0) / (8.0 * delta) * num / den)
}

/// `⟨J₃⟩` in the angular MUS with label `m`.
///
/// `δ = 0` is the `λ = 1` state `|j, j⟩`.
pub fn j3_mean(two_j: u32, two_m: i32, delta: f64) -> Result<f64> {
    check_two_m(two_j, two_m)?;
    if delta == 0.0 {
        return Ok(two_j as f64 / 2.0);
    }
    Ok(2.0 * (1.0 - delta * delta) * lambda_factor(two_j, two_m, delta)?)
}

/// `(ΔJ₁)², (ΔJ₂)², Δ, ⟨F⟩` in closed form.
///
/// `δ = 1` (`Re λ = 0`) uses the Puri expressions; `δ = 0` is `|j, j⟩`.
pub fn angular_dispersions(param: &MusParam, two_j: u32, two_m: i32) -> Result<MusDispersions> {
    check_two_m(two_j, two_m)?;
    let (d, phi) = (param.delta, param.phi);
    let j = two_j as f64 / 2.0;
    if d == 0.0 {
        let v = j / 2.0;
        return Ok(MusDispersions { var_a: v, var_b: v, delta: v, mean_f: 0.0 });
    }
    if (d - 1.0).abs() <= 1e-12 {
        return Ok(puri_dispersions(two_j, two_m, phi));
    }
    let l = lambda_factor(two_j, two_m, d)?;
    let cphi = phi.cos();
    Ok(MusDispersions {
        var_a: (1.0 - 2.0 * d * cphi + d * d) * l,
        var_b: (1.0 + 2.0 * d * cphi + d * d) * l,
        delta: (1.0 - 2.0 * d * d * (2.0 * phi).cos() + d.powi(4)).sqrt() * l,
        mean_f: -4.0 * d * phi.sin() * l,
    })
}

/// The `δ = 1` closed forms of Puri.
pub fn puri_dispersions(two_j: u32, two_m: i32, phi: f64) -> MusDispersions {
    let j = two_j as f64 / 2.0;
    let m = two_m as f64 / 2.0;
    let k = j * (j + 1.0) - m * m;
    MusDispersions {
        var_a: 0.5 * k * (phi / 2.0).sin().powi(2),
        var_b: 0.5 * k * (phi / 2.0).cos().powi(2),
        delta: 0.25 * k * phi.sin().abs(),
        mean_f: -0.5 * k * phi.sin(),
    }
}

/// `Δ±(δ, φ)` for `j = ½`.
pub fn delta_spin_half(delta: f64, phi: f64) -> f64 {
    let s = phi.sin();
    let p = (1.0 + delta).powi(2);
    0.25 * (1.0 + 4.0 * (delta * delta * s * s - delta * p) / (p * p)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_ops, srur_report};
    use std::f64::consts::PI;

    fn residual(coeffs: &Su2Coeffs, two_j: u32, s: &JointState, ev: C64) -> f64 {
        let k = coeffs.matrix(two_j);
        (k * &s.coeffs - &s.coeffs * ev).norm()
    }

    #[test]
    fn j3_spectrum() {
        let k = Su2Coeffs::new(c(0.0), c(0.0), c(1.0));
        let s = su2_eigenvalues(&k, 2);
        assert_eq!(s.values, vec![c(-1.0), c(0.0), c(1.0)]);
    }

    #[test]
    fn j1_spin_half() {
        let k = Su2Coeffs::from_cartesian(c(1.0), c(0.0), c(0.0));
        assert_eq!((k.beta_minus, k.beta_plus), (c(0.5), c(0.5)));
        assert!((k.b - 1.0).norm() < 1e-15);
        // J₁ = σₓ/2 has eigenvalues ±½ and eigenvectors (|+⟩ ± |−⟩)/√2.
        for &tm in &[-1, 1] {
            let s = su2_eigenvector(&k, 1, tm).unwrap();
            let r = std::f64::consts::FRAC_1_SQRT_2;
            assert!((s.coeffs[0].norm() - r).abs() < 1e-14 && (s.coeffs[1].norm() - r).abs() < 1e-14);
            assert!(residual(&k, 1, &s, c(tm as f64 / 2.0)) < 1e-14);
        }
    }

    #[test]
    fn ladder_only_is_degenerate() {
        let k = Su2Coeffs::new(c(1.0), c(0.0), c(0.0));
        assert!(k.is_degenerate());
        assert_eq!(su2_eigenvalues(&k, 3).multiplicity, 4);
        assert!(su2_t_eff(&k, 3).is_err());
        let s = su2_eigenvector(&k, 3, 3).unwrap();
        assert_eq!(s.coeffs[3], c(1.0));
        assert!(su2_eigenvector(&k, 3, 1).is_err());
    }

    #[test]
    fn diagonal_case_is_identity() {
        let k = Su2Coeffs::new(c(0.0), c(0.0), C64::new(0.3, 0.2));
        let t = su2_t_eff(&k, 2).unwrap();
        assert_eq!(t.matrix, linalg::identity(3));
    }

    #[test]
    fn all_cases_give_labelled_eigenvectors() {
        let cases = [
            Su2Coeffs::new(C64::new(0.3, -0.8), C64::new(-1.1, 0.4), C64::new(0.2, 0.5)),
            Su2Coeffs::new(C64::new(0.3, -0.8), c(0.0), C64::new(-0.7, 0.1)),
            Su2Coeffs::new(c(0.0), C64::new(0.6, 0.6), C64::new(-0.4, -0.9)),
            Su2Coeffs::new(C64::new(0.5, 0.5), C64::new(0.2, -1.0), c(0.0)),
        ];
        for k in &cases {
            for two_j in 1..=4u32 {
                for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                    let s = su2_eigenvector(k, two_j, tm).unwrap();
                    let r = residual(k, two_j, &s, k.b * (tm as f64 / 2.0));
                    assert!(r < 1e-10, "{k:?} 2j={two_j} 2m={tm}: {r}");
                }
            }
        }
    }

    #[test]
    fn degenerate_full_case() {
        // b = 0 with β₃² = −4β₊β₋.
        let (bp, bm) = (C64::new(0.4, 0.3), C64::new(-0.2, 0.9));
        let b3 = (-(bp * bm) * 4.0).sqrt();
        let k = Su2Coeffs::new(bm, bp, b3);
        assert_eq!(k.case(), Su2Case::DegenerateFull);
        let s = su2_eigenvector(&k, 4, -4).unwrap();
        assert!(residual(&k, 4, &s, c(0.0)) < 1e-12);
        assert!(su2_eigenvector(&k, 4, 0).is_err());
    }

    #[test]
    fn jacobi_form_matches_t_eff() {
        let k = Su2Coeffs::new(C64::new(0.7, 0.1), C64::new(-0.3, 0.6), C64::new(0.25, -0.4));
        for two_j in 1..=4u32 {
            for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                let a = su2_state_jacobi(&k, two_j, tm).unwrap();
                let b = su2_eigenvector(&k, two_j, tm).unwrap();
                assert!(a.fidelity(&b).unwrap() > 1.0 - 1e-10, "2j={two_j} 2m={tm}");
            }
        }
        assert!(su2_state_jacobi(&Su2Coeffs::new(c(1.0), c(0.0), c(1.0)), 1, 1).is_err());
    }

    #[test]
    fn jacobi_form_small_beta_limit() {
        let k = Su2Coeffs::new(c(1e-7), c(1e-7), c(1.0));
        let s = su2_state_jacobi(&k, 1, 1).unwrap();
        assert!((s.coeffs[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn angular_state_residual() {
        let p = MusParam::from_delta_phi(0.5, PI / 6.0).unwrap();
        let (s, ev) = angular_mus(&p, 1, 1).unwrap();
        let ops = build_ops(s.spec);
        let op = &ops.j1() + &(&ops.j2() * (I * p.lambda));
        let r = (op.apply(&s.coeffs) - &s.coeffs * ev).norm();
        assert!(r < 1e-10);
        assert!((ev - (c(1.0) - p.lambda * p.lambda).sqrt() * 0.5).norm() < 1e-15);
    }

    #[test]
    fn lambda_one_is_top_state() {
        let p = MusParam::from_lambda(c(1.0)).unwrap();
        let (s, ev) = angular_mus(&p, 3, 3).unwrap();
        assert_eq!(ev, c(0.0));
        assert_eq!(s.coeffs[3], c(1.0));
        assert!(angular_mus(&p, 3, 1).is_err());
    }

    #[test]
    fn u_form_is_an_eigenvector() {
        for &(d, phi) in &[(0.5, PI / 6.0), (2.0, 1.0), (1.0, 0.4)] {
            let p = MusParam::from_delta_phi(d, phi).unwrap();
            let k = angular_coeffs(&p);
            for tm in [-2, 0, 2] {
                let s = angular_u_form(&p, 2, tm).unwrap();
                let ev = s.coeffs.dotc(&(k.matrix(2) * &s.coeffs));
                assert!(residual(&k, 2, &s, ev) < 1e-10);
                // Same state as the labelled eigenvector with matching eigenvalue.
                let lbl = (ev / k.b * 2.0).re.round() as i32;
                let t = su2_eigenvector(&k, 2, lbl).unwrap();
                assert!(s.fidelity(&t).unwrap() > 1.0 - 1e-10);
            }
        }
    }

    #[test]
    fn zero_eigenvalue_alternating_series() {
        // m = 0 for integer j: coefficients of |j, j−2k⟩ follow
        // (−1)^k C(j,k)/√C(2j,2k) δ^k e^{−i(j−2k)φ/2} up to a common factor.
        let (d, phi) = (0.6, 0.9);
        let p = MusParam::from_delta_phi(d, phi).unwrap();
        for j in 1..=3u32 {
            let (s, _) = angular_mus(&p, 2 * j, 0).unwrap();
            let idx = |mm: i32| (mm + j as i32) as usize;
            let mut want = CVector::zeros(2 * j as usize + 1);
            for k in 0..=j {
                let mm = j as i32 - 2 * k as i32;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let mag = sign * binomial_f64(j, k).unwrap() / binomial_f64(2 * j, 2 * k).unwrap().sqrt() * d.powi(k as i32);
                want[idx(mm)] = C64::from_polar(mag, -(mm as f64) * phi / 2.0);
            }
            let w = JointState::from_vector(s.spec, want, 0.0).unwrap();
            assert!(s.fidelity(&w).unwrap() > 1.0 - 1e-12, "j={j}");
        }
    }

    #[test]
    fn closed_form_vs_dense() {
        for two_j in 1..=4u32 {
            for &d in &[0.2, 0.5, 1.0, 2.0] {
                for i in 0..12 {
                    let phi = -PI / 2.0 + 2.0 * PI * (i as f64 + 0.5) / 12.0;
                    let Ok(p) = MusParam::from_delta_phi(d, phi) else { continue };
                    for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                        let (s, _) = angular_mus(&p, two_j, tm).unwrap();
                        let ops = build_ops(s.spec);
                        let r = srur_report(&ops.j1(), &ops.j2(), &s).unwrap();
                        let cf = angular_dispersions(&p, two_j, tm).unwrap();
                        let tag = format!("2j={two_j} 2m={tm} δ={d} φ={phi}");
                        assert!((r.var_a - cf.var_a).abs() < 1e-8, "{tag}: {} vs {}", r.var_a, cf.var_a);
                        assert!((r.var_b - cf.var_b).abs() < 1e-8, "{tag}");
                        assert!((r.delta - cf.delta).abs() < 1e-8, "{tag}");
                        assert!((r.mean_f - cf.mean_f).abs() < 1e-8, "{tag}");
                    }
                }
            }
        }
    }

    #[test]
    fn puri_example() {
        let d = puri_dispersions(2, 0, PI / 2.0);
        assert!((d.var_a - 0.5).abs() < 1e-15 && (d.var_b - 0.5).abs() < 1e-15);
        assert!((d.delta - 0.5).abs() < 1e-15);
    }

    #[test]
    fn spin_half_delta_zero() {
        let p = MusParam::from_delta_phi(0.0, 0.0).unwrap();
        let d = angular_dispersions(&p, 1, 1).unwrap();
        assert_eq!((d.var_a, d.var_b), (0.25, 0.25));
    }

    #[test]
    fn spin_half_closed_delta() {
        for &(d, phi) in &[(0.3, 0.2), (1.7, 2.5), (0.9, -1.0)] {
            let p = MusParam::from_delta_phi(d, phi).unwrap();
            for tm in [-1, 1] {
                let cf = angular_dispersions(&p, 1, tm).unwrap();
                assert!((cf.delta - delta_spin_half(d, p.phi)).abs() < 1e-14);
            }
        }
        assert!((delta_spin_half(1.0, PI / 6.0) - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn j3_mean_top_label() {
        // m = ±j: only the −|m| tanh(ln δ / 2) term survives.
        let d: f64 = 0.4;
        let want = -0.5 * (d.ln() / 2.0).tanh();
        assert!((j3_mean(1, 1, d).unwrap() - want).abs() < 1e-15);
        assert!((j3_mean(1, -1, d).unwrap() - want).abs() < 1e-15);
    }
}
