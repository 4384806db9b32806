//! The eigenvalue problem `(A + iλB)|ψ⟩ = β|ψ⟩` for minimum-uncertainty
//! states: the `λ ↔ (δ, φ)` parametrization, classification, and the
//! dispersions implied by `⟨C⟩`.

use crate::error::{invalid, Error, Result};
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `λ` together with `δ e^{iφ} = (1−λ)/(1+λ)`, `φ ∈ [−π/2, 3π/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MusParam {
    pub lambda: C64,
    pub delta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MusClass {
    /// `|λ| = 1`: equal dispersions.
    Coherent,
    /// `|λ| < 1`: `(ΔA)² < Δ < (ΔB)²`.
    ASqueezed,
    /// `|λ| > 1`: `(ΔB)² < Δ < (ΔA)²`.
    BSqueezed,
}

/// Wraps an angle into `[−π/2, 3π/2)`.
pub fn wrap_phi(phi: f64) -> f64 {
    let w = (phi + PI / 2.0).rem_euclid(2.0 * PI) - PI / 2.0;
    if w >= 1.5 * PI {
        w - 2.0 * PI
    } else {
        w
    }
}

impl MusParam {
    pub fn from_lambda(lambda: C64) -> Result<Self> {
        if lambda.norm() == 0.0 {
            return invalid("λ = 0 is excluded");
        }
        if (lambda + 1.0).norm() == 0.0 {
            return Err(Error::NoSolution("λ = −1 does not give any solution".into()));
        }
        if !lambda.re.is_finite() || !lambda.im.is_finite() {
            return invalid("λ must be finite");
        }
        let w = (C64::new(1.0, 0.0) - lambda) / (lambda + 1.0);
        let delta = w.norm();
        let phi = if delta < 1e-15 { 0.0 } else { wrap_phi(w.arg()) };
        Ok(MusParam { lambda, delta, phi })
    }

    pub fn from_delta_phi(delta: f64, phi: f64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() || !phi.is_finite() {
            return invalid(format!("δ must be finite and non-negative, got {delta}"));
        }
        let phi = if delta == 0.0 { 0.0 } else { wrap_phi(phi) };
        let w = C64::from_polar(delta, phi);
        let den = w + 1.0;
        if den.norm() < 1e-12 {
            return invalid("δ = 1, φ = π gives an infinite λ");
        }
        let lambda = (C64::new(1.0, 0.0) - w) / den;
        if lambda.norm() < 1e-12 {
            return invalid("δ = 1, φ = 0 gives λ = 0, which is excluded");
        }
        Ok(MusParam { lambda, delta, phi })
    }

    /// `δ e^{iφ}`.
    pub fn w(&self) -> C64 {
        C64::from_polar(self.delta, self.phi)
    }

    /// `|λ|² = (1 − 2δcosφ + δ²)/(1 + 2δcosφ + δ²)`.
    pub fn lambda_norm_sqr_closed(&self) -> f64 {
        let (d, c) = (self.delta, self.phi.cos());
        (1.0 - 2.0 * d * c + d * d) / (1.0 + 2.0 * d * c + d * d)
    }

    pub fn classify(&self) -> MusClass {
        let r = self.lambda.norm();
        if (r - 1.0).abs() <= 1e-12 {
            MusClass::Coherent
        } else if r < 1.0 {
            MusClass::ASqueezed
        } else {
            MusClass::BSqueezed
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MusDispersions {
    pub var_a: f64,
    pub var_b: f64,
    pub delta: f64,
    pub mean_f: f64,
}

/// Dispersions of a MUS from `⟨C⟩`. When `Re λ = 0` then `⟨C⟩ = 0` and
/// `⟨F⟩` must be supplied instead.
pub fn dispersions_from_c(param: &MusParam, mean_c: f64, mean_f: Option<f64>) -> Result<MusDispersions> {
    let l = param.lambda;
    if l.re.abs() <= 1e-14 * l.norm() {
        let f = mean_f.ok_or_else(|| Error::InvalidInput("Re λ = 0 needs ⟨F⟩".into()))?;
        return Ok(MusDispersions {
            var_a: 0.5 * (l.im * f).abs(),
            var_b: 0.5 * (f / l.im).abs(),
            delta: 0.5 * f.abs(),
            mean_f: f,
        });
    }
    let k = mean_c / (2.0 * l.re);
    Ok(MusDispersions {
        var_a: (l.norm_sqr() * k).abs(),
        var_b: k.abs(),
        delta: (l.norm() * k).abs(),
        mean_f: l.im / l.re * mean_c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanValues {
    Determined { mean_a: f64, mean_b: f64 },
    /// `Re λ = 0`: only `⟨A⟩ = Re β + Im λ·⟨B⟩` is fixed.
    Related { re_beta: f64, im_lambda: f64 },
}

impl MeanValues {
    /// `⟨A⟩` given `⟨B⟩` (ignored when both are determined).
    pub fn mean_a_given_b(&self, mean_b: f64) -> f64 {
        match *self {
            MeanValues::Determined { mean_a, .. } => mean_a,
            MeanValues::Related { re_beta, im_lambda } => re_beta + im_lambda * mean_b,
        }
    }
}

/// `⟨A⟩` and `⟨B⟩` from the eigenvalue `β`.
pub fn mean_values_from_eigenvalue(beta: C64, param: &MusParam) -> MeanValues {
    let l = param.lambda;
    if l.re.abs() <= 1e-14 * l.norm() {
        return MeanValues::Related { re_beta: beta.re, im_lambda: l.im };
    }
    MeanValues::Determined { mean_a: beta.re + l.im / l.re * beta.im, mean_b: beta.im / l.re }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn lambda_one_is_standard_cs() {
        let p = MusParam::from_lambda(C64::new(1.0, 0.0)).unwrap();
        assert_eq!((p.delta, p.phi), (0.0, 0.0));
        assert_eq!(p.classify(), MusClass::Coherent);
    }

    #[test]
    fn delta_half_phi_pi() {
        let p = MusParam::from_delta_phi(0.5, PI).unwrap();
        assert!((p.lambda - 3.0).norm() < 1e-14);
    }

    #[test]
    fn delta_one_phi_half_pi() {
        let p = MusParam::from_delta_phi(1.0, FRAC_PI_2).unwrap();
        assert!((p.lambda - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(p.classify(), MusClass::Coherent);
    }

    #[test]
    fn x_squeezed_region() {
        for &phi in &[-1.2, 0.0, 0.7, 1.5] {
            assert_eq!(MusParam::from_delta_phi(0.5, phi).unwrap().classify(), MusClass::ASqueezed);
        }
    }

    #[test]
    fn rejected_lambdas() {
        assert!(matches!(MusParam::from_lambda(C64::new(-1.0, 0.0)), Err(Error::NoSolution(_))));
        assert!(MusParam::from_lambda(C64::new(0.0, 0.0)).is_err());
        assert!(MusParam::from_delta_phi(1.0, PI).is_err());
    }

    #[test]
    fn wrapping() {
        assert!((wrap_phi(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phi(1.5 * PI) + FRAC_PI_2).abs() < 1e-15);
        assert_eq!(wrap_phi(-FRAC_PI_2), -FRAC_PI_2);
    }

    #[test]
    fn real_lambda_dispersions() {
        let p = MusParam::from_lambda(C64::new(1.0, 0.0)).unwrap();
        let d = dispersions_from_c(&p, 1.0, None).unwrap();
        assert_eq!((d.var_a, d.var_b, d.delta, d.mean_f), (0.5, 0.5, 0.5, 0.0));
    }

    #[test]
    fn oscillator_closed_form_from_c() {
        let (delta, phi) = (0.5, PI / 6.0);
        let p = MusParam::from_delta_phi(delta, phi).unwrap();
        let d = dispersions_from_c(&p, 1.0, None).unwrap();
        let den = 2.0 * (1.0 - delta * delta);
        assert!((d.var_a - (1.0 - 2.0 * delta * phi.cos() + delta * delta) / den).abs() < 1e-14);
        assert!((d.var_b - (1.0 + 2.0 * delta * phi.cos() + delta * delta) / den).abs() < 1e-14);
    }

    #[test]
    fn imaginary_lambda_branch() {
        let p = MusParam::from_lambda(C64::new(0.0, 2.0)).unwrap();
        assert!(dispersions_from_c(&p, 0.0, None).is_err());
        let d = dispersions_from_c(&p, 0.0, Some(0.6)).unwrap();
        assert!((d.var_a - 0.6).abs() < 1e-15);
        assert!((d.var_b - 0.15).abs() < 1e-15);
        assert!((d.delta - 0.3).abs() < 1e-15);
    }

    #[test]
    fn mean_values() {
        let p = MusParam::from_lambda(C64::new(1.0, 0.0)).unwrap();
        assert_eq!(
            mean_values_from_eigenvalue(C64::new(0.7, 0.0), &p),
            MeanValues::Determined { mean_a: 0.7, mean_b: 0.0 }
        );
        let p = MusParam::from_lambda(C64::new(2.0, 0.0)).unwrap();
        assert_eq!(
            mean_values_from_eigenvalue(C64::new(1.0, 1.0), &p),
            MeanValues::Determined { mean_a: 1.0, mean_b: 0.5 }
        );
        let p = MusParam::from_lambda(C64::new(0.0, 1.0)).unwrap();
        let m = mean_values_from_eigenvalue(C64::new(0.0, 1.0), &p);
        assert_eq!(m.mean_a_given_b(0.4), 0.4);
    }
}
