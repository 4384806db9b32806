//! Position/momentum minimum-uncertainty states of the harmonic oscillator:
//! eigenstates of `x + iλp` built by recurrence and by `S(χ)D(η)|0⟩`.

use crate::error::{invalid, Result};
use crate::fock::{settle, JointState, Truncation};
use crate::linalg::{self, CVector};
use crate::mus::{MusDispersions, MusParam};
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoStateSpec {
    pub param: MusParam,
    /// Eigenvalue of `x + iλp`.
    pub beta: C64,
}

impl HoStateSpec {
    pub fn new(param: MusParam, beta: C64) -> Result<Self> {
        if param.delta >= 1.0 {
            return invalid(format!("δ = {} ≥ 1 gives a non-normalizable state", param.delta));
        }
        Ok(HoStateSpec { param, beta })
    }

    /// Squeeze parameter `χ = −tanh⁻¹(δ) e^{iφ}`.
    pub fn chi(&self) -> C64 {
        C64::from_polar(-self.param.delta.atanh(), self.param.phi)
    }

    /// Displacement `η = (β/√2)(1 + δe^{iφ})/√(1−δ²)`.
    pub fn eta(&self) -> C64 {
        let d = self.param.delta;
        self.beta / SQRT_2 * (self.param.w() + 1.0) / (1.0 - d * d).sqrt()
    }
}

/// Solves `(1+λ)√(n+1) C_{n+1} + (1−λ)√n C_{n−1} = √2 β C_n` from `C_0 = 1`.
pub fn ho_state_recurrence(spec: &HoStateSpec, trunc: Truncation) -> Result<JointState> {
    let l = spec.param.lambda;
    let beta = spec.beta;
    settle(0, trunc, 1, |len| {
        let mut v = CVector::zeros(len);
        v[0] = C64::new(1.0, 0.0);
        for n in 0..len - 1 {
            let prev = if n > 0 { v[n - 1] * (1.0 - l) * (n as f64).sqrt() } else { C64::new(0.0, 0.0) };
            v[n + 1] = (v[n] * beta * SQRT_2 - prev) / ((l + 1.0) * ((n + 1) as f64).sqrt());
        }
        Ok(v)
    })
}

/// `S(χ)D(η)|0⟩` with both unitaries applied as exponentials of their generators.
///
/// Each trial length `L` is computed on `2L + 40` levels and cut, so the
/// kept coefficients do not see the truncated top of `a†²`.
pub fn ho_state_factorized(spec: &HoStateSpec, trunc: Truncation) -> Result<JointState> {
    let chi = spec.chi();
    let eta = spec.eta();
    settle(0, trunc, 1, |len| {
        let m = 2 * len + 40;
        let mut vac = CVector::zeros(m);
        vac[0] = C64::new(1.0, 0.0);
        let v = linalg::squeeze_displace_apply(chi, eta, &vac);
        Ok(v.rows(0, len).into_owned())
    })
}

/// Closed-form dispersions of `x` and `p`, `Δ` and `⟨F⟩`.
pub fn ho_dispersions(param: &MusParam) -> Result<MusDispersions> {
    let d = param.delta;
    if d >= 1.0 {
        return invalid(format!("δ = {d} ≥ 1 gives a non-normalizable state"));
    }
    let (c, s) = (param.phi.cos(), param.phi.sin());
    let den = 1.0 - d * d;
    Ok(MusDispersions {
        var_a: (1.0 - 2.0 * d * c + d * d) / (2.0 * den),
        var_b: (1.0 + 2.0 * d * c + d * d) / (2.0 * den),
        delta: (0.25 + d * d * s * s / (den * den)).sqrt(),
        mean_f: -2.0 * d * s / den,
    })
}
