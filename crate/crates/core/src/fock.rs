//! Truncated Fock ⊗ spin space: basis, states, operators, dispersions.
//!
//! Basis index of `|n; j, m⟩` is `n·(2j+1) + (m + j)`.

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::C64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSpec {
    /// Number of bosonic levels `N` (levels `0..N`).
    pub fock_dim: usize,
    /// Twice the spin, so half-integers are exact.
    pub two_j: u32,
}

impl SpaceSpec {
    pub fn new(fock_dim: usize, two_j: u32) -> Result<Self> {
        if fock_dim == 0 {
            return invalid("fock_dim must be at least 1");
        }
        Ok(SpaceSpec { fock_dim, two_j })
    }

    pub fn spin_dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn dim(&self) -> usize {
        self.fock_dim * self.spin_dim()
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Index of `|n; j, m⟩` with `m = two_m / 2`.
    pub fn index(&self, n: usize, two_m: i32) -> usize {
        n * self.spin_dim() + ((two_m + self.two_j as i32) / 2) as usize
    }

    /// Doubled `m` values in ascending order.
    pub fn two_ms(&self) -> impl Iterator<Item = i32> {
        let tj = self.two_j as i32;
        (0..=self.two_j as i32).map(move |k| 2 * k - tj)
    }
}

/// Checks that `two_m` is a valid projection for `two_j`.
pub fn check_two_m(two_j: u32, two_m: i32) -> Result<()> {
    let tj = two_j as i32;
    if two_m.abs() > tj || (tj - two_m) % 2 != 0 {
        return invalid(format!("two_m = {two_m} is not a projection of two_j = {two_j}"));
    }
    Ok(())
}

/// How many bosonic levels a constructor keeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    /// `None` grows the space until the tail mass is below `tol`.
    pub fock_dim: Option<usize>,
    pub tol: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { fock_dim: None, tol: 1e-14 }
    }
}

impl Truncation {
    pub fn auto() -> Self {
        Self::default()
    }

    pub fn fixed(fock_dim: usize) -> Self {
        Truncation { fock_dim: Some(fock_dim), tol: 1e-10 }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub spec: SpaceSpec,
    pub coeffs: CVector,
    /// Probability mass discarded above the top kept level.
    pub norm_tail: f64,
}

impl JointState {
    /// Normalizes `v` and fixes the global phase: the first coefficient
    /// larger than `1e-10·max` in basis order becomes real positive.
    pub fn from_vector(spec: SpaceSpec, v: CVector, norm_tail: f64) -> Result<Self> {
        if v.len() != spec.dim() {
            return Err(Error::ShapeMismatch { expected: spec.dim(), got: v.len() });
        }
        let nrm = v.norm();
        if !nrm.is_finite() || nrm == 0.0 {
            return Err(Error::Numerical("state vector has zero or non-finite norm".into()));
        }
        let mut v = v / C64::new(nrm, 0.0);
        let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(first) = v.iter().find(|z| z.norm() > 1e-10 * max).copied() {
            let ph = first.conj() / first.norm();
            v *= ph;
        }
        Ok(JointState { spec, coeffs: v, norm_tail })
    }

    pub fn amplitude(&self, n: usize, two_m: i32) -> C64 {
        if n >= self.spec.fock_dim {
            return C64::new(0.0, 0.0);
        }
        self.coeffs[self.spec.index(n, two_m)]
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// Copy with `fock_dim` levels, zero-padded or cut (not renormalized).
    pub fn resized(&self, fock_dim: usize) -> JointState {
        let spec = SpaceSpec { fock_dim, two_j: self.spec.two_j };
        let mut v = CVector::zeros(spec.dim());
        let keep = spec.dim().min(self.coeffs.len());
        v.rows_mut(0, keep).copy_from(&self.coeffs.rows(0, keep));
        JointState { spec, coeffs: v, norm_tail: self.norm_tail }
    }

    /// `⟨self|other⟩`, padding the shorter state with zeros.
    pub fn overlap(&self, other: &JointState) -> Result<C64> {
        if self.spec.two_j != other.spec.two_j {
            return invalid("overlap between different spins");
        }
        let n = self.spec.fock_dim.max(other.spec.fock_dim);
        Ok(self.resized(n).coeffs.dotc(&other.resized(n).coeffs))
    }

    /// `|⟨self|other⟩|`.
    pub fn fidelity(&self, other: &JointState) -> Result<f64> {
        Ok(self.overlap(other)?.norm())
    }

    /// Probability of each bosonic level.
    pub fn level_populations(&self) -> Vec<f64> {
        level_masses(&self.coeffs, self.spec.spin_dim())
    }
}

pub(crate) fn level_masses(v: &CVector, spin_dim: usize) -> Vec<f64> {
    v.as_slice().chunks(spin_dim).map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect()
}

/// Grows the bosonic space until `build` has converged, then cuts at the
/// smallest level count whose discarded mass is below the tolerance.
///
/// `build(L)` must return the unnormalized joint vector on `L` levels with
/// every kept coefficient exact (independent of `L`).
pub(crate) fn settle<F>(two_j: u32, trunc: Truncation, min_levels: usize, build: F) -> Result<JointState>
where
    F: Fn(usize) -> Result<CVector>,
{
    let spin_dim = two_j as usize + 1;
    let cap_dim = linalg::max_dim();
    let cap_levels = (cap_dim / spin_dim).max(1);
    if let Some(n) = trunc.fock_dim {
        if n == 0 {
            return invalid("fock_dim must be at least 1");
        }
        if n > cap_levels {
            return Err(Error::TruncationCap { cap: cap_dim, tail: f64::NAN });
        }
    }
    let mut len = min_levels.max(trunc.fock_dim.unwrap_or(0)).max(32).min(cap_levels);
    let (v, masses, total) = loop {
        let v = build(len)?;
        let masses = level_masses(&v, spin_dim);
        let total: f64 = masses.iter().sum();
        if !total.is_finite() || total == 0.0 {
            return Err(Error::Numerical("vanishing or non-finite coefficients while growing truncation".into()));
        }
        let top: f64 = masses[len * 3 / 4..].iter().sum();
        if top <= 1e-32 * total {
            break (v, masses, total);
        }
        if len == cap_levels {
            // Slow tails: accept the cap when it is still far below the tolerance.
            if top <= 1e-3 * trunc.tol * total {
                break (v, masses, total);
            }
            return Err(Error::TruncationCap { cap: cap_dim, tail: top / total });
        }
        len = (len * 2).min(cap_levels);
    };
    // tail[k]: relative mass of levels >= k.
    let mut tail = vec![0.0; len + 1];
    for k in (0..len).rev() {
        tail[k] = tail[k + 1] + masses[k] / total;
    }
    let n = match trunc.fock_dim {
        Some(n) => {
            if tail[n] > trunc.tol {
                return Err(Error::TruncationCap { cap: n * spin_dim, tail: tail[n] });
            }
            n
        }
        None => (min_levels.max(1).min(len)..=len).find(|&k| tail[k] < trunc.tol).unwrap_or(len),
    };
    let spec = SpaceSpec::new(n, two_j)?;
    let keep = n * spin_dim;
    let out = v.rows(0, keep).into_owned();
    JointState::from_vector(spec, out, tail[n])
}

/// Dense operator on the joint space.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    pub spec: SpaceSpec,
    pub matrix: CMatrix,
}

impl LinearOperator {
    pub fn new(spec: SpaceSpec, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != spec.dim() || matrix.ncols() != spec.dim() {
            return Err(Error::ShapeMismatch { expected: spec.dim(), got: matrix.nrows() });
        }
        Ok(LinearOperator { spec, matrix })
    }

    /// `boson ⊗ spin`.
    pub fn from_parts(spec: SpaceSpec, boson: &CMatrix, spin: &CMatrix) -> Self {
        LinearOperator { spec, matrix: linalg::kron(boson, spin) }
    }

    pub fn zero(spec: SpaceSpec) -> Self {
        LinearOperator { spec, matrix: CMatrix::zeros(spec.dim(), spec.dim()) }
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }

    pub fn adjoint(&self) -> Self {
        LinearOperator { spec: self.spec, matrix: self.matrix.adjoint() }
    }

    pub fn scale(&self, s: C64) -> Self {
        LinearOperator { spec: self.spec, matrix: &self.matrix * s }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        LinearOperator {
            spec: self.spec,
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
        }
    }

    /// Largest entry of `|X − X†|`.
    pub fn hermitian_deviation(&self) -> f64 {
        linalg::max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }

    fn check_state(&self, state: &JointState) -> Result<()> {
        if state.spec != self.spec {
            return Err(Error::ShapeMismatch { expected: self.spec.dim(), got: state.spec.dim() });
        }
        Ok(())
    }
}

impl Add for &LinearOperator {
    type Output = LinearOperator;
    fn add(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator { spec: self.spec, matrix: &self.matrix + &rhs.matrix }
    }
}

impl Sub for &LinearOperator {
    type Output = LinearOperator;
    fn sub(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator { spec: self.spec, matrix: &self.matrix - &rhs.matrix }
    }
}

impl Mul for &LinearOperator {
    type Output = LinearOperator;
    fn mul(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator { spec: self.spec, matrix: &self.matrix * &rhs.matrix }
    }
}

impl Mul<C64> for &LinearOperator {
    type Output = LinearOperator;
    fn mul(self, rhs: C64) -> LinearOperator {
        self.scale(rhs)
    }
}

#[derive(Debug, Clone)]
pub struct Ops {
    pub a: LinearOperator,
    pub a_dag: LinearOperator,
    pub identity: LinearOperator,
    pub j_plus: LinearOperator,
    pub j_minus: LinearOperator,
    pub j3: LinearOperator,
}

impl Ops {
    /// `J₁ = (J₊ + J₋)/2`.
    pub fn j1(&self) -> LinearOperator {
        (&self.j_plus + &self.j_minus).scale(C64::new(0.5, 0.0))
    }

    /// `J₂ = (J₊ − J₋)/(2i)`.
    pub fn j2(&self) -> LinearOperator {
        (&self.j_plus - &self.j_minus).scale(C64::new(0.0, -0.5))
    }

    /// `x = (a + a†)/√2`.
    pub fn x(&self) -> LinearOperator {
        (&self.a + &self.a_dag).scale(C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
    }

    /// `p = i(a† − a)/√2`.
    pub fn p(&self) -> LinearOperator {
        (&self.a_dag - &self.a).scale(C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2))
    }
}

/// Matrices of `a, a†, I, J₊, J₋, J₃` on the truncated space.
pub fn build_ops(spec: SpaceSpec) -> Ops {
    let n = spec.fock_dim;
    let d = spec.spin_dim();
    let (jp, jm, j3) = linalg::spin_matrices(spec.two_j);
    let ib = linalg::identity(n);
    let is = linalg::identity(d);
    let a = linalg::annihilation(n);
    Ops {
        a: LinearOperator::from_parts(spec, &a, &is),
        a_dag: LinearOperator::from_parts(spec, &a.adjoint(), &is),
        identity: LinearOperator::from_parts(spec, &ib, &is),
        j_plus: LinearOperator::from_parts(spec, &ib, &jp),
        j_minus: LinearOperator::from_parts(spec, &ib, &jm),
        j3: LinearOperator::from_parts(spec, &ib, &j3),
    }
}

/// `⟨ψ|X|ψ⟩`.
pub fn expectation(op: &LinearOperator, state: &JointState) -> Result<C64> {
    op.check_state(state)?;
    Ok(state.coeffs.dotc(&op.apply(&state.coeffs)))
}

/// `⟨X²⟩ − ⟨X⟩²` (real part), clamped at zero.
pub fn dispersion(op: &LinearOperator, state: &JointState) -> Result<f64> {
    op.check_state(state)?;
    let y = op.apply(&state.coeffs);
    let m = state.coeffs.dotc(&y);
    let m2 = state.coeffs.dotc(&op.apply(&y));
    Ok((m2 - m * m).re.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionReport {
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    pub mean_c: f64,
    pub mean_f: f64,
    /// `½√(⟨C⟩² + ⟨F⟩²)`.
    pub delta: f64,
    /// `var_a·var_b − delta²`; non-negative up to roundoff by the SRUR.
    pub srur_residual: f64,
}

/// Means, variances, `⟨C⟩` with `C = −i[A,B]`, `⟨F⟩` with
/// `F = {A−⟨A⟩, B−⟨B⟩}`, and the Schrödinger–Robertson slack.
///
/// Everything is evaluated from `Aψ` and `Bψ`, which equals the dense
/// operator products on the truncated space.
pub fn srur_report(a: &LinearOperator, b: &LinearOperator, state: &JointState) -> Result<DispersionReport> {
    a.check_state(state)?;
    b.check_state(state)?;
    for op in [a, b] {
        let dev = op.hermitian_deviation();
        if dev > 1e-10 {
            return Err(Error::NonHermitian(dev));
        }
    }
    let psi = &state.coeffs;
    Ok(report_from_images(psi, &a.apply(psi), &b.apply(psi)))
}

/// The report given `ψ`, `Aψ` and `Bψ` for hermitian `A`, `B`.
pub fn report_from_images(psi: &CVector, apsi: &CVector, bpsi: &CVector) -> DispersionReport {
    let mean_a = psi.dotc(apsi).re;
    let mean_b = psi.dotc(bpsi).re;
    let var_a = (apsi.norm_squared() - mean_a * mean_a).max(0.0);
    let var_b = (bpsi.norm_squared() - mean_b * mean_b).max(0.0);
    let ab = apsi.dotc(bpsi);
    let mean_c = 2.0 * ab.im;
    let mean_f = 2.0 * (ab.re - mean_a * mean_b);
    let delta = 0.5 * (mean_c * mean_c + mean_f * mean_f).sqrt();
    DispersionReport {
        mean_a,
        mean_b,
        var_a,
        var_b,
        mean_c,
        mean_f,
        delta,
        srur_residual: var_a * var_b - delta * delta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn basis_state(spec: SpaceSpec, n: usize, two_m: i32) -> JointState {
        let mut v = CVector::zeros(spec.dim());
        v[spec.index(n, two_m)] = C64::new(1.0, 0.0);
        JointState::from_vector(spec, v, 0.0).unwrap()
    }

    #[test]
    fn smallest_annihilator() {
        let ops = build_ops(SpaceSpec::new(2, 0).unwrap());
        assert_eq!(ops.a.matrix[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(ops.a.matrix.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }

    #[test]
    fn spin_half_raising() {
        let spec = SpaceSpec::new(1, 1).unwrap();
        let ops = build_ops(spec);
        assert_eq!(ops.j_plus.matrix[(spec.index(0, 1), spec.index(0, -1))], C64::new(1.0, 0.0));
    }

    #[test]
    fn casimir_identity_spin_one() {
        let spec = SpaceSpec::new(8, 2).unwrap();
        let o = build_ops(spec);
        let lhs = &(&(&o.j_plus * &o.j_minus) + &(&o.j_minus * &o.j_plus)) + &(&o.j3 * &o.j3).scale(C64::new(2.0, 0.0));
        let rhs = o.identity.scale(C64::new(4.0, 0.0));
        assert!(max_abs_diff(&lhs.matrix, &rhs.matrix) < 1e-12);
    }

    #[test]
    fn canonical_commutator_below_top_level() {
        let spec = SpaceSpec::new(10, 1).unwrap();
        let o = build_ops(spec);
        let c = o.a.commutator(&o.a_dag);
        let keep = 9 * spec.spin_dim();
        let block = c.matrix.view((0, 0), (keep, keep)).into_owned();
        assert!(max_abs_diff(&block, &linalg::identity(keep)) < 1e-14);
    }

    #[test]
    fn expectation_examples() {
        let spec = SpaceSpec::new(4, 2).unwrap();
        let o = build_ops(spec);
        let s = basis_state(spec, 2, 2);
        assert!((expectation(&o.identity, &s).unwrap() - 1.0).norm() < 1e-15);
        assert!((expectation(&o.j3, &s).unwrap() - 1.0).norm() < 1e-15);
        assert!(expectation(&o.j3, &basis_state(SpaceSpec::new(3, 2).unwrap(), 0, 0)).is_err());
    }

    #[test]
    fn spin_half_report() {
        let spec = SpaceSpec::new(1, 1).unwrap();
        let o = build_ops(spec);
        let r = srur_report(&o.j1(), &o.j2(), &basis_state(spec, 0, 1)).unwrap();
        assert!((r.mean_c - 0.5).abs() < 1e-15);
        assert!((r.var_a * r.var_b - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn self_commutator_report() {
        let spec = SpaceSpec::new(3, 2).unwrap();
        let o = build_ops(spec);
        let mut v = CVector::zeros(spec.dim());
        for (k, z) in v.iter_mut().enumerate() {
            *z = C64::new(1.0 + k as f64, 0.3 * k as f64);
        }
        let s = JointState::from_vector(spec, v, 0.0).unwrap();
        let x = &o.j1() + &o.x();
        let r = srur_report(&x, &x, &s).unwrap();
        assert!(r.mean_c.abs() < 1e-12);
        assert!((r.mean_f - 2.0 * r.var_a).abs() < 1e-12);
        assert!(r.srur_residual.abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let spec = SpaceSpec::new(3, 0).unwrap();
        let o = build_ops(spec);
        let s = basis_state(spec, 0, 0);
        assert!(matches!(srur_report(&o.a, &o.x(), &s), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn phase_convention() {
        let spec = SpaceSpec::new(2, 0).unwrap();
        let v = CVector::from_vec(vec![C64::new(0.0, 1e-14), C64::new(0.0, -2.0)]);
        let s = JointState::from_vector(spec, v, 0.0).unwrap();
        assert!(s.coeffs[1].im.abs() < 1e-15 && s.coeffs[1].re > 0.0);
    }
}
