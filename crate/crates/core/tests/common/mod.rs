//! Independent brute-force oracle for the integration and acceptance tests.
//!
//! Ladder and spin actions are written out here from their matrix elements
//! rather than taken from the library. States are zero-padded by a few Fock
//! levels before any operator is applied, so images of linear and quadratic
//! expressions in `a, a†` are exact.

#![allow(dead_code)]

use aes_lab::coupled::AlgebraElement;
use aes_lab::JointState;
use nalgebra::DMatrix;
use num_complex::Complex64 as C;

pub const PAD: usize = 3;

#[derive(Debug, Clone, Copy)]
pub struct Space {
    pub levels: usize,
    pub two_j: u32,
}

impl Space {
    pub fn spin_dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn dim(&self) -> usize {
        self.levels * self.spin_dim()
    }

    pub fn idx(&self, n: usize, two_m: i32) -> usize {
        n * self.spin_dim() + ((two_m + self.two_j as i32) / 2) as usize
    }

    pub fn two_ms(&self) -> impl Iterator<Item = i32> {
        let tj = self.two_j as i32;
        (-tj..=tj).step_by(2)
    }
}

/// The state's coefficients on `levels + PAD` levels.
pub fn padded(s: &JointState) -> (Space, Vec<C>) {
    let sp = Space { levels: s.spec.fock_dim + PAD, two_j: s.spec.two_j };
    let mut v = vec![C::new(0.0, 0.0); sp.dim()];
    for (k, z) in s.coeffs.iter().enumerate() {
        v[k] = *z;
    }
    (sp, v)
}

pub fn a(sp: Space, v: &[C]) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); v.len()];
    for n in 0..sp.levels - 1 {
        let s = ((n + 1) as f64).sqrt();
        for tm in sp.two_ms() {
            out[sp.idx(n, tm)] = v[sp.idx(n + 1, tm)] * s;
        }
    }
    out
}

pub fn ad(sp: Space, v: &[C]) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); v.len()];
    for n in 1..sp.levels {
        let s = (n as f64).sqrt();
        for tm in sp.two_ms() {
            out[sp.idx(n, tm)] = v[sp.idx(n - 1, tm)] * s;
        }
    }
    out
}

fn jj(sp: Space) -> f64 {
    let j = sp.two_j as f64 / 2.0;
    j * (j + 1.0)
}

pub fn jp(sp: Space, v: &[C]) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); v.len()];
    for n in 0..sp.levels {
        for tm in sp.two_ms().filter(|&t| t > -(sp.two_j as i32)) {
            let m = tm as f64 / 2.0;
            out[sp.idx(n, tm)] = v[sp.idx(n, tm - 2)] * (jj(sp) - m * (m - 1.0)).sqrt();
        }
    }
    out
}

pub fn jm(sp: Space, v: &[C]) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); v.len()];
    for n in 0..sp.levels {
        for tm in sp.two_ms().filter(|&t| t < sp.two_j as i32) {
            let m = tm as f64 / 2.0;
            out[sp.idx(n, tm)] = v[sp.idx(n, tm + 2)] * (jj(sp) - m * (m + 1.0)).sqrt();
        }
    }
    out
}

pub fn j3(sp: Space, v: &[C]) -> Vec<C> {
    let mut out = v.to_vec();
    for n in 0..sp.levels {
        for tm in sp.two_ms() {
            out[sp.idx(n, tm)] *= tm as f64 / 2.0;
        }
    }
    out
}

pub fn axpy(acc: &mut [C], s: C, x: &[C]) {
    for (y, x) in acc.iter_mut().zip(x) {
        *y += s * x;
    }
}

pub fn dot(u: &[C], v: &[C]) -> C {
    u.iter().zip(v).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &[C]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `α₋a + α₊a† + α₃ + β₋J₊ + β₊J₋ + β₃J₃` applied to `v`.
pub fn element(e: &AlgebraElement, sp: Space, v: &[C]) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); v.len()];
    axpy(&mut out, e.alpha_minus, &a(sp, v));
    axpy(&mut out, e.alpha_plus, &ad(sp, v));
    axpy(&mut out, e.alpha_3, v);
    axpy(&mut out, e.beta_minus, &jp(sp, v));
    axpy(&mut out, e.beta_plus, &jm(sp, v));
    axpy(&mut out, e.beta_3, &j3(sp, v));
    out
}

pub fn element_adjoint(e: &AlgebraElement, sp: Space, v: &[C]) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); v.len()];
    axpy(&mut out, e.alpha_minus.conj(), &ad(sp, v));
    axpy(&mut out, e.alpha_plus.conj(), &a(sp, v));
    axpy(&mut out, e.alpha_3.conj(), v);
    axpy(&mut out, e.beta_minus.conj(), &jm(sp, v));
    axpy(&mut out, e.beta_plus.conj(), &jp(sp, v));
    axpy(&mut out, e.beta_3.conj(), &j3(sp, v));
    out
}

/// `‖(A − z)ψ‖` on the padded space, excluding the top kept level and above,
/// which see the truncation edge.
pub fn residual(e: &AlgebraElement, s: &JointState, z: C) -> f64 {
    let (sp, v) = padded(s);
    let mut r = element(e, sp, &v);
    axpy(&mut r, -z, &v);
    let keep = (s.spec.fock_dim - 1) * sp.spin_dim();
    norm_sqr(&r[..keep]).sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct Moments {
    pub var_a: f64,
    pub var_b: f64,
    pub mean_c: f64,
    pub mean_f: f64,
}

impl Moments {
    /// `½√(⟨C⟩² + ⟨F⟩²)`.
    pub fn delta(&self) -> f64 {
        0.5 * self.mean_c.hypot(self.mean_f)
    }

    pub fn srur_gap(&self) -> f64 {
        self.var_a * self.var_b - self.delta().powi(2)
    }
}

/// Second moments of two hermitian operators from their images of `ψ`,
/// with `C = −i[A, B]` and `F = {A − ⟨A⟩, B − ⟨B⟩}`.
pub fn moments(psi: &[C], apsi: &[C], bpsi: &[C]) -> Moments {
    let ma = dot(psi, apsi).re;
    let mb = dot(psi, bpsi).re;
    let ab = dot(apsi, bpsi);
    Moments {
        var_a: norm_sqr(apsi) - ma * ma,
        var_b: norm_sqr(bpsi) - mb * mb,
        mean_c: 2.0 * ab.im,
        mean_f: 2.0 * ab.re - 2.0 * ma * mb,
    }
}

pub fn x_p(sp: Space, v: &[C]) -> (Vec<C>, Vec<C>) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (av, adv) = (a(sp, v), ad(sp, v));
    let x: Vec<C> = av.iter().zip(&adv).map(|(u, w)| (u + w) * r).collect();
    let p: Vec<C> = av.iter().zip(&adv).map(|(u, w)| (w - u) * C::new(0.0, r)).collect();
    (x, p)
}

pub fn j1_j2(sp: Space, v: &[C]) -> (Vec<C>, Vec<C>) {
    let (u, w) = (jp(sp, v), jm(sp, v));
    let x: Vec<C> = u.iter().zip(&w).map(|(p, m)| (p + m) * 0.5).collect();
    let y: Vec<C> = u.iter().zip(&w).map(|(p, m)| (p - m) * C::new(0.0, -0.5)).collect();
    (x, y)
}

/// `X = (μa + μ̄a† + τJ₊ + τ̄J₋)/√2`, `P = i(μ̄a† − μa + τ̄J₋ − τJ₊)/√2`.
pub fn super_x_p(mu: C, tau: C, sp: Space, v: &[C]) -> (Vec<C>, Vec<C>) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (av, adv, pv, mv) = (a(sp, v), ad(sp, v), jp(sp, v), jm(sp, v));
    let mut x = vec![C::new(0.0, 0.0); v.len()];
    let mut p = vec![C::new(0.0, 0.0); v.len()];
    for k in 0..v.len() {
        x[k] = (mu * av[k] + mu.conj() * adv[k] + tau * pv[k] + tau.conj() * mv[k]) * r;
        p[k] = (mu.conj() * adv[k] - mu * av[k] + tau.conj() * mv[k] - tau * pv[k]) * C::new(0.0, r);
    }
    (x, p)
}

/// `(⟨H⟩, ⟨H²⟩ − ⟨H⟩²)` for `H = w A†A`.
pub fn energy(e: &AlgebraElement, w: f64, s: &JointState) -> (f64, f64) {
    let (sp, v) = padded(s);
    let av = element(e, sp, &v);
    let hv = element_adjoint(e, sp, &av);
    let mean = w * norm_sqr(&av);
    (mean, w * w * norm_sqr(&hv) - mean * mean)
}

/// Dense `J₊, J₋, J₃` on spin `j = two_j/2`, basis `m = −j..j`.
pub fn spin_matrices(two_j: u32) -> (DMatrix<C>, DMatrix<C>, DMatrix<C>) {
    let d = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let mut p = DMatrix::zeros(d, d);
    let mut z = DMatrix::zeros(d, d);
    for k in 0..d {
        let m = k as f64 - j;
        z[(k, k)] = C::new(m, 0.0);
        if k + 1 < d {
            p[(k + 1, k)] = C::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let mm = p.adjoint();
    (p, mm, z)
}

/// Eigenvalues through a complex Schur form.
pub fn eigenvalues(m: &DMatrix<C>) -> Vec<C> {
    let (_, t) = m.clone().schur().unpack();
    (0..t.nrows()).map(|k| t[(k, k)]).collect()
}

pub fn rank(m: &DMatrix<C>, tol: f64) -> usize {
    m.clone().svd(false, false).singular_values.iter().filter(|&&s| s > tol).count()
}

/// Right singular vector of the smallest singular value.
pub fn null_vector(m: &DMatrix<C>) -> Vec<C> {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.unwrap();
    let (k, _) = svd.singular_values.iter().enumerate().min_by(|x, y| x.1.total_cmp(y.1)).unwrap();
    vt.row(k).iter().map(|z| z.conj()).collect()
}

/// `|⟨u, v⟩|²/(‖u‖²‖v‖²)`.
pub fn fidelity(u: &[C], v: &[C]) -> f64 {
    dot(u, v).norm_sqr() / (norm_sqr(u) * norm_sqr(v))
}

/// Minimizer of a unimodal function on `[lo, hi]`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Deterministic pseudo-random complex numbers in the unit square.
pub struct Draws(rand_chacha::ChaCha8Rng);

impl Draws {
    pub fn new(seed: u64) -> Self {
        use rand::SeedableRng;
        Draws(rand_chacha::ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn real(&mut self, lo: f64, hi: f64) -> f64 {
        use rand::Rng;
        self.0.random_range(lo..hi)
    }

    pub fn complex(&mut self) -> C {
        C::new(self.real(-1.0, 1.0), self.real(-1.0, 1.0))
    }

    pub fn two_m(&mut self, two_j: u32) -> i32 {
        use rand::Rng;
        -(two_j as i32) + 2 * self.0.random_range(0..=two_j as i32)
    }
}
