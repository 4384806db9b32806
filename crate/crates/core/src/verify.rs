//! Self-check suites behind `aes-lab verify`.

use crate::coupled::{
    aes_degenerate, aes_general, element_report, general_squeezed_xp, scs_lambda1, super_xp_coeffs, xp_dispersions,
    AlgebraElement, SuperXPSpec,
};
use crate::error::{Error, Result};
use crate::fock::{build_ops, srur_report, SpaceSpec, Truncation};
use crate::hamiltonian::{
    build_hamiltonian, canonical_eigenstates, energy_stats, hermitian_spectrum, jaynes_cummings_limit, ladder_state,
    hamiltonian_apply, CanonicalParams, XCaseParams,
};
use crate::linalg;
use crate::mus::MusParam;
use crate::oracle::{bargmann_solve, bargmann_states, bargmann_norm_sqr, dense_eigen, power_ranks, span_overlap};
use crate::oscillator::{ho_dispersions, ho_state_recurrence, HoStateSpec};
use crate::su2::{angular_dispersions, angular_mus, puri_dispersions, su2_eigenvector, su2_state_jacobi, Su2Coeffs};
use crate::sweep::{run_sweep, Grid, SweepConfig, Target};
use crate::{c, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_6, PI};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Suite {
    All,
    Srur,
    Eigen,
    Oracle,
    Hamiltonian,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "srur" => Suite::Srur,
            "eigen" => Suite::Eigen,
            "oracle" => Suite::Oracle,
            "hamiltonian" => Suite::Hamiltonian,
            _ => return Err(Error::InvalidInput(format!("unknown suite {s:?}; expected all, srur, eigen, oracle or hamiltonian"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    /// Worst measured deviation (or `1 − overlap`).
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub error: Option<String>,
}

impl Check {
    fn new(suite: &'static str, name: &str, tolerance: f64, run: impl FnOnce() -> Result<f64>) -> Check {
        match run() {
            Ok(m) => Check {
                suite,
                name: name.into(),
                measured: m,
                tolerance,
                passed: m.is_finite() && m <= tolerance,
                error: None,
            },
            Err(e) => Check {
                suite,
                name: name.into(),
                measured: f64::NAN,
                tolerance,
                passed: false,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        match &self.error {
            Some(e) => format!("{tag} [{}] {}: error: {e}", self.suite, self.name),
            None => format!("{tag} [{}] {}: {:.3e} (tol {:.0e})", self.suite, self.name, self.measured, self.tolerance),
        }
    }
}

fn rc(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn tight() -> Truncation {
    Truncation::auto().with_tol(1e-24)
}

fn random_mus(rng: &mut ChaCha8Rng, max_delta: f64) -> Result<MusParam> {
    MusParam::from_delta_phi(rng.random_range(0.05..max_delta), rng.random_range(-1.5..4.6))
}

fn sweep_residual(target: Target) -> Result<f64> {
    let t = run_sweep(&SweepConfig::new(target), true)?;
    let k = target.columns().len();
    Ok(t.rows.iter().flat_map(|r| r[1 + k..].iter().copied()).fold(0.0, f64::max))
}

fn srur_checks() -> Vec<Check> {
    const S: &str = "srur";
    let mut out = Vec::new();
    out.push(Check::new(S, "oscillator MUS saturate the SRUR (80 draws)", 1e-8, || {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst: f64 = 0.0;
        for _ in 0..80 {
            let p = random_mus(&mut rng, 0.85)?;
            let s = ho_state_recurrence(&HoStateSpec::new(p, rc(&mut rng))?, Truncation::auto())?;
            let ops = build_ops(s.spec);
            worst = worst.max(srur_report(&ops.x(), &ops.p(), &s)?.srur_residual.abs());
        }
        Ok(worst)
    }));
    out.push(Check::new(S, "angular MUS saturate the SRUR (60 draws, j ≤ 3)", 1e-8, || {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut worst: f64 = 0.0;
        for i in 0..60 {
            let two_j = 1 + (i % 6) as u32;
            let tm = -(two_j as i32) + 2 * rng.random_range(0..=two_j as i32);
            let p = random_mus(&mut rng, 3.0)?;
            let (s, _) = angular_mus(&p, two_j, tm)?;
            let ops = build_ops(s.spec);
            worst = worst.max(srur_report(&ops.j1(), &ops.j2(), &s)?.srur_residual.abs());
        }
        Ok(worst)
    }));
    out.push(Check::new(S, "super-position/momentum MUS saturate the SRUR (60 draws)", 1e-8, || {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut worst: f64 = 0.0;
        for i in 0..60 {
            let two_j = 1 + (i % 3) as u32;
            let tm = -(two_j as i32) + 2 * rng.random_range(0..=two_j as i32);
            let (mu, tau) = (rc(&mut rng) + 1.1, rc(&mut rng));
            let z = rc(&mut rng);
            let (x, p) = super_xp_coeffs(mu, tau);
            let s = if i % 5 == 0 {
                scs_lambda1(&SuperXPSpec::new(mu, tau, MusParam::from_lambda(c(1.0))?, z)?, two_j, tm, tight())?
            } else {
                general_squeezed_xp(&SuperXPSpec::new(mu, tau, random_mus(&mut rng, 0.8)?, z)?, two_j, tm, tight())?.state
            };
            worst = worst.max(element_report(&x, &p, &s).srur_residual.abs());
        }
        Ok(worst)
    }));
    for target in [Target::Fig1, Target::Fig2, Target::Fig3, Target::Fig4, Target::Fig5, Target::Fig6] {
        out.push(Check::new(S, &format!("{target} closed forms vs truncated-space states"), 1e-8, || sweep_residual(target)));
    }
    out.push(Check::new(S, "curves coincide at 1/2 for δ = 0", 0.0, || {
        let d = ho_dispersions(&MusParam::from_delta_phi(0.0, FRAC_PI_6)?)?;
        Ok([d.var_a, d.var_b, d.delta].iter().map(|v| (v - 0.5).abs()).fold(0.0, f64::max))
    }));
    out.push(Check::new(S, "Puri closed forms vs δ = 1 states", 1e-10, || {
        let mut worst: f64 = 0.0;
        for two_j in 1..=4u32 {
            let ops = build_ops(SpaceSpec::new(1, two_j)?);
            for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                for phi in [0.3, 1.2, 2.5, -1.0] {
                    let pd = puri_dispersions(two_j, tm, phi);
                    let (s, _) = angular_mus(&MusParam::from_delta_phi(1.0, phi)?, two_j, tm)?;
                    let r = srur_report(&ops.j1(), &ops.j2(), &s)?;
                    worst = worst.max((r.var_a - pd.var_a).abs()).max((r.var_b - pd.var_b).abs()).max((r.delta - pd.delta).abs());
                }
            }
        }
        Ok(worst)
    }));
    out.push(Check::new(S, "general-δ forms approach the Puri limit at δ = 1 ± 1e−6", 1e-4, || {
        let mut worst: f64 = 0.0;
        for two_j in 1..=4u32 {
            for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                for phi in [0.3, 1.2, 2.5, -1.0] {
                    let pd = puri_dispersions(two_j, tm, phi);
                    for d in [1.0 - 1e-6, 1.0 + 1e-6] {
                        let g = angular_dispersions(&MusParam::from_delta_phi(d, phi)?, two_j, tm)?;
                        worst = worst
                            .max((g.var_a - pd.var_a).abs())
                            .max((g.var_b - pd.var_b).abs())
                            .max((g.delta - pd.delta).abs());
                    }
                }
            }
        }
        Ok(worst)
    }));
    out.push(Check::new(S, "⟨C⟩ closed form vs dense (j ≤ 3)", 1e-8, || {
        let mut worst: f64 = 0.0;
        let (mu, tau) = (C64::new(0.9, 0.2), C64::new(0.5, -0.6));
        for two_j in 1..=3u32 {
            for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                let spec = SuperXPSpec::new(mu, tau, MusParam::from_delta_phi(0.4, 0.7)?, C64::new(0.3, 0.1))?;
                let s = general_squeezed_xp(&spec, two_j, tm, tight())?;
                let (x, p) = super_xp_coeffs(mu, tau);
                let r = element_report(&x, &p, &s.state);
                let (_, mc) = xp_dispersions(&spec, two_j, tm)?;
                worst = worst.max((r.mean_c - mc).abs());
            }
        }
        Ok(worst)
    }));
    out
}

fn eigen_checks() -> Vec<Check> {
    const S: &str = "eigen";
    let mut out = Vec::new();
    out.push(Check::new(S, "su(2) spectra equal {m·b} (50 draws, j ≤ 3)", 1e-10, || {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut worst: f64 = 0.0;
        for i in 0..50 {
            let k = Su2Coeffs::new(rc(&mut rng), rc(&mut rng), rc(&mut rng));
            let two_j = 1 + (i % 6) as u32;
            let e = dense_eigen(&k.matrix(two_j))?;
            for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                let want = k.b * (tm as f64 / 2.0);
                let d = e.values.iter().map(|v| (v - want).norm()).fold(f64::INFINITY, f64::min);
                worst = worst.max(d);
            }
        }
        Ok(worst)
    }));
    out.push(Check::new(S, "b = 0 gives one Jordan block (ranks of powers)", 0.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let mut bad = 0.0;
        for i in 0..20 {
            let (bm, bp) = (rc(&mut rng), rc(&mut rng));
            let k = Su2Coeffs::new(bm, bp, (-(bp * bm) * 4.0).sqrt());
            let two_j = 1 + (i % 6) as u32;
            let ranks = power_ranks(&k.matrix(two_j), c(0.0), 1e-9);
            let want: Vec<usize> = (1..=two_j as usize + 1).map(|p| two_j as usize + 1 - p).collect();
            if ranks != want {
                bad += 1.0;
            }
        }
        Ok(bad)
    }));
    out.push(Check::new(S, "Jacobi closed form vs disentangled operator (1 − overlap)", 1e-10, || {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let k = Su2Coeffs::new(rc(&mut rng), rc(&mut rng), rc(&mut rng));
            for two_j in 1..=4u32 {
                for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                    let a = su2_state_jacobi(&k, two_j, tm)?;
                    let b = su2_eigenvector(&k, two_j, tm)?;
                    worst = worst.max(1.0 - a.fidelity(&b)?);
                }
            }
        }
        Ok(worst)
    }));
    out.push(Check::new(S, "coupled eigenstate residuals (general and degenerate)", 1e-8, || {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            let am = rc(&mut rng) + 1.2;
            let mut e = AlgebraElement::new(am, am * rc(&mut rng) * 0.6, rc(&mut rng), rc(&mut rng), rc(&mut rng), rc(&mut rng));
            if i % 2 == 1 {
                e.beta_3 = (-(e.beta_plus * e.beta_minus) * 4.0).sqrt();
            }
            let two_j = 1 + (i % 3) as u32;
            for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                let rho = rc(&mut rng);
                let s = if i % 2 == 0 { aes_general(&e, two_j, tm, rho, Truncation::auto())? } else { aes_degenerate(&e, two_j, tm, rho, Truncation::auto())? };
                worst = worst.max(e.residual(&s.state, s.eigenvalue));
            }
        }
        Ok(worst)
    }));
    out
}

fn oracle_checks() -> Vec<Check> {
    const S: &str = "oracle";
    let mut out = Vec::new();
    out.push(Check::new(S, "Bargmann solver vs operator construction, 50 draws (1 − overlap)", 1e-10, || {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut worst: f64 = 0.0;
        for i in 0..50 {
            let am = rc(&mut rng) + 1.2;
            let mut e = AlgebraElement::new(am, am * rc(&mut rng) * 0.6, rc(&mut rng), rc(&mut rng), rc(&mut rng), rc(&mut rng));
            match i % 5 {
                1 => e.beta_plus = c(0.0),
                2 => e.beta_minus = c(0.0),
                3 => e.beta_3 = c(0.0),
                _ => {}
            }
            let two_j = 1 + (i % 3) as u32;
            let tm = -(two_j as i32) + 2 * rng.random_range(0..=two_j as i32);
            let b = e.su2().b;
            let s = aes_general(&e, two_j, tm, rc(&mut rng), Truncation::auto())?;
            let sols = bargmann_solve(&e, two_j, s.eigenvalue)?;
            let want = b * (tm as f64 / 2.0);
            let pick = sols
                .iter()
                .min_by(|x, y| (x.lambda - want).norm().total_cmp(&(y.lambda - want).norm()))
                .ok_or_else(|| Error::Numerical("no Bargmann solution".into()))?;
            let o = pick.to_fock(Truncation::auto())?;
            worst = worst.max(1.0 - o.fidelity(&s.state)?);
        }
        Ok(worst)
    }));
    out.push(Check::new(S, "degenerate branches lie in the Bargmann solution span (1 − overlap)", 1e-10, || {
        let (bp, bm) = (C64::new(0.4, 0.3), C64::new(-0.2, 0.9));
        let elems = [
            AlgebraElement::new(C64::new(1.0, 0.3), C64::new(0.2, 0.1), c(0.2), C64::new(0.7, -0.4), c(0.0), c(0.0)),
            AlgebraElement::new(C64::new(0.8, -0.3), c(0.1), c(0.0), c(0.0), C64::new(0.5, 0.6), c(0.0)),
            AlgebraElement::new(c(1.0), C64::new(0.0, 0.3), c(0.0), bm, bp, (-(bp * bm) * 4.0).sqrt()),
        ];
        let mut worst: f64 = 0.0;
        for e in &elems {
            for two_j in 1..=3u32 {
                let rho = C64::new(-0.3, 0.5);
                let basis = bargmann_states(e, two_j, rho + e.alpha_3, Truncation::auto())?;
                for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                    let s = aes_degenerate(e, two_j, tm, rho, Truncation::auto())?.state;
                    worst = worst.max(1.0 - span_overlap(&s, &basis)?);
                }
            }
        }
        Ok(worst)
    }));
    out.push(Check::new(S, "Bargmann norm equals coefficient norm", 1e-10, || {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let mut worst: f64 = 0.0;
        for deg in [1usize, 4, 9, 15] {
            let mono: Vec<C64> = (0..=deg).map(|_| rc(&mut rng)).collect();
            let mut fact = 1.0;
            let mut l2 = 0.0;
            for (k, a) in mono.iter().enumerate() {
                if k > 0 {
                    fact *= k as f64;
                }
                l2 += a.norm_sqr() * fact;
            }
            worst = worst.max((bargmann_norm_sqr(&mono) - l2).abs() / l2);
        }
        Ok(worst)
    }));
    out
}

fn hamiltonian_checks() -> Vec<Check> {
    const S: &str = "hamiltonian";
    let mut out = Vec::new();
    let p = CanonicalParams {
        alpha: 0.3,
        theta_minus: 0.4,
        theta_plus: -0.7,
        beta: 0.6,
        varphi_minus: 0.2,
        varphi_plus: 1.1,
        r: 0.5,
        varphi_3: 0.0,
        alpha_3: C64::new(0.2, -0.1),
        w: 1.3,
    };
    out.push(Check::new(S, "canonical var_E = w²|z|²", 1e-8, || {
        let mut worst: f64 = 0.0;
        for two_j in 1..=3u32 {
            for tm in (-(two_j as i32)..=two_j as i32).step_by(2) {
                let z = C64::new(0.7, -0.4);
                let s = canonical_eigenstates(&p, two_j, tm, z, tight())?;
                let st = energy_stats(&p.element(), z, p.w, &s)?;
                worst = worst.max((st.var - p.w * p.w * z.norm_sqr()).abs()).max((st.mean - p.w * z.norm_sqr()).abs());
            }
        }
        Ok(worst)
    }));
    out.push(Check::new(S, "ladder states: H|ñ⟩ = nw|ñ⟩", 1e-6, || {
        let mut worst: f64 = 0.0;
        for n in 0..4 {
            for tm in [-1, 1] {
                let s = ladder_state(&p, 1, tm, n, tight())?;
                let r = hamiltonian_apply(&p.element(), p.w, &s) - &s.coeffs * c(n as f64 * p.w);
                let keep = (s.spec.fock_dim - 2) * 2;
                worst = worst.max(r.rows(0, keep).norm());
            }
        }
        Ok(worst)
    }));
    out.push(Check::new(S, "H and H₀ spectra {nw}, j = ½", 1e-6, || {
        let q = CanonicalParams { alpha: 0.1, alpha_3: C64::new(0.1, 0.05), ..p };
        let spec = SpaceSpec::new(70, 1)?;
        let h = hermitian_spectrum(&build_hamiltonian(&q.element(), q.w, spec)?)?;
        let h0 = hermitian_spectrum(&build_hamiltonian(&q.element0(), q.w, spec)?)?;
        let mut worst: f64 = 0.0;
        for k in 0..20 {
            let want = (k / 2) as f64 * q.w;
            worst = worst.max((h[k] - want).abs()).max((h0[k] - want).abs());
        }
        Ok(worst)
    }));
    for target in [Target::Fig7, Target::Fig8, Target::Fig9, Target::Fig10] {
        out.push(Check::new(S, &format!("{target} closed forms vs eigenstate energy variance"), 1e-6, || sweep_residual(target)));
    }
    out.push(Check::new(S, "fig8 minimum 2√2 − 2 at |x| = √2 − 1", 1e-4, || {
        let mut cfg = SweepConfig::new(Target::Fig8);
        cfg.grid = Some(Grid { start: 0.3, stop: 0.5, points: 2001 });
        let t = run_sweep(&cfg, false)?;
        let (mut bi, mut bv) = (0, f64::INFINITY);
        for (i, r) in t.rows.iter().enumerate() {
            if r[2] < bv {
                (bi, bv) = (i, r[2]);
            }
        }
        Ok((bv - (2.0 * 2f64.sqrt() - 2.0)).abs().max((t.rows[bi][0] - (2f64.sqrt() - 1.0)).abs()))
    }));
    out.push(Check::new(S, "Jaynes–Cummings limit entrywise, N = 32", 1e-10, || {
        let (w, w0) = (1.3, 0.7);
        let x = XCaseParams { theta_minus: 0.4, varphi_plus: 0.4, w, ..XCaseParams::simple(-w0 / w, 0.0) };
        let spec = SpaceSpec::new(32, 1)?;
        let lim = build_hamiltonian(&x.element0(), w, spec)?;
        Ok(linalg::max_abs_diff(&lim.matrix, &jaynes_cummings_limit(w, w0, 32)?.matrix))
    }));
    out.push(Check::new(S, "symmetry about θ = π", 1e-12, || {
        let mut worst: f64 = 0.0;
        for rho in [1.0, 2.0, 4.0] {
            for k in 1..100 {
                let beta = 0.02 * k as f64;
                for t in [PI / 8.0, PI / 4.0, 3.0 * PI / 8.0] {
                    let a = crate::hamiltonian::noncanonical_dispersion_spin_half(rho, beta, PI - t);
                    let b = crate::hamiltonian::noncanonical_dispersion_spin_half(rho, beta, PI + t);
                    worst = worst.max((a - b).abs());
                }
            }
        }
        Ok(worst)
    }));
    out.push(Check::new(S, "SRUR of (𝒳, 𝒫) in supersqueezed states", 1e-8, || {
        let q = CanonicalParams { alpha: 0.1, ..p };
        let a = q.element();
        let ad = a.adjoint();
        let mut worst: f64 = 0.0;
        for chi in [c(0.0), C64::new(0.3, 0.2)] {
            let s = crate::hamiltonian::supersqueezed_state(&q, 1, -1, C64::new(0.4, 0.1), chi, tight())?;
            let av = a.apply(s.spec, &s.coeffs);
            let adv = ad.apply(s.spec, &s.coeffs);
            let x = (&av + &adv) * c(FRAC_1_SQRT_2);
            let pp = (&adv - &av) * C64::new(0.0, FRAC_1_SQRT_2);
            worst = worst.max(crate::fock::report_from_images(&s.coeffs, &x, &pp).srur_residual.abs());
        }
        Ok(worst)
    }));
    out
}

pub fn run_verify(suite: Suite) -> Vec<Check> {
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::Srur) {
        out.extend(srur_checks());
    }
    if matches!(suite, Suite::All | Suite::Eigen) {
        out.extend(eigen_checks());
    }
    if matches!(suite, Suite::All | Suite::Oracle) {
        out.extend(oracle_checks());
    }
    if matches!(suite, Suite::All | Suite::Hamiltonian) {
        out.extend(hamiltonian_checks());
    }
    out
}
