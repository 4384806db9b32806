//! Figure sweeps: one closed-form row per grid point, optionally checked
//! against states built on the truncated space.

use crate::coupled::{element_report, general_squeezed_xp, scs_lambda1, super_xp_coeffs, xp_dispersions_spin_half, SuperXPSpec};
use crate::error::{invalid, Error, Result};
use crate::fock::{build_ops, srur_report, SpaceSpec, Truncation};
use crate::hamiltonian::{
    canonical_eigenstates, energy_stats, noncanonical_dispersion, noncanonical_dispersion_spin_half,
    noncanonical_eigenstates, x_case_beta0_spin_half, x_case_dispersion, x_case_eigenstates, CanonicalParams,
    NonCanonicalParams, XCaseParams,
};
use crate::mus::MusParam;
use crate::oscillator::{ho_dispersions, ho_state_recurrence, HoStateSpec};
use crate::su2::{angular_dispersions, angular_mus};
use crate::{c, C64};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

impl Target {
    pub const ALL: [Target; 10] = [
        Target::Fig1,
        Target::Fig2,
        Target::Fig3,
        Target::Fig4,
        Target::Fig5,
        Target::Fig6,
        Target::Fig7,
        Target::Fig8,
        Target::Fig9,
        Target::Fig10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Fig1 => "fig1",
            Target::Fig2 => "fig2",
            Target::Fig3 => "fig3",
            Target::Fig4 => "fig4",
            Target::Fig5 => "fig5",
            Target::Fig6 => "fig6",
            Target::Fig7 => "fig7",
            Target::Fig8 => "fig8",
            Target::Fig9 => "fig9",
            Target::Fig10 => "fig10",
        }
    }

    /// Default grid of the swept variable.
    pub fn default_grid(self) -> Grid {
        let phi = Grid { start: -FRAC_PI_2, stop: 1.5 * PI, points: 201 };
        match self {
            Target::Fig1 | Target::Fig5 => Grid { start: 0.0, stop: 0.9, points: 100 },
            Target::Fig3 => Grid { start: 0.0, stop: 2.0, points: 201 },
            Target::Fig2 | Target::Fig4 | Target::Fig6 => phi,
            Target::Fig7 => Grid { start: 0.01, stop: 2.0, points: 200 },
            Target::Fig8 => Grid { start: 0.0, stop: 3.0, points: 301 },
            Target::Fig9 | Target::Fig10 => Grid { start: 0.1, stop: 2.0, points: 96 },
        }
    }

    /// Fixed parameters and their defaults.
    pub fn default_fixed(self) -> BTreeMap<String, f64> {
        let kv: &[(&str, f64)] = match self {
            Target::Fig1 | Target::Fig3 => &[("phi", FRAC_PI_6)],
            Target::Fig2 | Target::Fig4 => &[("delta", 0.5)],
            Target::Fig5 => &[("phi", FRAC_PI_6), ("mu", 1.0), ("tau", 1.0)],
            Target::Fig6 => &[("delta", 0.5), ("mu", 1.0), ("tau", 1.0)],
            Target::Fig7 | Target::Fig8 => &[("w", 1.0), ("z", 1.0)],
            Target::Fig9 => &[("w", 1.0), ("z", 1.0), ("theta", PI)],
            Target::Fig10 => &[("w", 1.0), ("z", 1.0), ("rho", 1.0)],
        };
        kv.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    pub fn variable(self) -> &'static str {
        match self {
            Target::Fig1 | Target::Fig3 | Target::Fig5 => "delta",
            Target::Fig2 | Target::Fig4 | Target::Fig6 => "phi",
            Target::Fig7 | Target::Fig9 | Target::Fig10 => "beta",
            Target::Fig8 => "abs_x",
        }
    }

    pub fn columns(self) -> Vec<String> {
        let v: &[&str] = match self {
            Target::Fig1 | Target::Fig2 => &["var_x", "var_p", "Delta"],
            Target::Fig3 | Target::Fig4 => &["var_j1", "var_j2", "Delta"],
            Target::Fig5 | Target::Fig6 => &["var_X", "var_P", "Delta"],
            Target::Fig7 => &["var_h_x0", "var_h_x1", "var_h_x2", "var_h_x4"],
            Target::Fig8 => &["var_h0_plus", "var_h0_minus"],
            Target::Fig9 => &["var_h0_rho1", "var_h0_rho2", "var_h0_rho4"],
            Target::Fig10 => &["var_h0_5pi8", "var_h0_3pi4", "var_h0_7pi8", "var_h0_pi"],
        };
        v.iter().map(|s| s.to_string()).collect()
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown target {s:?}; expected fig1..fig10")))
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return invalid(format!("grid needs at least 2 points, got {}", self.points));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return invalid("grid bounds must be finite");
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub target: Target,
    #[serde(default)]
    pub grid: Option<Grid>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    #[serde(default)]
    pub output_path: Option<String>,
}

impl SweepConfig {
    pub fn new(target: Target) -> Self {
        SweepConfig { target, grid: None, fixed: BTreeMap::new(), output_path: None }
    }

    pub fn grid(&self) -> Grid {
        self.grid.unwrap_or_else(|| self.target.default_grid())
    }

    /// Defaults overlaid with the configured values; unknown names are rejected.
    pub fn resolved_fixed(&self) -> Result<BTreeMap<String, f64>> {
        let mut out = self.target.default_fixed();
        for (k, v) in &self.fixed {
            if !out.contains_key(k) {
                let known: Vec<&str> = out.keys().map(String::as_str).collect();
                return invalid(format!("{} has no fixed parameter {k:?} (known: {})", self.target, known.join(", ")));
            }
            if !v.is_finite() {
                return invalid(format!("fixed parameter {k} must be finite"));
            }
            out.insert(k.clone(), *v);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Comma-separated, `\n`-terminated, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{v:.16e}");
            }
            s.push('\n');
        }
        s
    }
}

struct Fixed(BTreeMap<String, f64>);

impl Fixed {
    fn get(&self, k: &str) -> f64 {
        self.0[k]
    }
}

fn tight() -> Truncation {
    Truncation::auto().with_tol(1e-24)
}

fn mus(delta: f64, phi: f64) -> Result<MusParam> {
    MusParam::from_delta_phi(delta, phi)
}

fn check_fixed(target: Target, f: &Fixed, grid: &Grid) -> Result<()> {
    let vals = grid.values();
    let (lo, hi) = (vals.iter().cloned().fold(f64::INFINITY, f64::min), vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    match target {
        Target::Fig1 | Target::Fig5 => {
            if lo < 0.0 || hi >= 1.0 {
                return invalid(format!("{target}: δ must lie in [0, 1), grid spans [{lo}, {hi}]"));
            }
        }
        Target::Fig2 | Target::Fig4 | Target::Fig6 => {
            let d = f.get("delta");
            let max = if target == Target::Fig4 { f64::INFINITY } else { 1.0 };
            if !(d > 0.0) || d >= max {
                return invalid(format!("{target}: δ = {d} is outside the admissible range"));
            }
        }
        Target::Fig3 => {
            if lo < 0.0 {
                return invalid(format!("{target}: δ must be non-negative"));
            }
        }
        Target::Fig7 | Target::Fig9 | Target::Fig10 => {
            if lo <= 0.0 {
                return invalid(format!("{target}: β must be positive, grid starts at {lo}"));
            }
        }
        Target::Fig8 => {
            if lo < 0.0 {
                return invalid(format!("{target}: |x| must be non-negative"));
            }
        }
    }
    if matches!(target, Target::Fig5 | Target::Fig6) && (f.get("mu") == 0.0 || f.get("tau") == 0.0) {
        return invalid(format!("{target}: μ and τ must be non-zero"));
    }
    if matches!(target, Target::Fig7 | Target::Fig8 | Target::Fig9 | Target::Fig10) && !(f.get("w") > 0.0) {
        return invalid(format!("{target}: w must be positive"));
    }
    if target == Target::Fig9 {
        NonCanonicalParams::simple(1.0, 1.0, f.get("theta")).validate()?;
    }
    if target == Target::Fig10 && !(f.get("rho") > 0.0) {
        return invalid(format!("{target}: ρ must be positive"));
    }
    Ok(())
}

const FIG7_X: [f64; 4] = [0.0, 1.0, 2.0, 4.0];
const FIG9_RHO: [f64; 3] = [1.0, 2.0, 4.0];
const FIG10_THETA: [f64; 4] = [5.0 * PI / 8.0, 3.0 * PI / 4.0, 7.0 * PI / 8.0, PI];

fn x_params(abs_x: f64, beta: f64, w: f64) -> XCaseParams {
    XCaseParams { w, ..XCaseParams::simple(-abs_x, beta) }
}

fn closed_row(target: Target, f: &Fixed, v: f64) -> Result<Vec<f64>> {
    Ok(match target {
        Target::Fig1 | Target::Fig2 => {
            let p = if target == Target::Fig1 { mus(v, f.get("phi"))? } else { mus(f.get("delta"), v)? };
            let d = ho_dispersions(&p)?;
            vec![d.var_a, d.var_b, d.delta]
        }
        Target::Fig3 | Target::Fig4 => {
            let p = if target == Target::Fig3 { mus(v, f.get("phi"))? } else { mus(f.get("delta"), v)? };
            let d = angular_dispersions(&p, 1, 1)?;
            vec![d.var_a, d.var_b, d.delta]
        }
        Target::Fig5 | Target::Fig6 => {
            let p = if target == Target::Fig5 { mus(v, f.get("phi"))? } else { mus(f.get("delta"), v)? };
            let (a, b, d) = xp_dispersions_spin_half(&p, c(f.get("mu")), c(f.get("tau")));
            vec![a, b, d]
        }
        Target::Fig7 => {
            let s = f.get("w").powi(2) * f.get("z").powi(2);
            let mut row = Vec::new();
            for &x in &FIG7_X {
                row.push(if x == 0.0 { s } else { x_case_dispersion(&x_params(x, v, f.get("w")), 1, 1, c(f.get("z")))? });
            }
            row
        }
        Target::Fig8 => {
            let s = f.get("w").powi(2) * f.get("z").powi(2);
            let (p, m) = x_case_beta0_spin_half(v);
            vec![s * p, s * m]
        }
        Target::Fig9 => {
            let s = f.get("w").powi(2) * f.get("z").powi(2);
            FIG9_RHO.iter().map(|&r| s * noncanonical_dispersion_spin_half(r, v, f.get("theta"))).collect()
        }
        Target::Fig10 => {
            let s = f.get("w").powi(2) * f.get("z").powi(2);
            FIG10_THETA.iter().map(|&t| s * noncanonical_dispersion_spin_half(f.get("rho"), v, t)).collect()
        }
    })
}

/// `|closed − dense|` per column, from states built on the truncated space.
fn residual_row(target: Target, f: &Fixed, v: f64, closed: &[f64]) -> Result<Vec<f64>> {
    let diff3 = |r: &crate::fock::DispersionReport| {
        vec![(r.var_a - closed[0]).abs(), (r.var_b - closed[1]).abs(), (r.delta - closed[2]).abs()]
    };
    let maxv = |a: Vec<f64>, b: Vec<f64>| a.into_iter().zip(b).map(|(x, y)| x.max(y)).collect::<Vec<_>>();
    match target {
        Target::Fig1 | Target::Fig2 => {
            let p = if target == Target::Fig1 { mus(v, f.get("phi"))? } else { mus(f.get("delta"), v)? };
            let s = ho_state_recurrence(&HoStateSpec::new(p, C64::new(0.3, -0.2))?, tight())?;
            let ops = build_ops(s.spec);
            Ok(diff3(&srur_report(&ops.x(), &ops.p(), &s)?))
        }
        Target::Fig3 | Target::Fig4 => {
            let p = if target == Target::Fig3 { mus(v, f.get("phi"))? } else { mus(f.get("delta"), v)? };
            let ops = build_ops(SpaceSpec::new(1, 1)?);
            let ms: &[i32] = if p.delta == 0.0 { &[1] } else { &[1, -1] };
            let mut out = vec![0.0; 3];
            for &m in ms {
                let (s, _) = angular_mus(&p, 1, m)?;
                out = maxv(out, diff3(&srur_report(&ops.j1(), &ops.j2(), &s)?));
            }
            Ok(out)
        }
        Target::Fig5 | Target::Fig6 => {
            let p = if target == Target::Fig5 { mus(v, f.get("phi"))? } else { mus(f.get("delta"), v)? };
            let (mu, tau) = (c(f.get("mu")), c(f.get("tau")));
            let spec = SuperXPSpec::new(mu, tau, p, C64::new(0.4, 0.3))?;
            let (x, pp) = super_xp_coeffs(mu, tau);
            let mut out = vec![0.0; 3];
            if p.delta == 0.0 {
                let s = scs_lambda1(&spec, 1, 1, tight())?;
                return Ok(diff3(&element_report(&x, &pp, &s)));
            }
            for m in [1, -1] {
                let s = general_squeezed_xp(&spec, 1, m, tight())?;
                out = maxv(out, diff3(&element_report(&x, &pp, &s.state)));
            }
            Ok(out)
        }
        Target::Fig7 => {
            let (w, z) = (f.get("w"), c(f.get("z")));
            let mut out = Vec::new();
            for (k, &x) in FIG7_X.iter().enumerate() {
                let mut r: f64 = 0.0;
                for m in [1, -1] {
                    let var = if x == 0.0 {
                        let p = CanonicalParams { beta: v, w, ..CanonicalParams::default() };
                        let s = canonical_eigenstates(&p, 1, m, z, tight())?;
                        energy_stats(&p.element(), z, w, &s)?.var
                    } else {
                        let p = x_params(x, v, w);
                        let s = x_case_eigenstates(&p, 1, m, z, tight())?;
                        energy_stats(&p.element(), z, w, &s)?.var
                    };
                    r = r.max((var - closed[k]).abs());
                }
                out.push(r);
            }
            Ok(out)
        }
        Target::Fig8 => {
            let (w, z) = (f.get("w"), c(f.get("z")));
            let mut out = Vec::new();
            for (k, m) in [1, -1].into_iter().enumerate() {
                let var = if v == 0.0 {
                    let p = CanonicalParams { w, ..CanonicalParams::default() };
                    let s = canonical_eigenstates(&p, 1, m, z, tight())?;
                    energy_stats(&p.element(), z, w, &s)?.var
                } else {
                    let p = x_params(v, 0.0, w);
                    let s = x_case_eigenstates(&p, 1, m, z, tight())?;
                    energy_stats(&p.element(), z, w, &s)?.var
                };
                out.push((var - closed[k]).abs());
            }
            Ok(out)
        }
        Target::Fig9 | Target::Fig10 => {
            let (w, z) = (f.get("w"), c(f.get("z")));
            let cases: Vec<(f64, f64)> = if target == Target::Fig9 {
                FIG9_RHO.iter().map(|&r| (r, f.get("theta"))).collect()
            } else {
                FIG10_THETA.iter().map(|&t| (f.get("rho"), t)).collect()
            };
            let mut out = Vec::new();
            for (k, &(rho, theta)) in cases.iter().enumerate() {
                let p = NonCanonicalParams { w, ..NonCanonicalParams::simple(rho, v, theta) };
                let mut r: f64 = 0.0;
                for m in [1, -1] {
                    let s = noncanonical_eigenstates(&p, 1, m, z, tight())?;
                    let var = energy_stats(&p.element(), z, w, &s)?.var;
                    // At b = 0 the two labels split; compare each with its own closed value.
                    let want = if p.is_degenerate() { noncanonical_dispersion(&p, 1, m, z)? } else { closed[k] };
                    r = r.max((var - want).abs());
                }
                out.push(r);
            }
            Ok(out)
        }
    }
}

/// Runs a sweep. With `verify`, a `<column>_residual` column follows the
/// closed-form columns for each plotted quantity.
pub fn run_sweep(cfg: &SweepConfig, verify: bool) -> Result<SweepTable> {
    let grid = cfg.grid();
    grid.validate()?;
    let fixed = Fixed(cfg.resolved_fixed()?);
    let target = cfg.target;
    check_fixed(target, &fixed, &grid)?;
    let cols = target.columns();
    let mut header = vec![target.variable().to_string()];
    header.extend(cols.iter().cloned());
    if verify {
        header.extend(cols.iter().map(|c| format!("{c}_residual")));
    }
    let xs = grid.values();
    let eval = |v: f64| -> Result<Vec<f64>> {
        let closed = closed_row(target, &fixed, v)?;
        let mut row = vec![v];
        row.extend(closed.iter().copied());
        if verify {
            row.extend(residual_row(target, &fixed, v, &closed)?);
        }
        Ok(row)
    };
    let rows: Vec<Result<Vec<f64>>> = if verify {
        let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8);
        let chunk = xs.len().div_ceil(workers);
        std::thread::scope(|s| {
            let handles: Vec<_> = xs.chunks(chunk).map(|part| s.spawn(|| part.iter().map(|&v| eval(v)).collect::<Vec<_>>())).collect();
            handles.into_iter().flat_map(|h| h.join().expect("sweep worker panicked")).collect()
        })
    } else {
        xs.iter().map(|&v| eval(v)).collect()
    };
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    for row in &rows {
        if row.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical(format!("{target}: non-finite value at {} = {}", target.variable(), row[0])));
        }
    }
    Ok(SweepTable { header, rows })
}
