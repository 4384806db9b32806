use aes_lab::coupled::{aes_state, general_squeezed_xp, scs_lambda1, AlgebraElement, SuperXPSpec};
use aes_lab::hamiltonian::{
    canonical_eigenstates, ladder_state, noncanonical_eigenstates, x_case_eigenstates, CanonicalParams,
    NonCanonicalParams, XCaseParams,
};
use aes_lab::oscillator::{ho_state_recurrence, HoStateSpec};
use aes_lab::su2::{angular_coeffs, angular_mus};
use aes_lab::sweep::{run_sweep, Grid, SweepConfig, Target};
use aes_lab::verify::{run_verify, Suite};
use aes_lab::{Error, JointState, MusParam, SpaceSpec, Truncation, C64};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "aes-lab", version, about = "Algebra eigenstates of h(1) + su(2): figure sweeps, self-checks and state dumps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a figure's data as CSV.
    Sweep {
        /// JSON sweep config; flags given here override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// fig1 .. fig10
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        start: Option<f64>,
        #[arg(long)]
        stop: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// Shorthand for `--set phi=VALUE`.
        #[arg(long)]
        phi: Option<f64>,
        /// Fixed parameter override, `NAME=VALUE`; repeatable.
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
        /// Output file; defaults to the config's output_path, then stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Append residual columns against constructed states.
        #[arg(long)]
        verify: bool,
    },
    /// Run self-check suites: all, srur, eigen, oracle, hamiltonian.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Build one state and print it as JSON.
    State {
        /// Inline JSON, or `@path` to read it from a file.
        #[arg(long)]
        json: String,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum StateRequest {
    /// Eigenstate of `x + iλp`.
    Oscillator { delta: f64, phi: f64, beta: C64 },
    /// Eigenstate of `J₁ + iλJ₂`.
    Angular { delta: f64, phi: f64, two_j: u32, two_m: i32 },
    /// Eigenstate of a general element with spin-free eigenvalue part `rho`.
    Element { element: AlgebraElement, two_j: u32, two_m: i32, rho: C64 },
    /// Eigenstate of `X + iλP` with `X, P` the supersymmetric position and momentum.
    SuperXp { mu: C64, tau: C64, delta: f64, phi: f64, z: C64, two_j: u32, two_m: i32 },
    Canonical { params: CanonicalParams, two_j: u32, two_m: i32, z: C64 },
    Ladder { params: CanonicalParams, two_j: u32, two_m: i32, n: usize },
    XCase { params: XCaseParams, two_j: u32, two_m: i32, z: C64 },
    NonCanonical { params: NonCanonicalParams, two_j: u32, two_m: i32, z: C64 },
}

#[derive(Serialize)]
struct StateDump {
    spec: SpaceSpec,
    coeffs: Vec<C64>,
    eigenvalue: Option<C64>,
    residual: f64,
    tail_mass: f64,
}

fn tight() -> Truncation {
    Truncation::auto().with_tol(1e-24)
}

fn build_state(req: StateRequest) -> aes_lab::Result<StateDump> {
    let (state, elem, z): (JointState, Option<AlgebraElement>, Option<C64>) = match req {
        StateRequest::Oscillator { delta, phi, beta } => {
            let p = MusParam::from_delta_phi(delta, phi)?;
            let s = ho_state_recurrence(&HoStateSpec::new(p, beta)?, Truncation::auto())?;
            let l = p.lambda;
            let r = std::f64::consts::FRAC_1_SQRT_2;
            let e = AlgebraElement::new((l + 1.0) * r, (C64::new(1.0, 0.0) - l) * r, C64::default(), C64::default(), C64::default(), C64::default());
            (s, Some(e), Some(beta))
        }
        StateRequest::Angular { delta, phi, two_j, two_m } => {
            let p = MusParam::from_delta_phi(delta, phi)?;
            let (s, ev) = angular_mus(&p, two_j, two_m)?;
            let k = angular_coeffs(&p);
            let e = AlgebraElement::new(C64::default(), C64::default(), C64::default(), k.beta_minus, k.beta_plus, k.beta_3);
            (s, Some(e), Some(ev))
        }
        StateRequest::Element { element, two_j, two_m, rho } => {
            let s = aes_state(&element, two_j, two_m, rho, Truncation::auto())?;
            (s.state, Some(element), Some(s.eigenvalue))
        }
        StateRequest::SuperXp { mu, tau, delta, phi, z, two_j, two_m } => {
            let spec = SuperXPSpec::new(mu, tau, MusParam::from_delta_phi(delta, phi)?, z)?;
            let s = if delta == 0.0 {
                scs_lambda1(&spec, two_j, two_m, tight())?
            } else {
                general_squeezed_xp(&spec, two_j, two_m, tight())?.state
            };
            (s, Some(spec.element()), Some(z))
        }
        StateRequest::Canonical { params, two_j, two_m, z } => {
            (canonical_eigenstates(&params, two_j, two_m, z, tight())?, Some(params.element()), Some(z))
        }
        StateRequest::Ladder { params, two_j, two_m, n } => (ladder_state(&params, two_j, two_m, n, tight())?, None, None),
        StateRequest::XCase { params, two_j, two_m, z } => {
            (x_case_eigenstates(&params, two_j, two_m, z, tight())?, Some(params.element()), Some(z))
        }
        StateRequest::NonCanonical { params, two_j, two_m, z } => {
            (noncanonical_eigenstates(&params, two_j, two_m, z, tight())?, Some(params.element()), Some(z))
        }
    };
    let residual = match (elem, z) {
        (Some(e), Some(z)) => e.residual(&state, z),
        _ => 0.0,
    };
    Ok(StateDump {
        spec: state.spec,
        coeffs: state.coeffs.iter().copied().collect(),
        eigenvalue: z,
        residual,
        tail_mass: state.norm_tail,
    })
}

fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::InvalidInput(_) | Error::NoSolution(_) | Error::ShapeMismatch { .. } | Error::Overflow { .. } => ExitCode::from(2),
        _ => ExitCode::from(3),
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    exit_for(&e)
}

#[allow(clippy::too_many_arguments)]
fn sweep_config(
    config: Option<PathBuf>,
    target: Option<String>,
    start: Option<f64>,
    stop: Option<f64>,
    points: Option<usize>,
    phi: Option<f64>,
    set: Vec<String>,
) -> aes_lab::Result<SweepConfig> {
    let mut cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<SweepConfig>(&text)
                .map_err(|e| Error::InvalidInput(format!("bad config {}: {e}", path.display())))?
        }
        None => {
            let t = target.as_deref().ok_or_else(|| Error::InvalidInput("either --config or --target is required".into()))?;
            SweepConfig::new(t.parse()?)
        }
    };
    if let Some(t) = &target {
        cfg.target = t.parse::<Target>()?;
    }
    let g = cfg.grid();
    cfg.grid = Some(Grid {
        start: start.unwrap_or(g.start),
        stop: stop.unwrap_or(g.stop),
        points: points.unwrap_or(g.points),
    });
    if let Some(p) = phi {
        cfg.fixed.insert("phi".into(), p);
    }
    for kv in set {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::InvalidInput(format!("--set expects NAME=VALUE, got {kv:?}")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::InvalidInput(format!("--set {k}: {v:?} is not a number")))?;
        cfg.fixed.insert(k.trim().to_string(), v);
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep { config, target, start, stop, points, phi, set, output, verify } => {
            let cfg = match sweep_config(config, target, start, stop, points, phi, set) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let table = match run_sweep(&cfg, verify) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            let csv = table.to_csv();
            match output.or(cfg.output_path.map(PathBuf::from)) {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, csv) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(3);
                    }
                }
                None => print!("{csv}"),
            }
            ExitCode::SUCCESS
        }
        Command::Verify { suite } => {
            let suite: Suite = match suite.parse() {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let t0 = Instant::now();
            let checks = run_verify(suite);
            let failed = checks.iter().filter(|c| !c.passed).count();
            for c in &checks {
                println!("{}", c.line());
            }
            println!("{} checks, {} failed, {:.2} s", checks.len(), failed, t0.elapsed().as_secs_f64());
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::State { json } => {
            let text = match json.strip_prefix('@') {
                Some(path) => match std::fs::read_to_string(path) {
                    Ok(t) => t,
                    Err(e) => return fail(Error::InvalidInput(format!("cannot read {path}: {e}"))),
                },
                None => json,
            };
            let req: StateRequest = match serde_json::from_str(&text) {
                Ok(r) => r,
                Err(e) => return fail(Error::InvalidInput(format!("bad state request: {e}"))),
            };
            match build_state(req) {
                Ok(d) => {
                    println!("{}", serde_json::to_string(&d).expect("state serializes"));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
