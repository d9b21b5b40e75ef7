//! Command-line front end.
//!
//! Every subcommand reads JSON files and produces named JSON artifacts. With
//! `--output-dir` each artifact is written to `<dir>/<name>.json`; without
//! it a single artifact is printed to stdout and several are printed as one
//! object keyed by name. `pipeline` always writes files (default `.`), and
//! `bench` emits CSV. Failures print `{"error", "stage", "message"}` to
//! stderr and exit with [`GqspError::exit_code`].

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::angles::{compute_angles, plan_circuit, GqspAngles, DEFAULT_ANGLE_TOL};
use crate::bench::{complex_real_ratios, run_bench, to_csv, BenchConfig, PolyKind};
use crate::circuit::{verify_block, CircuitPlan};
use crate::completion::{
    complete, complete_via_roots, completion_objective, validate_completion, CompletionConfig,
    CompletionReport, CompletionStrategy,
};
use crate::error::{GqspError, Result};
use crate::poly::LaurentPoly;
use crate::realize::shifted_coefficients;
use crate::sampling::random_unitary;
use crate::transforms::{
    fit_fourier_series, jacobi_anger, named_function, synth_circulant, synth_diagonal,
    CirculantSpec, FourierFitConfig, TrigKind,
};

#[derive(Debug, Parser)]
#[command(
    name = "gqsp",
    version,
    about = "Compile polynomials on the unit circle into GQSP circuits"
)]
pub struct Cli {
    /// Seed for every random choice (completion restarts, generated unitaries).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Completion objective tolerance; target residual for fourier-fit.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Grid size: completion validation grid, or fourier-fit sample count.
    #[arg(long, global = true)]
    pub grid: Option<usize>,

    /// Write artifacts here instead of printing them.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find Q with |P|² + |Q|² = 1 (writes q, report).
    Complete(CompleteArgs),
    /// Rotation angles from P and Q (writes angles, and circuit with --k-negative).
    Angles(AnglesArgs),
    /// Gate sequence from angles (writes circuit).
    Plan(PlanArgs),
    /// Simulate a circuit and compare its block with P(U) (writes verify).
    Verify(VerifyArgs),
    /// Diagonal operator diag(P(ω^j)) over n qubits (writes synth_diag).
    SynthDiag(SynthDiagArgs),
    /// Circulant operator Σ c_n 𝒫^n (writes synth_circulant).
    SynthCirculant(SynthCirculantArgs),
    /// Truncated Jacobi-Anger expansion (writes poly).
    JacobiAnger(JacobiAngerArgs),
    /// Least-squares Fourier fit of a named function (writes fit).
    FourierFit(FourierFitArgs),
    /// complete → angles → plan → verify, writing q, angles, circuit, verify.
    Pipeline(PipelineArgs),
    /// Objective and optimization timing against degree (CSV).
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Spectral factor polished by L-BFGS.
    MinPhase,
    /// L-BFGS from a random start.
    Optimize,
    /// Root factorization (degree ≤ 32).
    Roots,
}

#[derive(Debug, clap::Args)]
pub struct CompletionArgs {
    #[arg(long, default_value_t = 200_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    /// Run completion restarts concurrently.
    #[arg(long)]
    pub parallel_restarts: bool,
    /// Wall-clock budget for completion, in seconds.
    #[arg(long, value_parser = parse_seconds)]
    pub time_limit: Option<f64>,
}

#[derive(Debug, clap::Args)]
pub struct CompleteArgs {
    /// Polynomial JSON.
    pub input: PathBuf,
    /// Use the root-factorization route.
    #[arg(long, conflicts_with = "method")]
    pub oracle: bool,
    #[arg(long, value_enum, default_value_t = Method::Optimize)]
    pub method: Method,
    #[command(flatten)]
    pub completion: CompletionArgs,
}

#[derive(Debug, clap::Args)]
pub struct AnglesArgs {
    pub p: PathBuf,
    pub q: PathBuf,
    /// Also emit the circuit with this many conjugate signal slots.
    #[arg(long)]
    pub k_negative: Option<usize>,
    /// Cancellation tolerance of the angle recursion.
    #[arg(long, default_value_t = DEFAULT_ANGLE_TOL)]
    pub angle_tol: f64,
}

#[derive(Debug, clap::Args)]
pub struct PlanArgs {
    /// Angles JSON.
    pub angles: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub k_negative: usize,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Circuit JSON.
    pub circuit: PathBuf,
    /// Target polynomial JSON.
    pub target: PathBuf,
    /// random:N:seed, scalar-grid:m, or a path to {"n","re","im"} JSON.
    #[arg(long)]
    pub unitary: String,
    #[arg(long, default_value_t = 1e-8)]
    pub accept_tol: f64,
}

#[derive(Debug, clap::Args)]
pub struct SynthDiagArgs {
    /// Filter polynomial JSON.
    pub filter: PathBuf,
    #[arg(long)]
    pub n_qubits: usize,
    #[command(flatten)]
    pub completion: CompletionArgs,
}

#[derive(Debug, clap::Args)]
pub struct SynthCirculantArgs {
    /// Filter polynomial JSON.
    pub filter: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub completion: CompletionArgs,
}

#[derive(Debug, clap::Args)]
pub struct JacobiAngerArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub eps: f64,
    #[arg(long, default_value = "cos")]
    pub kind: TrigKind,
}

#[derive(Debug, clap::Args)]
pub struct FourierFitArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub delta: f64,
    /// const1, exp-arcsin:<t> or exp-sqrt:<t>.
    #[arg(long)]
    pub function: String,
}

#[derive(Debug, clap::Args)]
pub struct PipelineArgs {
    /// Polynomial JSON.
    pub input: PathBuf,
    /// random:N:seed, scalar-grid:m, or a path; default random:8:<seed>.
    #[arg(long)]
    pub unitary: Option<String>,
    #[arg(long, default_value_t = 1e-8)]
    pub accept_tol: f64,
    #[arg(long, value_enum, default_value_t = Method::MinPhase)]
    pub method: Method,
    #[command(flatten)]
    pub completion: CompletionArgs,
}

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    /// Comma-separated ascending degrees.
    #[arg(long, value_delimiter = ',', default_values_t = (12..=18).map(|e| 1usize << e))]
    pub degrees: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec!["real".to_string(), "complex".to_string()])]
    pub kinds: Vec<String>,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    /// Skip full optimizations above this degree (their cells stay empty).
    #[arg(long, default_value_t = 1 << 14)]
    pub full_opt_max_degree: usize,
    /// Minimum length of one objective timing sample, in milliseconds.
    #[arg(long, default_value_t = crate::bench::MIN_SAMPLE_MS)]
    pub min_sample_ms: f64,
    #[arg(long)]
    pub parallel_restarts: bool,
}

/// An error tagged with the stage that raised it.
#[derive(Debug)]
pub struct Failure {
    pub stage: &'static str,
    pub error: GqspError,
}

impl Failure {
    pub fn to_json(&self) -> Value {
        json!({ "error": self.error.kind(), "stage": self.stage, "message": self.error.to_string() })
    }
}

trait At<T> {
    fn at(self, stage: &'static str) -> std::result::Result<T, Failure>;
}

impl<T> At<T> for Result<T> {
    fn at(self, stage: &'static str) -> std::result::Result<T, Failure> {
        self.map_err(|error| Failure { stage, error })
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let f = Failure {
                stage: "args",
                error: GqspError::InvalidArgument(e.to_string().trim().to_string()),
            };
            eprintln!("{}", f.to_json());
            return 2;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("{}", f.to_json());
            f.error.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Complete(a) => cmd_complete(cli, a),
        Command::Angles(a) => cmd_angles(cli, a),
        Command::Plan(a) => cmd_plan(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
        Command::SynthDiag(a) => cmd_synth_diag(cli, a),
        Command::SynthCirculant(a) => cmd_synth_circulant(cli, a),
        Command::JacobiAnger(a) => cmd_jacobi_anger(cli, a),
        Command::FourierFit(a) => cmd_fourier_fit(cli, a),
        Command::Pipeline(a) => cmd_pipeline(cli, a),
        Command::Bench(a) => cmd_bench(cli, a),
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| GqspError::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| GqspError::InvalidArgument(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn pretty(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn write_artifacts(dir: &Path, artifacts: &[(&str, Value)]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (name, v) in artifacts {
        fs::write(dir.join(format!("{name}.json")), pretty(v)?)?;
    }
    Ok(())
}

fn emit(cli: &Cli, artifacts: Vec<(&str, Value)>) -> Outcome {
    if let Some(dir) = &cli.output_dir {
        return write_artifacts(dir, &artifacts).at("write_output");
    }
    let v = match artifacts.len() {
        1 => artifacts.into_iter().next().unwrap().1,
        _ => Value::Object(
            artifacts
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        ),
    };
    print!("{}", pretty(&v).at("write_output")?);
    Ok(())
}

fn parse_seconds(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err("expected a non-negative number of seconds".into())
    }
}

fn completion_config(cli: &Cli, a: &CompletionArgs) -> CompletionConfig {
    let mut cfg = CompletionConfig {
        max_iters: a.max_iters,
        restarts: a.restarts,
        seed: cli.seed,
        parallel_restarts: a.parallel_restarts,
        time_limit: a.time_limit.map(std::time::Duration::from_secs_f64),
        ..CompletionConfig::default()
    };
    if let Some(tol) = cli.tol {
        cfg.objective_tol = tol;
    }
    cfg
}

fn strategy(cli: &Cli, method: Method, a: &CompletionArgs) -> CompletionStrategy {
    let cfg = completion_config(cli, a);
    match method {
        Method::MinPhase => CompletionStrategy::MinimumPhase(cfg),
        Method::Optimize => CompletionStrategy::Optimization(cfg),
        Method::Roots => CompletionStrategy::Roots,
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// `random:N:seed`, `scalar-grid:m` (`diag(e^{2πik/m})`), or a JSON file.
pub fn parse_unitary(spec: &str) -> Result<DMatrix<Complex64>> {
    let bad = || GqspError::InvalidArgument(format!("bad unitary spec {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["random", n, seed] => {
            let n: usize = n.parse().map_err(|_| bad())?;
            let seed: u64 = seed.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            Ok(random_unitary(n, &mut ChaCha8Rng::seed_from_u64(seed)))
        }
        ["scalar-grid", m] => {
            let m: usize = m.parse().map_err(|_| bad())?;
            if m == 0 {
                return Err(bad());
            }
            let phases: Vec<f64> = (0..m)
                .map(|k| 2.0 * std::f64::consts::PI * k as f64 / m as f64)
                .collect();
            Ok(crate::circuit::phase_diagonal(&phases))
        }
        _ => {
            let raw: MatrixJson = read_json(Path::new(spec))?;
            let shape_ok =
                |rows: &Vec<Vec<f64>>| rows.len() == raw.n && rows.iter().all(|r| r.len() == raw.n);
            if raw.n == 0 || !shape_ok(&raw.re) || !shape_ok(&raw.im) {
                return Err(GqspError::InvalidArgument(format!(
                    "{spec}: re and im must both be {0}×{0}",
                    raw.n
                )));
            }
            Ok(DMatrix::from_fn(raw.n, raw.n, |i, j| {
                Complex64::new(raw.re[i][j], raw.im[i][j])
            }))
        }
    }
}

fn cmd_complete(cli: &Cli, args: &CompleteArgs) -> Outcome {
    let p: LaurentPoly = read_json(&args.input).at("read_input")?;
    let (_, a) = shifted_coefficients(&p, 1.0).at("read_input")?;
    let d = a.len() - 1;
    let (b, report) = if args.oracle || args.method == Method::Roots {
        let start = std::time::Instant::now();
        let b = complete_via_roots(&a).at("complete")?;
        let report = CompletionReport {
            final_objective: completion_objective(&a, &b).at("complete")?,
            iterations: 0,
            grad_norm: 0.0,
            wall_time: start.elapsed().as_secs_f64(),
            restarts_used: 0,
        };
        (b, report)
    } else {
        let (b, report) =
            complete(&a, &strategy(cli, args.method, &args.completion)).at("complete")?;
        (b, report.expect("optimization routes report"))
    };
    let grid = cli.grid.unwrap_or(4 * (2 * d + 1));
    let deviation = validate_completion(&a, &b, grid).at("complete")?;
    let q = LaurentPoly::from_coeffs(b).at("complete")?;
    let mut report = to_value(&report).at("write_output")?;
    report["max_deviation"] = json!(deviation);
    report["grid"] = json!(grid);
    emit(
        cli,
        vec![("q", to_value(&q).at("write_output")?), ("report", report)],
    )
}

fn cmd_angles(cli: &Cli, args: &AnglesArgs) -> Outcome {
    let p: LaurentPoly = read_json(&args.p).at("read_input")?;
    let q: LaurentPoly = read_json(&args.q).at("read_input")?;
    let angles = compute_angles(&p, &q, args.angle_tol).at("angles")?;
    let mut out = vec![("angles", to_value(&angles).at("write_output")?)];
    if let Some(k) = args.k_negative {
        let plan = plan_circuit(&angles, k).at("plan")?;
        out.push(("circuit", to_value(&plan).at("write_output")?));
    }
    emit(cli, out)
}

fn cmd_plan(cli: &Cli, args: &PlanArgs) -> Outcome {
    let angles: GqspAngles = read_json(&args.angles).at("read_input")?;
    let plan = plan_circuit(&angles, args.k_negative).at("plan")?;
    emit(cli, vec![("circuit", to_value(&plan).at("write_output")?)])
}

fn verification(max_error: f64, accept_tol: f64) -> Value {
    json!({ "max_error": max_error, "accept_tol": accept_tol, "passed": max_error <= accept_tol })
}

fn check_accept(max_error: f64, accept_tol: f64) -> Outcome {
    if max_error <= accept_tol {
        Ok(())
    } else {
        Err(GqspError::VerificationFailed {
            error: max_error,
            tol: accept_tol,
        })
        .at("verify")
    }
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Outcome {
    let plan: CircuitPlan = read_json(&args.circuit).at("read_input")?;
    let target: LaurentPoly = read_json(&args.target).at("read_input")?;
    let u = parse_unitary(&args.unitary).at("read_input")?;
    let err = verify_block(&plan, &u, &target).at("verify")?;
    emit(cli, vec![("verify", verification(err, args.accept_tol))])?;
    check_accept(err, args.accept_tol)
}

fn cmd_synth_diag(cli: &Cli, args: &SynthDiagArgs) -> Outcome {
    let p: LaurentPoly = read_json(&args.filter).at("read_input")?;
    let syn = synth_diagonal(
        &p,
        args.n_qubits,
        &strategy(cli, Method::MinPhase, &args.completion),
    )
    .at("synth")?;
    let mut v = to_value(&syn.realization.plan).at("write_output")?;
    v["scale"] = json!(syn.scale());
    v["n_qubits"] = json!(syn.n_qubits);
    v["signal_phases"] = to_value(&syn.signal.phases).at("write_output")?;
    emit(cli, vec![("synth_diag", v)])
}

fn cmd_synth_circulant(cli: &Cli, args: &SynthCirculantArgs) -> Outcome {
    let filter: LaurentPoly = read_json(&args.filter).at("read_input")?;
    let spec = CirculantSpec::new(args.n, filter).at("read_input")?;
    let syn =
        synth_circulant(&spec, &strategy(cli, Method::MinPhase, &args.completion)).at("synth")?;
    emit(
        cli,
        vec![("synth_circulant", to_value(&syn).at("write_output")?)],
    )
}

fn cmd_jacobi_anger(cli: &Cli, args: &JacobiAngerArgs) -> Outcome {
    let p = jacobi_anger(args.kind, args.t, args.eps).at("expand")?;
    emit(cli, vec![("poly", to_value(&p).at("write_output")?)])
}

fn cmd_fourier_fit(cli: &Cli, args: &FourierFitArgs) -> Outcome {
    let f = named_function(&args.function).at("read_input")?;
    let mut cfg = FourierFitConfig::new(args.m, args.delta);
    if let Some(g) = cli.grid {
        cfg.grid_size = g;
    }
    if let Some(t) = cli.tol {
        cfg.target_tol = t;
    }
    let fit = fit_fourier_series(&*f, &cfg).at("fit")?;
    emit(cli, vec![("fit", to_value(&fit).at("write_output")?)])
}

fn cmd_pipeline(cli: &Cli, args: &PipelineArgs) -> Outcome {
    let p: LaurentPoly = read_json(&args.input).at("read_input")?;
    let unitary = args
        .unitary
        .clone()
        .unwrap_or_else(|| format!("random:8:{}", cli.seed));
    let u = parse_unitary(&unitary).at("read_input")?;
    let (k, a) = shifted_coefficients(&p, 1.0).at("read_input")?;

    let (b, _) = complete(&a, &strategy(cli, args.method, &args.completion)).at("complete")?;
    let pp = LaurentPoly::from_coeffs(a).at("complete")?;
    let q = LaurentPoly::from_coeffs(b).at("complete")?;
    let angles = compute_angles(&pp, &q, DEFAULT_ANGLE_TOL).at("angles")?;
    let plan = plan_circuit(&angles, k).at("plan")?;
    let err = verify_block(&plan, &u, &p).at("verify")?;

    let dir = cli.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let artifacts = [
        ("q", to_value(&q).at("write_output")?),
        ("angles", to_value(&angles).at("write_output")?),
        ("circuit", to_value(&plan).at("write_output")?),
        ("verify", verification(err, args.accept_tol)),
    ];
    write_artifacts(&dir, &artifacts).at("write_output")?;
    check_accept(err, args.accept_tol)
}

fn cmd_bench(cli: &Cli, args: &BenchArgs) -> Outcome {
    let kinds = args
        .kinds
        .iter()
        .map(|k| k.parse::<PolyKind>())
        .collect::<Result<Vec<_>>>()
        .at("read_input")?;
    let mut completion = BenchConfig::default().completion;
    completion.parallel_restarts = args.parallel_restarts;
    if let Some(tol) = cli.tol {
        completion.objective_tol = tol;
    }
    let cfg = BenchConfig {
        degrees: args.degrees.clone(),
        kinds,
        repeats: args.repeats,
        seed: cli.seed,
        full_opt_max_degree: args.full_opt_max_degree,
        min_sample_ms: args.min_sample_ms,
        completion,
    };
    let records = run_bench(&cfg).at("bench")?;
    let csv = to_csv(&records);
    match &cli.output_dir {
        Some(dir) => {
            fs::create_dir_all(dir)
                .and_then(|_| fs::write(dir.join("bench.csv"), &csv))
                .map_err(GqspError::from)
                .at("write_output")?;
        }
        None => print!("{csv}"),
    }
    for (d, r) in complex_real_ratios(&records) {
        eprintln!("complex/real objective time at degree {d}: {r:.2}");
    }
    Ok(())
}
