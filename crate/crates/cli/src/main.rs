//! `dimer-qc`: sweeps, surfaces and self-checks for dimer quantum correlations.
//!
//! Exit codes: 0 success, 1 usage error, 2 check failure, 3 I/O error.

mod config;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dimer_qc::check::{run_check, CheckConfig};
use dimer_qc::oracle::DEFAULT_DEGENERACY_TOL;
use dimer_qc::sweep::{self, Method, SweepSpec};
use dimer_qc::{Error, OptimizerConfig};

use config::FileConfig;

const EXIT_USAGE: u8 = 1;
const EXIT_CHECK: u8 = 2;
const EXIT_IO: u8 = 3;

const DEFAULT_BETA: &str = "0.1:7:70";
const DEFAULT_EPS: &str = "0.1,0.2,0.3,0.5,0.7,0.9";

#[derive(Parser, Debug)]
#[command(name = "dimer-qc", version, about = "Quantum correlations of a two-spin NMR dimer")]
struct Cli {
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Wide table: one row per (beta, epsilon) point.
    Sweep(GridArgs),
    /// Long table (beta, epsilon, measure, value) for surface plots.
    Surface(GridArgs),
    /// Run the invariant suite; exits 2 if anything fails.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Inverse temperatures: `v1,v2,...` or `min:max:steps`.
    #[arg(long, value_name = "LIST|MIN:MAX:STEPS", allow_hyphen_values = true)]
    beta: Option<String>,
    /// Polarisation parameters in [0, 1], same syntax as --beta.
    #[arg(long, value_name = "LIST|MIN:MAX:STEPS", allow_hyphen_values = true)]
    eps: Option<String>,
    /// Comma-separated subset of qd,gqd,min.
    #[arg(long)]
    measures: Option<String>,
    /// closed, oracle or both.
    #[arg(long)]
    method: Option<String>,
    /// Output CSV; standard output if omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Seed for the random-state checks.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Polar grid rows of the axis search.
    #[arg(long, value_name = "N")]
    grid_theta: Option<usize>,
    /// Azimuthal grid columns of the axis search.
    #[arg(long, value_name = "N")]
    grid_phi: Option<usize>,
    /// Nelder–Mead iterations after the grid (0 = grid only).
    #[arg(long, value_name = "N")]
    refine_iters: Option<usize>,
    /// Polish convergence tolerance.
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    /// Reduced-state eigenvalue gap treated as degenerate for MIN.
    #[arg(long, value_name = "X")]
    degeneracy_tol: Option<f64>,
    /// Worker threads (0 = one per core).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
}

/// Something that ends the process with a specific code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure { code: EXIT_IO, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Csv(_) => Failure::io(e.to_string()),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<config::ConfigError> for Failure {
    fn from(e: config::ConfigError) -> Self {
        match e {
            config::ConfigError::Io(..) => Failure::io(e.to_string()),
            config::ConfigError::Parse(..) => Failure::usage(e.to_string()),
        }
    }
}

struct OracleSettings {
    config: OptimizerConfig,
    degeneracy_tol: f64,
    workers: usize,
}

fn oracle_settings(args: &OracleArgs, file: &FileConfig) -> OracleSettings {
    let d = OptimizerConfig::default();
    OracleSettings {
        config: OptimizerConfig {
            grid_theta: args.grid_theta.or(file.grid_theta).unwrap_or(d.grid_theta),
            grid_phi: args.grid_phi.or(file.grid_phi).unwrap_or(d.grid_phi),
            refine_iters: args.refine_iters.or(file.refine_iters).unwrap_or(d.refine_iters),
            tol: args.tol.or(file.tol).unwrap_or(d.tol),
        },
        degeneracy_tol: args.degeneracy_tol.or(file.degeneracy_tol).unwrap_or(DEFAULT_DEGENERACY_TOL),
        workers: args.workers.or(file.workers).unwrap_or(0),
    }
}

fn sweep_spec(args: &GridArgs, file: &FileConfig) -> Result<(SweepSpec, usize), Failure> {
    let axis = |flag: &Option<String>, setting: &Option<config::AxisSetting>, default: &str| {
        let text = flag.clone().or_else(|| setting.as_ref().map(|s| s.to_arg())).unwrap_or_else(|| default.to_owned());
        sweep::parse_axis(&text).map_err(Failure::from)
    };
    let beta = axis(&args.beta, &file.beta, DEFAULT_BETA)?;
    let eps = axis(&args.eps, &file.eps, DEFAULT_EPS)?;
    let mut spec = SweepSpec::new(beta, eps);
    if let Some(m) = args.measures.as_ref().or(file.measures.as_ref()) {
        spec.measures = sweep::parse_measures(m)?;
    }
    if let Some(m) = args.method.as_ref().or(file.method.as_ref()) {
        spec.method = m.parse::<Method>()?;
    }
    spec.output_path = args.out.clone().or_else(|| file.out.clone());
    let oracle = oracle_settings(&args.oracle, file);
    spec.oracle_config = oracle.config;
    spec.degeneracy_tol = oracle.degeneracy_tol;
    spec.validate()?;
    Ok((spec, oracle.workers))
}

/// Names the output file in I/O errors, which are otherwise anonymous.
fn with_path(e: Error, spec: &SweepSpec) -> Failure {
    match (&e, &spec.output_path) {
        (Error::Io(_) | Error::Csv(_), Some(path)) => Failure::io(format!("{}: {e}", path.display())),
        _ => e.into(),
    }
}

fn write_stdout(write: impl FnOnce(&mut io::StdoutLock<'_>) -> dimer_qc::Result<()>) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    write(&mut out)?;
    out.flush().map_err(|e| Failure::io(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match &cli.command {
        Command::Sweep(args) => {
            let (spec, workers) = sweep_spec(args, &file)?;
            let rows = sweep::run_sweep(&spec, workers).map_err(|e| with_path(e, &spec))?;
            log::info!("evaluated {} points", rows.len());
            if spec.output_path.is_none() {
                write_stdout(|out| sweep::write_sweep_csv(&rows, out))?;
            }
        }
        Command::Surface(args) => {
            let (spec, workers) = sweep_spec(args, &file)?;
            let rows = sweep::emit_surface(&spec, workers).map_err(|e| with_path(e, &spec))?;
            log::info!("emitted {} surface rows", rows.len());
            if spec.output_path.is_none() {
                write_stdout(|out| sweep::write_surface_csv(&rows, out))?;
            }
        }
        Command::Check(args) => {
            let oracle = oracle_settings(&args.oracle, &file);
            oracle.config.validate()?;
            let cfg = CheckConfig {
                oracle: oracle.config,
                degeneracy_tol: oracle.degeneracy_tol,
                seed: args.seed.or(file.seed).unwrap_or(CheckConfig::default().seed),
                ..CheckConfig::default()
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(oracle.workers)
                .build()
                .map_err(|e| Failure::usage(format!("cannot start worker pool: {e}")))?;
            let report = pool.install(|| run_check(&cfg));
            println!("{report}");
            if !report.passed() {
                let names: Vec<&str> = report.failures().map(|o| o.name).collect();
                return Err(Failure {
                    code: EXIT_CHECK,
                    message: format!("failed checks: {}", names.join(", ")),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dimer-qc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
