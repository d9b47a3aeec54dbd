//! `greensign`: evaluate kernels, dump cell matrices, sweep sign regions,
//! run the monotone solver and the invariant suite.

mod check;
mod config;
mod eval;
mod matrix;
mod output;
mod region;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use greensign::{ProblemParams, QuadMode, QuadratureCfg};

use config::Settings;

/// Exit codes.
pub mod code {
    pub const OK: u8 = 0;
    pub const CHECK_FAILED: u8 = 1;
    pub const SINGULAR_PARAMETERS: u8 = 2;
    pub const SINGULAR_MATRIX: u8 = 3;
    pub const GATE_FAILED: u8 = 4;
    pub const MONOTONICITY: u8 = 5;
    pub const NON_FINITE: u8 = 6;
    pub const DOMAIN: u8 = 7;
    pub const USAGE: u8 = 64;
    pub const IO: u8 = 74;
}

/// Inconsistent or missing settings.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

#[derive(Parser)]
#[command(
    name = "greensign",
    version,
    about = "Green's functions and constant-sign regions for periodic problems"
)]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true, env = "GREENSIGN_THREADS")]
    threads: Option<usize>,
    /// key = value settings file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a kernel at sided points, along a line, or integrate it.
    Eval(eval::EvalArgs),
    /// Print the cell matrix, its inverse and determinant as JSON.
    Matrix(matrix::MatrixArgs),
    /// Classify a lattice of (m, M) by the sign of the kernel.
    Region(region::RegionArgs),
    /// Run the monotone iteration for a built-in nonlinearity.
    Solve(solve::SolveArgs),
    /// Run the invariant suite.
    Check(check::CheckArgs),
}

/// Problem parameters and quadrature settings shared by all subcommands.
#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    /// Coefficient of the reflected (or plain) term.
    #[arg(short = 'm', long = "m", allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Coefficient of the piecewise-constant term.
    #[arg(short = 'M', long = "big-m", allow_negative_numbers = true)]
    pub big_m: Option<f64>,
    /// Half-period (reflection) or period (ODE).
    #[arg(short = 'T', long = "horizon")]
    pub horizon: Option<f64>,
    /// `analytic` (closed-form integrals where available) or `adaptive`.
    #[arg(long)]
    pub quad_mode: Option<String>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
}

impl ParamArgs {
    pub fn m(&self, s: &Settings) -> Result<f64> {
        s.f64("m", self.m, 0.0)
    }

    pub fn big_m(&self, s: &Settings) -> Result<f64> {
        s.f64("M", self.big_m, 0.0)
    }

    pub fn horizon(&self, s: &Settings) -> Result<f64> {
        s.f64("T", self.horizon, 1.0)
    }

    pub fn params(&self, s: &Settings) -> Result<ProblemParams> {
        Ok(ProblemParams::new(
            self.m(s)?,
            self.big_m(s)?,
            self.horizon(s)?,
        )?)
    }

    pub fn quadrature(&self, s: &Settings) -> Result<QuadratureCfg> {
        let d = QuadratureCfg::default();
        let mode = match s.string("quad-mode", self.quad_mode.as_deref())?.as_deref() {
            None | Some("analytic") => QuadMode::AnalyticPreferred,
            Some("adaptive") => QuadMode::AdaptiveOnly,
            Some(other) => {
                return usage(format!(
                    "unknown quadrature mode `{other}` (analytic, adaptive)"
                ))
            }
        };
        Ok(QuadratureCfg {
            rel_tol: s.f64("rel-tol", self.rel_tol, d.rel_tol)?,
            abs_tol: s.f64("abs-tol", self.abs_tol, d.abs_tol)?,
            mode,
            ..d
        })
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<greensign::Error>() {
            use greensign::Error::*;
            return match e {
                SingularParameter(_) => code::SINGULAR_PARAMETERS,
                SingularMatrix { .. } => code::SINGULAR_MATRIX,
                GateFailed { .. } => code::GATE_FAILED,
                MonotonicityViolation { .. } => code::MONOTONICITY,
                NonFinite(_) => code::NON_FINITE,
                Domain(_)
                | AmbiguousSide { .. }
                | ZeroDenominator { .. }
                | GridMismatch(_)
                | Unsupported(_) => code::DOMAIN,
            };
        }
        if cause.downcast_ref::<UsageError>().is_some() {
            return code::USAGE;
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return code::IO;
        }
    }
    code::USAGE
}

fn run(cli: Cli) -> Result<u8> {
    let settings = Settings::load(cli.config.as_deref())?;
    let threads = settings.usize("threads", cli.threads, 0)?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| UsageError(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Eval(a) => eval::run(&a, &settings),
        Command::Matrix(a) => matrix::run(&a, &settings),
        Command::Region(a) => region::run(&a, &settings),
        Command::Solve(a) => solve::run(&a, &settings),
        Command::Check(a) => check::run(&a, &settings),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                code::USAGE
            } else {
                code::OK
            });
        }
    };
    match run(cli) {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
