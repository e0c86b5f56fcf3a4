//! The `owpn` command line.
//!
//! Exit codes: 0 on success, 1 for usage or validation errors, 2 for
//! numerical failures and violated invariants.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand};
use thiserror::Error;

use crate::achievability::AchievabilityError;
use crate::bounds::{BoundError, BoundKind};
use crate::gdof::GdofError;
use crate::immse::ImmseError;
use crate::params::{ParamError, Units};

pub use config::parse_config;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<GdofError> for CliError {
    fn from(e: GdofError) -> Self {
        match e {
            GdofError::NonFiniteValue { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ImmseError> for CliError {
    fn from(e: ImmseError) -> Self {
        match e {
            ImmseError::InvalidParams { .. } | ImmseError::InvalidTolerance(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<AchievabilityError> for CliError {
    fn from(e: AchievabilityError) -> Self {
        match e {
            AchievabilityError::LengthMismatch(..) | AchievabilityError::MissingPreviousBlock(_) => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("I/O error: {e}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "owpn",
    version,
    about = "Capacity bounds and simulation for the oversampled Wiener phase-noise channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate closed-form capacity bounds.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Fit pre-log slopes along L = P^alpha and compare with the GDoF.
    Gdof(GdofArgs),
    /// Cross-check the Fisher recursion and the I-MMSE integral.
    #[command(subcommand)]
    Immse(ImmseCommand),
    /// Monte Carlo runs of the channel and the achievable scheme.
    #[command(subcommand)]
    Simulate(SimulateCommand),
}

#[derive(Debug, Subcommand)]
pub enum BoundCommand {
    /// One bound at one point.
    Eval(EvalArgs),
    /// Bounds over a grid of (P, sigma2, L or alpha).
    Sweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
pub enum ImmseCommand {
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    /// Moment checks of the channel against theory.
    Stats(SimArgs),
    /// Plug-in rate of the achievable scheme next to the outer bound.
    Rate(SimArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Reporting units.
    #[arg(long, default_value = "bits")]
    pub units: Units,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// File of `key = value` lines supplying any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Human-readable output instead of CSV.
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub bound: BoundKind,
    #[arg(short = 'P', long, allow_negative_numbers = true)]
    pub power: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma2: f64,
    #[arg(short = 'L', long, default_value_t = 1)]
    pub oversampling: u32,
    /// Constant standing in for the O(1) term of owpn_old_th3.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub o1: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Explicit power values (instead of --p-start/--p-stop/--p-points).
    #[arg(short = 'P', long, value_delimiter = ',', num_args = 1.., conflicts_with_all = ["p_start", "p_stop"], allow_negative_numbers = true)]
    pub power: Vec<f64>,
    #[arg(long)]
    pub p_start: Option<f64>,
    #[arg(long)]
    pub p_stop: Option<f64>,
    #[arg(long, default_value_t = 5)]
    pub p_points: usize,
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
    pub sigma2: Vec<f64>,
    #[arg(short = 'L', long, value_delimiter = ',', num_args = 1.., conflicts_with = "alpha")]
    pub oversampling: Vec<u32>,
    /// Oversampling exponents; each row uses L = max(1, floor(P^alpha)).
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub bound: Vec<BoundKind>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub o1: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GdofArgs {
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub sigma2: f64,
    #[arg(long, default_value_t = 1e4)]
    pub p_start: f64,
    #[arg(long, default_value_t = 1e8)]
    pub p_stop: f64,
    #[arg(long, default_value_t = 5)]
    pub p_points: usize,
    #[arg(long, default_value = "owpn_new_th4")]
    pub bound: BoundKind,
    /// Write the slope summary here; otherwise it follows the points table
    /// after a blank line.
    #[arg(long)]
    pub summary_out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Increment precisions a = L/sigma2 (grid with --b).
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub a: Vec<f64>,
    /// Per-sample powers b = P/L (grid with --a).
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub b: Vec<f64>,
    /// Channel point instead of (a, b).
    #[arg(short = 'P', long, allow_negative_numbers = true, requires = "sigma2")]
    pub power: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma2: Option<f64>,
    #[arg(short = 'L', long, default_value_t = 1)]
    pub oversampling: u32,
    /// Tolerance for every cross-check.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Added to the quadrature result to exercise the failure path.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub perturb: f64,
    /// Dump `rho,integrand,J_rho` for the first point.
    #[arg(long)]
    pub dump_integrand: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[arg(short = 'P', long, allow_negative_numbers = true)]
    pub power: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma2: f64,
    #[arg(short = 'L', long, conflicts_with = "alpha")]
    pub oversampling: Option<u32>,
    /// L = max(1, floor(P^alpha)).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub blocks: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Shift s of the squared amplitude (per-sample units).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub shift: f64,
    /// Mean of the exponential part of the squared amplitude; defaults to P/L − shift.
    #[arg(long, allow_negative_numbers = true)]
    pub scale: Option<f64>,
    /// Histogram bins for both statistics.
    #[arg(long, default_value_t = crate::achievability::DEFAULT_BINS)]
    pub bins: usize,
    /// z-score threshold of the moment checks.
    #[arg(long, default_value_t = 4.0)]
    pub tol: f64,
    /// Write `k,theta,re_y,im_y` for the run.
    #[arg(long)]
    pub dump_trajectory: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn command_tree() -> clap::Command {
    Cli::command().args_override_self(true)
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Output that would go to stdout is written to
/// `stdout`; diagnostics go to `stderr`.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let root = command_tree();
    let merged = match config::merge_config(&root, args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let matches = match root.try_get_matches_from(merged) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(stdout, "{}", e.render());
                    return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        1
                    } else {
                        0
                    };
                }
                _ => 1,
            };
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    let cli = match <Cli as clap::FromArgMatches>::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return 1;
        }
    };
    let mut out = Vec::new();
    let mut err = Vec::new();
    let result = with_thread_pool(|| commands::dispatch(&cli.command, &mut out, &mut err));
    let _ = stdout.write_all(&out).and_then(|_| stdout.flush());
    let _ = stderr.write_all(&err);
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn with_thread_pool<T>(f: impl FnOnce() -> Result<T, CliError> + Send) -> Result<T, CliError>
where
    T: Send,
{
    let threads = match std::env::var("OWPN_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("OWPN_THREADS must be a non-negative integer, got `{v}`")))?,
        Err(_) => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Numerical(format!("thread pool: {e}")))?;
    pool.install(f)
}
