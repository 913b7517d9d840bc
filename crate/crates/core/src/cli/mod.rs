//! `tfred` command-line front end: analyze, reduce, simulate and verify a model file.
//!
//! Exit codes: 0 success, 2 parse or validation error, 3 hypothesis failure
//! under `--strict`, 4 no parameterization or reduction, 5 integrator failure,
//! 6 failed invariants.

mod commands;
mod report;
mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_analyze, cmd_reduce, reduce_model, cmd_simulate, cmd_verify, SimulateArgs, SimulateSummary};
pub use report::{render_plain, Hypothesis, ParamSummary, ReductionReport, ReductionSummary, StabilitySummary, Structural, SCHEMA};
pub use suite::invariant_suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_NO_PARAMETERIZATION: i32 = 4;
pub const EXIT_INTEGRATOR: i32 = 5;
pub const EXIT_VERIFY: i32 = 6;

/// A failed command: exit code plus a diagnostic for stderr.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(EXIT_INPUT, message)
    }
}

/// What a command produced: text for stdout, and the exit code to return
/// after printing it (nonzero when the output reports a failure).
#[derive(Clone, Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Clone, Debug, Args)]
pub struct GlobalOpts {
    /// Seed for the rational sample points.
    #[arg(long, global = true, default_value_t = crate::reduce::DEFAULT_SEED)]
    pub seed: u64,
    /// Number of sample points for pointwise checks.
    #[arg(long, global = true, default_value_t = crate::reduce::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Exit with code 3 when the attractivity hypotheses fail.
    #[arg(long, global = true)]
    pub strict: bool,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts { seed: crate::reduce::DEFAULT_SEED, samples: crate::reduce::DEFAULT_SAMPLES, out: None, strict: false }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tfred", version, about = "Reduce slow-fast polynomial systems on a parameterized critical manifold")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural data and sampled hypothesis checks, as JSON.
    Analyze { model: PathBuf },
    /// Build a parameterization and print the reduced system.
    Reduce {
        model: PathBuf,
        /// auto | noninteracting[:S1,S2,..] | complexbalanced | user
        #[arg(long, default_value = "auto")]
        param: String,
        /// Comma-separated complex-balanced reference point.
        #[arg(long)]
        xstar: Option<String>,
        /// Also print LaTeX.
        #[arg(long)]
        latex: bool,
    },
    /// Compare full and reduced solutions along an epsilon ladder.
    Simulate {
        model: PathBuf,
        #[arg(long, default_value = "auto")]
        param: String,
        #[arg(long)]
        xstar: Option<String>,
        /// Comma-separated, strictly decreasing, positive.
        #[arg(long, default_value = "0.04,0.02,0.01,0.005")]
        eps_ladder: String,
        /// Reduced initial value, default (1, 2, .., s).
        #[arg(long)]
        v0: Option<String>,
        /// Full initial value, default Phi(v0).
        #[arg(long)]
        x0: Option<String>,
        /// `TMAX` or `TMIN,TMAX`; a lone `TMAX` uses `10 eps ln(1/eps)` as the start.
        #[arg(long, default_value = "0.1,5")]
        tau: String,
        /// Relative tolerance of the full integration.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Directory for per-epsilon CSV files.
        #[arg(long)]
        csv_out: Option<PathBuf>,
    },
    /// Run the invariant suite and print a pass/fail table.
    Verify {
        model: PathBuf,
        /// Defaults to the model's own `@phi`, else auto.
        #[arg(long)]
        param: Option<String>,
    },
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let g = &cli.global;
    let result = match cli.command {
        Command::Analyze { model } => cmd_analyze(&model, g),
        Command::Reduce { model, param, xstar, latex } => cmd_reduce(&model, &param, xstar.as_deref(), latex, g),
        Command::Simulate { model, param, xstar, eps_ladder, v0, x0, tau, tol, csv_out } => {
            let args = SimulateArgs { param, xstar, eps_ladder, v0, x0, tau, tol, csv_out };
            cmd_simulate(&model, &args, g)
        }
        Command::Verify { model, param } => cmd_verify(&model, param.as_deref(), g),
    };
    match result {
        Ok(out) => {
            let _ = write!(stdout, "{}", out.stdout);
            let _ = write!(stderr, "{}", out.stderr);
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}
