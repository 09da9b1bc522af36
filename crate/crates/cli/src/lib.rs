//! Command-line driver for the `gcfib` checks.
//!
//! Exit codes: 0 pass, 1 a check failed, 2 parse or usage error, 3 solver
//! failure, 4 deformation precondition failure, 5 I/O error, 6 inconclusive.

pub mod commands;
pub mod plot;
pub mod report;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{OracleSource, Outcome, PlotFormat, RunOptions};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_DEFORMATION: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_INCONCLUSIVE: i32 = 6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("deformation error: {0}")]
    Deformation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse(_) => EXIT_PARSE,
            Self::Solver(_) => EXIT_SOLVER,
            Self::Deformation(_) => EXIT_DEFORMATION,
            Self::Io(_) => EXIT_IO,
        }
    }
}

impl From<gcfib::Error> for CliError {
    fn from(e: gcfib::Error) -> Self {
        use gcfib::Error as E;
        match e {
            E::InvalidSpec(_) | E::InvalidArgument(_) => Self::Parse(e.to_string()),
            E::DeformationDomain { .. } | E::DeformationValidity { .. } => Self::Deformation(e.to_string()),
            other => Self::Solver(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gcfib", version, about = "Checks for great-circle fibrations of the 3-sphere")]
pub struct Cli {
    /// Emit the report as a JSON document.
    #[arg(long, global = true)]
    pub json: bool,

    /// Accept pull_toward lambda outside [0, 1/2).
    #[arg(long, global = true)]
    pub allow_large_lambda: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Number of sampled fibres (default from [run] or the command).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// validate: margin threshold; contact: cross-check tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions { samples: self.samples, seed: self.seed, tol: self.tol }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Local fibration inequality at sampled fibres.
    Validate {
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Closed-form and finite-difference contact coefficients at sampled fibres.
    Contact {
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Sweep the deformation to a Hopf fibration that keeps one fibre.
    Deform {
        spec: PathBuf,
        #[arg(long)]
        steps: Option<usize>,
        /// Point w,x,y,z whose fibre is kept (default 1,0,0,0).
        #[arg(long, allow_hyphen_values = true)]
        fix_fibre: Option<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Stereographic polylines of sampled fibres.
    Plot {
        spec: PathBuf,
        #[arg(long, default_value_t = 24)]
        fibres: usize,
        #[arg(long, default_value_t = 256)]
        points_per_fibre: usize,
        /// Projection pole w,x,y,z (default -1,0,0,0).
        #[arg(long, allow_hyphen_values = true)]
        pole: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Collision oracle against the analytic fibration verdict.
    Oracle {
        /// Spec file charted at the fibre through 1.
        #[arg(required_unless_present = "family", conflicts_with = "family")]
        spec: Option<PathBuf>,
        /// hopf or linear-tilt:cf_x,cf_y,cg_x,cg_y.
        #[arg(long, allow_hyphen_values = true)]
        family: Option<String>,
        #[arg(long, default_value_t = 0.2)]
        region: f64,
        #[arg(long, default_value_t = 400)]
        samples: usize,
    },
}

/// Output of one command: the report, its outcome and any payload for stdout.
pub struct Execution {
    pub report: report::Report,
    pub outcome: Outcome,
    pub payload: Option<String>,
}

pub fn execute(cli: &Cli) -> Result<Execution, CliError> {
    let load = |p: &PathBuf| spec::load_spec(p, cli.allow_large_lambda);
    let done = |(report, outcome): (report::Report, Outcome)| Execution { report, outcome, payload: None };
    Ok(match &cli.command {
        Command::Validate { spec, run } => done(commands::cmd_validate(&load(spec)?, &run.options())?),
        Command::Contact { spec, run } => done(commands::cmd_contact(&load(spec)?, &run.options())?),
        Command::Deform { spec, steps, fix_fibre, run } => {
            done(commands::cmd_deform(&load(spec)?, *steps, fix_fibre.as_deref(), &run.options())?)
        }
        Command::Plot { spec, fibres, points_per_fibre, pole, format, out } => {
            let format = match format {
                FormatArg::Csv => PlotFormat::Csv,
                FormatArg::Svg => PlotFormat::Svg,
            };
            let (report, outcome, payload) =
                commands::cmd_plot(&load(spec)?, *fibres, *points_per_fibre, pole.as_deref(), format, out.as_deref())?;
            Execution { report, outcome, payload }
        }
        Command::Oracle { spec, family, region, samples } => match (spec, family) {
            (_, Some(f)) => {
                done(commands::cmd_oracle(OracleSource::Family(commands::parse_family(f)?), *region, *samples)?)
            }
            (Some(s), None) => {
                let loaded = load(s)?;
                done(commands::cmd_oracle(OracleSource::Spec(&loaded), *region, *samples)?)
            }
            (None, None) => return Err(CliError::Parse("oracle needs a spec file or --family".into())),
        },
    })
}

/// Parses arguments, runs the command, prints the report and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(exec) => {
            if let Some(payload) = &exec.payload {
                let _ = stdout.write_all(payload.as_bytes());
                let _ = stderr.write_all(exec.report.render_text().as_bytes());
            } else if cli.json {
                let _ = stdout.write_all(exec.report.render_json().as_bytes());
            } else {
                let _ = stdout.write_all(exec.report.render_text().as_bytes());
            }
            match exec.outcome {
                Outcome::Pass => EXIT_PASS,
                Outcome::Fail => EXIT_FAIL,
                Outcome::Inconclusive => EXIT_INCONCLUSIVE,
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
