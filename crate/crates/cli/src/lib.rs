//! Command-line front end for the `lensfield` library.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error,
//! 3 I/O error.

pub mod config;
pub mod ellipticity;
pub mod integrals;
pub mod report;
pub mod sample;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{load_config_file, FieldName, Format, Overrides, ParamSpace, RadiusSpec, RunConfig};
use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Compute(#[from] lensfield::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use lensfield::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Compute(E::Input(_) | E::Geometry(_) | E::Domain(_)) => EXIT_USAGE,
            CliError::Compute(_) => EXIT_FAIL,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lensfield", version, about = "Fields, checks and boundary integrals on the lens of tangent circles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a field on a grid over the lens or over (c, theta)
    Sample(SampleArgs),
    /// Run the invariant suites
    Verify(CommonArgs),
    /// Force, couple and energy integrals over the punctured lens
    Integrals(IntegralArgs),
    /// Scan lambda + 2 mu and find the k threshold for strong ellipticity
    Ellipticity(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Outer circle parameter, > 1
    #[arg(long = "R")]
    pub r: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub field: Option<FieldName>,
    #[arg(long, value_enum)]
    pub param_space: Option<ParamSpace>,
}

#[derive(Debug, Clone, Args)]
pub struct IntegralArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Single puncture radius
    #[arg(long, conflicts_with = "a_seq")]
    pub a: Option<f64>,
    /// START:COUNT, halving START each step
    #[arg(long)]
    pub a_seq: Option<RadiusSpec>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            r: self.r,
            k: self.k,
            grid: self.grid,
            format: self.format,
            out: self.out.clone(),
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            ..Default::default()
        }
    }

    fn resolve(&self, extra: Overrides) -> Result<RunConfig, CliError> {
        let flags = extra.or(self.overrides());
        let merged = match &self.config {
            Some(path) => flags.or(load_config_file(path)?),
            None => flags,
        };
        let cfg = merged.resolve();
        cfg.validate()?;
        Ok(cfg)
    }
}

impl Command {
    pub fn config(&self) -> Result<RunConfig, CliError> {
        match self {
            Command::Sample(s) => s.common.resolve(Overrides {
                field: s.field,
                param_space: s.param_space,
                ..Default::default()
            }),
            Command::Integrals(i) => i.common.resolve(Overrides {
                radii: i.a.map(|a| RadiusSpec::Single { a }).or(i.a_seq),
                ..Default::default()
            }),
            Command::Verify(c) | Command::Ellipticity(c) => c.resolve(Overrides::default()),
        }
    }

    pub fn execute(&self, cfg: &RunConfig) -> Result<Report, CliError> {
        match self {
            Command::Sample(_) => sample::run(cfg),
            Command::Verify(_) => verify::run(cfg),
            Command::Integrals(_) => integrals::run(cfg),
            Command::Ellipticity(_) => ellipticity::run(cfg),
        }
    }
}

/// Runs one parsed invocation and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = cli.command.config().and_then(|cfg| {
        let report = cli.command.execute(&cfg)?;
        report::emit(&report, &cfg)?;
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            for line in report::summary_lines(&report) {
                eprintln!("{line}");
            }
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
