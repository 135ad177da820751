use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Args;
use crookmaps::io::{self, Report};
use crookmaps::pipeline::Budget;
use crookmaps::{Error, Rational};
use serde::Serialize;

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalOpts {
    /// Largest number of vertices a single exact map may hold.
    #[arg(long, global = true, env = "CROOKMAPS_VERTEX_BUDGET", default_value_t = crookmaps::DEFAULT_VERTEX_BUDGET, value_parser = positive)]
    pub vertex_budget: usize,

    /// Largest iterate used by covering-time searches.
    #[arg(long, global = true, env = "CROOKMAPS_ITER_CAP", default_value_t = crookmaps::DEFAULT_ITERATION_CAP, value_parser = positive)]
    pub iter_cap: usize,

    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, value_parser = positive)]
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl GlobalOpts {
    pub fn budget(&self) -> Budget {
        Budget { vertices: self.vertex_budget, iterations: self.iter_cap }
    }
}

pub fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// Exact `p/q` (or integer) argument.
pub fn rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

/// Configuration block embedded in every report.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a, T: Serialize> {
    pub subcommand: &'static str,
    pub vertex_budget: usize,
    pub iter_cap: usize,
    pub args: &'a T,
}

impl<'a, T: Serialize> RunConfig<'a, T> {
    pub fn new(subcommand: &'static str, global: &GlobalOpts, args: &'a T) -> Self {
        RunConfig { subcommand, vertex_budget: global.vertex_budget, iter_cap: global.iter_cap, args }
    }

    pub fn report<B: Serialize>(self, result: B) -> Report<Self, B> {
        Report::new(self, result)
    }
}

/// Result of a subcommand that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Budget,
}

impl Outcome {
    pub fn from_verdict(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn code(self) -> ExitCode {
        ExitCode::from(match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Budget => 2,
        })
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(Error),
}

impl CliError {
    pub fn code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 3,
            CliError::Core(e) => core_code(e),
        })
    }
}

pub fn core_code(e: &Error) -> u8 {
    match e {
        Error::VertexBudgetExceeded { .. } | Error::IterationCap { .. } | Error::Infeasible(_) => 2,
        Error::Verification(_) | Error::MonotoneMaxAbsent(_) => 1,
        _ => 3,
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(format!("csv output: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

/// Writes JSON to `path`, or to stdout when no path is given.
pub fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> CliResult<()> {
    match path {
        Some(p) => io::write_json(p, value)?,
        None => print!("{}", io::to_json_string(value)?),
    }
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}
