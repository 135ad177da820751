use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod bbm_cmd;
mod common;
mod gen;
mod report;
mod stage;
mod sweep;
mod verify;

use common::{CliResult, GlobalOpts, Outcome};

/// Exact construction and verification of crooked measure-preserving circle
/// maps.
///
/// Exit status: 0 success, 1 verification failure, 2 budget exceeded,
/// 3 configuration error.
#[derive(Debug, Parser)]
#[command(name = "crookmaps", version, about, long_about = None)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a generator map as JSON, or figure datasets as CSV.
    Gen(gen::GenArgs),
    /// Run exact checks on a map file.
    Verify(verify::VerifyArgs),
    /// Build construction stages and save the state.
    Stage(stage::StageArgs),
    /// Attractor clouds and rotation proxies over a β grid.
    Bbm(bbm_cmd::BbmArgs),
    /// Exact checks of λ over a parameter grid.
    Sweep(sweep::SweepArgs),
    /// Summarise a report, or replay a witness.
    Report(report::ReportArgs),
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Gen(a) => gen::run(a, g),
        Command::Verify(a) => verify::run(a, g),
        Command::Stage(a) => stage::run(a, g),
        Command::Bbm(a) => bbm_cmd::run(a, g),
        Command::Sweep(a) => sweep::run(a, g),
        Command::Report(a) => report::run(a, g),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok(outcome) => outcome.code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}
