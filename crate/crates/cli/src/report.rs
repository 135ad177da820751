//! `crookmaps report`: inspect a report file or replay a witness.

use std::path::PathBuf;

use clap::Args;
use crookmaps::io::SCHEMA_VERSION;
use serde::Serialize;

use crate::common::{config_err, CliResult, GlobalOpts, Outcome};
use crate::verify::{read_witness, replay};

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReportArgs {
    /// Report or witness file.
    pub file: PathBuf,

    /// Treat the file as a failure witness and re-verify it; exits 0 when the
    /// recorded failure is genuine and 1 when it does not reproduce.
    #[arg(long)]
    pub replay: bool,
}

pub fn run(args: &ReportArgs, _global: &GlobalOpts) -> CliResult<Outcome> {
    if args.replay {
        let w = read_witness(&args.file)?;
        let genuine = replay(&w)?;
        println!("{}", if genuine { "witness reproduces" } else { "witness does not reproduce" });
        return Ok(Outcome::from_verdict(genuine));
    }
    let value: serde_json::Value = crookmaps::io::read_json(&args.file)?;
    let schema = value.get("schema_version").and_then(|v| v.as_u64());
    if schema != Some(SCHEMA_VERSION as u64) {
        return config_err(format!("{}: schema version {schema:?}, expected {SCHEMA_VERSION}", args.file.display()));
    }
    let field = |path: &[&str]| path.iter().try_fold(&value, |v, k| v.get(*k)).cloned();
    let text = |path: &[&str]| field(path).and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
    println!("file:        {}", args.file.display());
    println!("version:     {}", text(&["version"]));
    println!("subcommand:  {}", text(&["config", "subcommand"]));
    if let Some(v) = field(&["result", "verdict"]) {
        println!("verdict:     {v}");
    }
    if let Some(serde_json::Value::Object(result)) = field(&["result"]) {
        let keys: Vec<&str> = result.keys().map(String::as_str).collect();
        println!("result keys: {}", keys.join(", "));
    }
    Ok(Outcome::Pass)
}
