//! `crookmaps stage`: the staged construction from `f_β`, saved as a state file.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use crookmaps::pipeline::{advance, certify_stage_crookedness, ConstructionState, PlanPolicy, SampleConfig, StageCrookedness};
use crookmaps::Rational;
use serde::{Deserialize, Serialize};

use crate::common::{config_err, core_code, rational, CliError, CliResult, GlobalOpts, Outcome, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    /// Every stage inequality, including the ones that force
    /// astronomically many blocks.
    Strict,
    /// Drops the inequalities tied to the covering iterate.
    Relaxed,
}

impl From<Policy> for PlanPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Strict => PlanPolicy::Strict,
            Policy::Relaxed => PlanPolicy::Relaxed,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StageArgs {
    #[arg(long, default_value = "0", value_parser = rational)]
    pub beta: Rational,

    /// Number of stages to build.
    #[arg(long, default_value_t = 1, value_parser = crate::common::positive)]
    pub stages: usize,

    /// Closeness target of the first stage, divided by 4 at each later stage.
    #[arg(long, default_value = "1/4", value_parser = rational)]
    pub eta: Rational,

    /// Crookedness target of the first stage, halved at each later stage.
    #[arg(long, default_value = "1/4", value_parser = rational)]
    pub delta: Rational,

    #[arg(long, value_enum, default_value_t = Policy::Relaxed)]
    pub policy: Policy,

    /// Also certify δ-crookedness of the covering iterate of every stage
    /// (sub-sampled when the iterate exceeds the vertex budget).
    #[arg(long)]
    pub crooked: bool,

    /// Windows and value pairs per window for sub-sampled certificates.
    #[arg(long, default_value_t = 4, value_parser = crate::common::positive)]
    pub sample_windows: usize,

    #[arg(long, default_value_t = 16, value_parser = crate::common::positive)]
    pub sample_pairs: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// State file to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageOutput {
    pub state: ConstructionState,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub crookedness: Vec<StageCrookedness>,
    /// Why the run stopped before the requested number of stages.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stopped: Option<String>,
}

pub fn run(args: &StageArgs, global: &GlobalOpts) -> CliResult<Outcome> {
    if !args.eta.is_positive() || !args.delta.is_positive() {
        return config_err("--eta and --delta must be positive");
    }
    let budget = global.budget();
    let sample = SampleConfig {
        windows: args.sample_windows,
        pairs_per_window: args.sample_pairs,
        seed: args.seed,
        ..SampleConfig::default()
    };
    let mut state = ConstructionState::initial(&args.beta);
    let (mut eta, mut delta) = (args.eta.clone(), args.delta.clone());
    let mut crookedness = Vec::new();
    let mut stopped = None;
    let mut outcome = Outcome::Pass;
    for i in 0..args.stages {
        match advance(&state, &eta, &delta, args.policy.into(), budget) {
            Ok(next) => state = next,
            Err(e) => {
                stopped = Some(format!("stage {}: {e}", i + 1));
                outcome = match core_code(&e) {
                    2 => Outcome::Budget,
                    1 => Outcome::Fail,
                    _ => return Err(CliError::Core(e)),
                };
                break;
            }
        }
        if args.crooked {
            let plan = &state.stages.last().expect("stage just built").plan;
            let c = certify_stage_crookedness(&state, plan, budget, sample)?;
            if !c.report.verdict {
                outcome = Outcome::Fail;
            }
            crookedness.push(c);
        }
        eta = &eta / 4;
        delta = &delta / 2;
    }
    if let Some(msg) = &stopped {
        eprintln!("stopped early: {msg}");
    }
    for (i, rec) in state.stages.iter().enumerate() {
        eprintln!(
            "stage {}: n = {}, k = {}, N = {}, {} vertices, sup distance {}",
            i + 1,
            rec.plan.n,
            rec.plan.k,
            rec.plan.big_n,
            rec.checks.vertex_count,
            rec.checks.sup_distance
        );
    }
    let output = StageOutput { state, crookedness, stopped };
    crookmaps::io::write_json(&args.out, &RunConfig::new("stage", global, args).report(&output))?;
    Ok(outcome)
}

/// Loads the construction state from a file written by `stage`.
pub fn read_state(path: &Path) -> CliResult<ConstructionState> {
    let value: serde_json::Value = crookmaps::io::read_json(path)?;
    let inner = value.get("result").cloned().unwrap_or(value);
    let output: StageOutput =
        serde_json::from_value(inner).map_err(|e| CliError::Config(format!("{}: not a state file: {e}", path.display())))?;
    Ok(output.state)
}
