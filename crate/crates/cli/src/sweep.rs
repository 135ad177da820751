//! `crookmaps sweep`: exact checks of `λ_{n,k,α}` over a parameter grid.

use std::path::PathBuf;

use clap::Args;
use crookmaps::generators::{lambda, LambdaParams};
use crookmaps::plcore::sup_displacement;
use crookmaps::verify::{check_measure_preserving, half_turn_symmetric};
use crookmaps::Rational;
use rayon::prelude::*;
use serde::Serialize;

use crate::common::{emit_json, rational, CliResult, GlobalOpts, Outcome, RunConfig};

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Odd values of n.
    #[arg(long, value_delimiter = ',', default_values_t = [7u32, 9])]
    pub n: Vec<u32>,

    /// Even values of k.
    #[arg(long, value_delimiter = ',', default_values_t = [2u32, 4])]
    pub k: Vec<u32>,

    /// Rotation offsets α; each must satisfy |α| < 1/(2(n+k-1)).
    #[arg(long, value_delimiter = ',', default_value = "0", value_parser = rational)]
    pub alpha: Vec<Rational>,

    /// JSON report path (stdout if absent).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepItem {
    pub params: LambdaParams,
    pub vertices: usize,
    pub measure_preserving: bool,
    pub half_turn_symmetric: bool,
    /// Exact `sup |λ̃ - id|`.
    pub displacement: Rational,
    /// `ε/2 + γ + |α|`.
    pub displacement_bound: Rational,
    pub verdict: bool,
}

fn check(params: LambdaParams, budget: usize) -> crookmaps::Result<SweepItem> {
    if params.vertex_estimate() > budget as u128 {
        return Err(crookmaps::Error::VertexBudgetExceeded { needed: params.vertex_estimate(), cap: budget });
    }
    let m = lambda(&params)?;
    let measure_preserving = check_measure_preserving(&m)?.verdict;
    let symmetric = half_turn_symmetric(&m);
    let displacement = sup_displacement(&m)?;
    let displacement_bound = &params.epsilon() / 2 + params.gamma() + params.alpha.abs();
    let verdict = measure_preserving && displacement < displacement_bound;
    Ok(SweepItem {
        vertices: m.vertex_count(),
        params,
        measure_preserving,
        half_turn_symmetric: symmetric,
        displacement,
        displacement_bound,
        verdict,
    })
}

pub fn run(args: &SweepArgs, global: &GlobalOpts) -> CliResult<Outcome> {
    let mut grid = Vec::new();
    for &n in &args.n {
        for &k in &args.k {
            for a in &args.alpha {
                grid.push(LambdaParams::new(n, k, a.clone())?);
            }
        }
    }
    let items: Vec<SweepItem> =
        grid.into_par_iter().map(|p| check(p, global.vertex_budget)).collect::<crookmaps::Result<_>>()?;
    let ok = items.iter().all(|i| i.verdict);
    emit_json(args.report.as_deref(), &RunConfig::new("sweep", global, args).report(&items))?;
    Ok(Outcome::from_verdict(ok))
}
