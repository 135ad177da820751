//! `crookmaps verify`: exact checks on a map file, with a JSON report and a
//! replayable witness for every failure.

use std::path::{Path, PathBuf};

use clap::Args;
use crookmaps::io::{read_map, LoadedMap, MapFile};
use crookmaps::verify::{
    admissibility_certificate, check_measure_preserving, delta_crooked_certificate, delta_crooked_certificate_interval,
    half_turn_symmetric, leo_certificate, rotation_set, CrookednessReport, MeasureReport, RotationBracket, Violation,
};
use crookmaps::{Error, PLLift, Rational};
use serde::{Deserialize, Serialize};

use crate::common::{config_err, emit_json, rational, CliError, CliResult, GlobalOpts, Outcome, RunConfig};

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Map file to check.
    #[arg(long)]
    pub map: PathBuf,

    /// Lebesgue measure preservation.
    #[arg(long)]
    pub measure: bool,

    /// δ-crookedness between every pair of values.
    #[arg(long, value_name = "DELTA", value_parser = rational)]
    pub crooked: Option<Rational>,

    /// Every arc of length ξ covers the circle within the iteration cap.
    #[arg(long, value_name = "XI", value_parser = rational)]
    pub leo: Option<Rational>,

    /// Slopes of modulus at least 4 and a covering certificate at the
    /// breakpoint scale.
    #[arg(long)]
    pub admissible: bool,

    /// Invariance under the half-turn conjugacy.
    #[arg(long)]
    pub symmetry: bool,

    /// Brackets for the rotation set.
    #[arg(long)]
    pub rotation: bool,

    /// Envelope iterations for --rotation.
    #[arg(long, default_value_t = 10_000, value_parser = crate::common::positive)]
    pub rotation_iters: usize,

    /// JSON report path (stdout if absent).
    #[arg(long)]
    pub report: Option<PathBuf>,

    /// Where to write a failure witness. Defaults to `<report>.witness.json`,
    /// or `crookmaps-witness.json` when the report goes to stdout.
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

impl VerifyArgs {
    fn any_check(&self) -> bool {
        self.measure || self.crooked.is_some() || self.leo.is_some() || self.admissible || self.symmetry || self.rotation
    }

    fn witness_path(&self) -> PathBuf {
        match (&self.witness, &self.report) {
            (Some(w), _) => w.clone(),
            (None, Some(r)) => r.with_extension("witness.json"),
            (None, None) => PathBuf::from("crookmaps-witness.json"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapSummary {
    pub kind: String,
    pub degree: i64,
    pub vertices: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeoOutcome {
    pub xi: Rational,
    pub verdict: bool,
    /// Covering iterate, when certified.
    pub n: Option<usize>,
    /// Set when the iteration cap stopped the search.
    pub capped: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmissibleOutcome {
    pub verdict: bool,
    pub min_abs_slope: Rational,
    pub iota: Rational,
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RotationOutcome {
    pub rho_lower: RotationBracket,
    pub rho_upper: RotationBracket,
    pub certified_nondegenerate: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerifyResult {
    pub map: Option<MapSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crooked: Option<CrookednessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leo: Option<LeoOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissible: Option<AdmissibleOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation: Option<RotationOutcome>,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PathBuf>,
}

/// Evidence for a failed check, self-contained so it can be re-verified
/// without the original map file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "lowercase")]
pub enum Witness {
    Crooked { map: MapFile, violation: Violation },
    Measure { map: MapFile, offending: (Rational, Rational, Rational) },
}

pub fn run(args: &VerifyArgs, global: &GlobalOpts) -> CliResult<Outcome> {
    if !args.any_check() {
        return config_err("no check selected: pass --measure, --crooked, --leo, --admissible, --symmetry or --rotation");
    }
    let loaded = read_map(&args.map).map_err(|e| CliError::Config(format!("{}: {e}", args.map.display())))?;
    let mut budget_hit = false;
    let (result, witness) = match &loaded {
        LoadedMap::Lift(m) => check_lift(m, args, global, &mut budget_hit)?,
        LoadedMap::Interval(f) => {
            if args.measure || args.leo.is_some() || args.admissible || args.symmetry || args.rotation {
                return config_err("interval maps support only --crooked");
            }
            let delta = args.crooked.as_ref().expect("only --crooked remains");
            let report = delta_crooked_certificate_interval(f, delta);
            let witness = report
                .violation
                .clone()
                .map(|violation| Witness::Crooked { map: MapFile::from_interval(f), violation });
            let summary = MapSummary { kind: "interval".into(), degree: 0, vertices: f.len() };
            let verdict = report.verdict;
            (VerifyResult { map: Some(summary), crooked: Some(report), verdict, ..Default::default() }, witness)
        }
    };
    let mut result = result;
    if let Some(w) = witness {
        let path = args.witness_path();
        crookmaps::io::write_json(&path, &RunConfig::new("verify", global, args).report(&w))?;
        result.witness = Some(path);
    }
    let outcome = if !result.verdict {
        Outcome::Fail
    } else if budget_hit {
        Outcome::Budget
    } else {
        Outcome::Pass
    };
    emit_json(args.report.as_deref(), &RunConfig::new("verify", global, args).report(&result))?;
    Ok(outcome)
}

fn check_lift(m: &PLLift, args: &VerifyArgs, global: &GlobalOpts, budget_hit: &mut bool) -> CliResult<(VerifyResult, Option<Witness>)> {
    let mut r = VerifyResult {
        map: Some(MapSummary { kind: "lift".into(), degree: m.degree(), vertices: m.vertex_count() }),
        verdict: true,
        ..Default::default()
    };
    let mut witness = None;
    if args.measure {
        let rep = check_measure_preserving(m)?;
        r.verdict &= rep.verdict;
        if let Some(off) = &rep.offending {
            witness = Some(Witness::Measure { map: MapFile::from_lift(m), offending: off.clone() });
        }
        r.measure = Some(rep);
    }
    if let Some(delta) = &args.crooked {
        let rep = delta_crooked_certificate(m, delta);
        r.verdict &= rep.verdict;
        if let Some(v) = &rep.violation {
            witness = Some(Witness::Crooked { map: MapFile::from_lift(m), violation: v.clone() });
        }
        r.crooked = Some(rep);
    }
    if let Some(xi) = &args.leo {
        let out = match leo_certificate(m, xi, global.iter_cap) {
            Ok(cert) => LeoOutcome { xi: xi.clone(), verdict: true, n: Some(cert.n), capped: false },
            Err(Error::IterationCap { .. }) => {
                *budget_hit = true;
                LeoOutcome { xi: xi.clone(), verdict: false, n: None, capped: true }
            }
            Err(e) => return Err(e.into()),
        };
        r.leo = Some(out);
    }
    if args.admissible {
        let metrics = m.map_metrics();
        let cert = admissibility_certificate(m, global.iter_cap);
        let verdict = cert.is_some();
        r.verdict &= verdict;
        r.admissible = Some(AdmissibleOutcome {
            verdict,
            min_abs_slope: metrics.min_abs_slope,
            iota: metrics.iota,
            n: cert.map(|c| c.n),
        });
    }
    if args.symmetry {
        let s = half_turn_symmetric(m);
        r.verdict &= s;
        r.symmetry = Some(s);
    }
    if args.rotation {
        let data = rotation_set(m, args.rotation_iters)?;
        let certified_nondegenerate = data.certified_nondegenerate();
        r.rotation = Some(RotationOutcome { rho_lower: data.rho_lower, rho_upper: data.rho_upper, certified_nondegenerate });
    }
    Ok((r, witness))
}

/// Re-checks a witness against the library. True when the recorded failure
/// is genuine.
pub fn replay(w: &Witness) -> CliResult<bool> {
    use crookmaps::verify::{replay_violation, CrookView};
    match w {
        Witness::Crooked { map, violation } => {
            let view = match map.clone().decode()? {
                LoadedMap::Lift(m) => CrookView::circle(&m),
                LoadedMap::Interval(f) => CrookView::interval(&f),
            };
            Ok(replay_violation(&view, violation))
        }
        Witness::Measure { map, offending } => match map.clone().decode()? {
            LoadedMap::Lift(m) => {
                // Preimage density at an interior value of the offending piece.
                let y = offending.0.midpoint(&offending.1);
                let density: Rational = m
                    .preimages(&y)
                    .iter()
                    .map(|(_, i)| m.graph().segment(*i).slope())
                    .filter(|s| !s.is_zero())
                    .map(|s| s.abs().recip())
                    .sum();
                Ok(density != Rational::one())
            }
            LoadedMap::Interval(_) => Ok(false),
        },
    }
}

pub fn read_witness(path: &Path) -> CliResult<Witness> {
    let value: serde_json::Value = crookmaps::io::read_json(path)?;
    let inner = value.get("result").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| CliError::Config(format!("{}: not a witness file: {e}", path.display())))
}
