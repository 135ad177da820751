//! `crookmaps bbm`: attractor clouds of the annulus family over a β grid.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, ValueEnum};
use crookmaps::bbm::{accessible_orbit, attract, boundary_rotation, hausdorff, radial_deviation, PointCloud, UnwrapConfig};
use crookmaps::pipeline::{beta_for_rotation, ConstructionState, RotationTarget};
use crookmaps::Rational;
use rayon::prelude::*;
use serde::Serialize;

use crate::common::{config_err, ensure_dir, rational, CliResult, GlobalOpts, Outcome, RunConfig};
use crate::stage::read_state;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BbmArgs {
    /// State file written by `stage`.
    #[arg(long)]
    pub state: PathBuf,

    /// `a:b:step` with exact endpoints; `fixed` and `half` name the parameters
    /// whose boundary rotation is 0 and 1/2.
    #[arg(long, default_value = "fixed:half:1/10")]
    pub beta_grid: String,

    /// Applications of the unwrap-and-smash map to the seed cloud.
    #[arg(long, default_value_t = 3)]
    pub iters: usize,

    /// Seed grid size `nx,nt` over the annulus.
    #[arg(long, default_value = "100,100")]
    pub seed_grid: String,

    /// Points closer than this (in the max metric) are merged after each step.
    #[arg(long, default_value = "1/100000", value_parser = rational)]
    pub resolution: Rational,

    /// Orbit cap for the accessible-point period search.
    #[arg(long, default_value_t = 16)]
    pub orbit_cap: usize,

    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    pub emit: Emit,

    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaSummary {
    pub beta: Rational,
    pub boundary_rotation: Rational,
    pub accessible_period: Option<usize>,
    pub radial_deviation: f64,
    pub points: usize,
    pub max_abs_t: f64,
    /// Hausdorff distance to the cloud of the previous grid parameter.
    pub hausdorff_prev: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BbmSummary {
    pub k: f64,
    pub p: Rational,
    pub beta_fixed: Rational,
    pub beta_half: Rational,
    pub grid: Vec<BetaSummary>,
}

fn endpoint(tok: &str, state: &ConstructionState) -> CliResult<Rational> {
    match tok.trim() {
        "fixed" => Ok(beta_for_rotation(state, RotationTarget::Fixed)),
        "half" => Ok(beta_for_rotation(state, RotationTarget::Half)),
        t => rational(t).map_err(|e| crate::common::CliError::Config(format!("beta grid endpoint {t:?}: {e}"))),
    }
}

/// Grid from `a` towards `b` in steps of `step`, always ending at `b`.
pub fn parse_grid(spec: &str, state: &ConstructionState) -> CliResult<Vec<Rational>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return config_err(format!("beta grid {spec:?} is not of the form a:b:step"));
    }
    let a = endpoint(parts[0], state)?;
    let b = endpoint(parts[1], state)?;
    let step = rational(parts[2]).map_err(|e| crate::common::CliError::Config(format!("beta grid step: {e}")))?;
    if !step.is_positive() {
        return config_err("beta grid step must be positive");
    }
    let count = ((&b - &a).abs() / &step).floor_i64();
    if count > 1_000_000 {
        return config_err(format!("beta grid has {count} points"));
    }
    let dir = if b >= a { step } else { -step };
    let mut grid: Vec<Rational> = (0..=count).map(|i| &a + &(&dir * i)).collect();
    if grid.last() != Some(&b) {
        grid.push(b);
    }
    Ok(grid)
}

fn parse_seed(spec: &str) -> CliResult<(usize, usize)> {
    let parsed: Option<(usize, usize)> = spec
        .split_once(',')
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
    match parsed {
        Some((nx, nt)) if nx > 0 && nt > 0 => Ok((nx, nt)),
        _ => config_err(format!("seed grid {spec:?} is not of the form nx,nt with positive sizes")),
    }
}

pub fn run(args: &BbmArgs, global: &GlobalOpts) -> CliResult<Outcome> {
    let state = read_state(&args.state)?;
    let grid = parse_grid(&args.beta_grid, &state)?;
    let (nx, nt) = parse_seed(&args.seed_grid)?;
    if !args.resolution.is_positive() {
        return config_err("--resolution must be positive");
    }
    let resolution = args.resolution.to_f64();
    let lift = Arc::new(state.map.clone());
    let k = UnwrapConfig::default_k(&lift, &state.beta, &grid)?;
    let base = UnwrapConfig::new(lift, state.beta.clone(), grid[0].clone(), state.p().clone(), k)?;
    let seed = PointCloud::grid(nx, nt, k);

    let clouds: Vec<(UnwrapConfig, PointCloud)> = grid
        .par_iter()
        .map(|beta| {
            let cfg = base.with_beta(beta.clone())?;
            let cloud = attract(&cfg, &seed, args.iters, resolution)?;
            Ok((cfg, cloud))
        })
        .collect::<crookmaps::Result<_>>()?;

    let dists: Vec<Option<f64>> = (0..clouds.len())
        .into_par_iter()
        .map(|i| (i > 0).then(|| hausdorff(&clouds[i - 1].1, &clouds[i].1)))
        .collect();

    let mut rows = Vec::with_capacity(clouds.len());
    for ((cfg, cloud), d) in clouds.iter().zip(dists) {
        rows.push(BetaSummary {
            beta: cfg.beta().clone(),
            boundary_rotation: boundary_rotation(cfg),
            accessible_period: accessible_orbit(cfg, args.orbit_cap).period,
            radial_deviation: radial_deviation(cfg, cfg.p(), 64)?,
            points: cloud.points.len(),
            max_abs_t: cloud.max_abs_t(),
            hausdorff_prev: d,
        });
    }

    let dir = ensure_dir(&args.out)?;
    match args.emit {
        Emit::Csv => write_csv(&dir.join("clouds.csv"), &clouds)?,
        Emit::Svg => {
            for (i, (cfg, cloud)) in clouds.iter().enumerate() {
                std::fs::write(dir.join(format!("cloud_{i:04}.svg")), render_svg(cfg, cloud))?;
            }
        }
    }
    let summary = BbmSummary {
        k,
        p: state.p().clone(),
        beta_fixed: beta_for_rotation(&state, RotationTarget::Fixed),
        beta_half: beta_for_rotation(&state, RotationTarget::Half),
        grid: rows,
    };
    crookmaps::io::write_json(&dir.join("summary.json"), &RunConfig::new("bbm", global, args).report(&summary))?;
    Ok(Outcome::Pass)
}

fn write_csv(path: &Path, clouds: &[(UnwrapConfig, PointCloud)]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["beta", "x", "t", "generation"])?;
    for (cfg, cloud) in clouds {
        let beta = cfg.beta().to_string();
        let generation = cloud.generation.to_string();
        for pt in &cloud.points {
            w.write_record([beta.as_str(), &pt.x.to_string(), &pt.t.to_string(), generation.as_str()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Polar picture of the annulus: angle `2πx`, radius growing with `t`. The
/// two radial segments mark the accessible arcs above `p` and `p + 1/2`.
pub fn render_svg(cfg: &UnwrapConfig, cloud: &PointCloud) -> String {
    const SIZE: f64 = 800.0;
    let c = SIZE / 2.0;
    let outer = cfg.k() + 3.0;
    let (r_in, r_out) = (60.0, c - 20.0);
    let radius = |t: f64| r_in + (t + outer) / (2.0 * outer) * (r_out - r_in);
    let place = |x: f64, t: f64| {
        let a = std::f64::consts::TAU * x;
        let r = radius(t);
        (c + r * a.cos(), c - r * a.sin())
    };
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for t in [-outer, 0.0, outer] {
        let _ = writeln!(s, r##"<circle cx="{c}" cy="{c}" r="{:.3}" fill="none" stroke="#bbbbbb" stroke-width="0.5"/>"##, radius(t));
    }
    let _ = writeln!(s, r##"<g fill="#1f3a93">"##);
    for pt in &cloud.points {
        let (px, py) = place(pt.x, pt.t);
        let _ = writeln!(s, r#"<circle cx="{px:.3}" cy="{py:.3}" r="0.6"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let p = cfg.p().fract().to_f64();
    for x in [p, (p + 0.5).rem_euclid(1.0)] {
        let (x0, y0) = place(x, 0.0);
        let (x1, y1) = place(x, outer);
        let _ = writeln!(s, r##"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y1:.3}" stroke="#c0392b" stroke-width="1.5"/>"##);
    }
    let _ = writeln!(s, r#"<text x="10" y="20" font-family="monospace" font-size="12">beta = {}</text>"#, cfg.beta());
    s.push_str("</svg>\n");
    s
}
