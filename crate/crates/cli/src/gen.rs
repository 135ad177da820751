//! `crookmaps gen`: generator output as map files, and figure datasets as CSV.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use crookmaps::generators::{base_f, f_beta, lambda, lambda_hat, sigma, LambdaParams};
use crookmaps::io::MapFile;
use crookmaps::verify::strip_branch_counts;
use crookmaps::Rational;
use serde::Serialize;

use crate::common::{config_err, emit_json, ensure_dir, rational, CliResult, GlobalOpts, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// Simple n-crooked interval map.
    Sigma,
    /// The interval map built from n+k-1 raised blocks.
    LambdaHat,
    /// Degree-one crooked perturbation with parameters n, k, alpha.
    Lambda,
    /// The slope-13 base circle map, rotated by beta.
    Base,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    /// Which map to emit.
    #[arg(value_enum)]
    pub generator: Option<Generator>,

    #[arg(long, default_value_t = 7)]
    pub n: u32,

    #[arg(long, default_value_t = 4)]
    pub k: u32,

    #[arg(long, default_value = "0", value_parser = rational)]
    pub alpha: Rational,

    #[arg(long, default_value = "0", value_parser = rational)]
    pub beta: Rational,

    /// Vertex lists of the σ₆ and σ₇ interval maps.
    #[arg(long)]
    pub fig2: bool,

    /// One block of λ̂_{7,k} on [0, 1].
    #[arg(long)]
    pub fig3: bool,

    /// Box branch counts of λ_{7,4} on the 10 × 10 grid.
    #[arg(long)]
    pub fig5: bool,

    /// Representative of the base map on [0, 1].
    #[arg(long)]
    pub fig6: bool,

    /// Output file for a map (stdout if absent), or output directory for
    /// figure datasets (current directory if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl GenArgs {
    fn any_figure(&self) -> bool {
        self.fig2 || self.fig3 || self.fig5 || self.fig6
    }
}

pub fn run(args: &GenArgs, global: &GlobalOpts) -> CliResult<Outcome> {
    match (args.generator, args.any_figure()) {
        (Some(_), true) => config_err("choose either a generator or figure datasets, not both"),
        (None, false) => config_err("nothing to generate: name a generator or pass --fig2/--fig3/--fig5/--fig6"),
        (Some(g), false) => {
            let file = generate(g, args)?;
            if file.vertices.len() > global.vertex_budget {
                return Err(crookmaps::Error::VertexBudgetExceeded {
                    needed: file.vertices.len() as u128,
                    cap: global.vertex_budget,
                }
                .into());
            }
            emit_json(args.out.as_deref(), &file)?;
            Ok(Outcome::Pass)
        }
        (None, true) => {
            let dir = ensure_dir(args.out.as_deref().unwrap_or(Path::new(".")))?;
            if args.fig2 {
                fig2(&dir.join("fig2.csv"))?;
            }
            if args.fig3 {
                fig3(&dir.join("fig3.csv"), args.k)?;
            }
            if args.fig5 {
                fig5(&dir.join("fig5.csv"))?;
            }
            if args.fig6 {
                fig6(&dir.join("fig6.csv"))?;
            }
            Ok(Outcome::Pass)
        }
    }
}

fn generate(g: Generator, args: &GenArgs) -> CliResult<MapFile> {
    Ok(match g {
        Generator::Sigma => {
            if args.n == 0 {
                return config_err("sigma needs n >= 1");
            }
            MapFile::from_interval(&sigma(args.n).map)
        }
        Generator::LambdaHat => MapFile::from_interval(&lambda_hat(args.n, args.k)?),
        Generator::Lambda => MapFile::from_lift(&lambda(&LambdaParams::new(args.n, args.k, args.alpha.clone())?)?),
        Generator::Base => MapFile::from_lift(&if args.beta.is_zero() { base_f() } else { f_beta(&args.beta) }),
    })
}

fn vertex_rows(w: &mut csv::Writer<std::fs::File>, tag: Option<String>, pts: &[(Rational, Rational)]) -> CliResult<()> {
    for (x, y) in pts {
        let mut row = Vec::with_capacity(5);
        if let Some(t) = &tag {
            row.push(t.clone());
        }
        row.extend([x.to_string(), y.to_string(), x.to_f64().to_string(), y.to_f64().to_string()]);
        w.write_record(&row)?;
    }
    Ok(())
}

fn fig2(path: &Path) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "x", "y", "x_f64", "y_f64"])?;
    for n in [6, 7] {
        vertex_rows(&mut w, Some(n.to_string()), sigma(n).map.vertices())?;
    }
    w.flush()?;
    Ok(())
}

fn fig3(path: &Path, k: u32) -> CliResult<()> {
    let block = lambda_hat(7, k)?.restrict(&Rational::zero(), &Rational::one())?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "y", "x_f64", "y_f64"])?;
    vertex_rows(&mut w, None, block.vertices())?;
    w.flush()?;
    Ok(())
}

fn fig5(path: &Path) -> CliResult<()> {
    let m = lambda(&LambdaParams::new(7, 4, Rational::zero())?)?;
    let counts = strip_branch_counts(&m, 10)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["column", "row", "branches"])?;
    for (j, col) in counts.iter().enumerate() {
        for (l, c) in col.iter().enumerate() {
            w.write_record([j.to_string(), l.to_string(), c.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn fig6(path: &Path) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "y", "x_f64", "y_f64"])?;
    vertex_rows(&mut w, None, base_f().vertices())?;
    w.flush()?;
    Ok(())
}
