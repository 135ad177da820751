use std::path::Path;
use std::process::{Command, Output};

use crookmaps::io::{MapFile, LoadedMap};
use crookmaps::verify::{replay_violation, CrookView, Violation};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_crookmaps"));
    c.env_remove("CROOKMAPS_VERTEX_BUDGET").env_remove("CROOKMAPS_ITER_CAP");
    c
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn measure_check_on_lambda_passes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(&["gen", "lambda", "--n", "7", "--k", "4", "--out", "l.json"], d)), 0);
    let o = run(&["verify", "--map", "l.json", "--measure", "--symmetry", "--report", "r.json"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&d.join("r.json"));
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["config"]["subcommand"], "verify");
    assert_eq!(r["config"]["args"]["measure"], true);
    assert_eq!(r["result"]["measure"]["verdict"], true);
    assert_eq!(r["result"]["symmetry"], true);
    assert!(!d.join("r.witness.json").exists());
}

#[test]
fn crooked_failure_leaves_a_replayable_witness() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(&["gen", "sigma", "--n", "6", "--out", "s6.json"], d)), 0);
    assert_eq!(code(&run(&["verify", "--map", "s6.json", "--crooked", "1/2"], d)), 0);
    let o = run(&["verify", "--map", "s6.json", "--crooked", "1/6", "--report", "r.json"], d);
    assert_eq!(code(&o), 1);
    let r = json(&d.join("r.json"));
    assert_eq!(r["result"]["verdict"], false);
    let wpath = d.join("r.witness.json");
    let w = json(&wpath);
    assert_eq!(w["result"]["check"], "crooked");

    // Replay through the library, independently of the binary.
    let map: MapFile = serde_json::from_value(w["result"]["map"].clone()).unwrap();
    let violation: Violation = serde_json::from_value(w["result"]["violation"].clone()).unwrap();
    let LoadedMap::Interval(f) = map.decode().unwrap() else { panic!("σ₆ is an interval map") };
    assert!(replay_violation(&CrookView::interval(&f), &violation));

    let o = run(&["report", "--replay", "r.witness.json"], d);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("witness reproduces"));
}

#[test]
fn tampered_witness_does_not_replay() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(&["gen", "sigma", "--n", "6", "--out", "s6.json"], d);
    assert_eq!(code(&run(&["verify", "--map", "s6.json", "--crooked", "1/6", "--witness", "w.json"], d)), 1);
    let mut w = json(&d.join("w.json"));
    w["result"]["violation"]["delta"] = Value::String("1/2".into());
    std::fs::write(d.join("w.json"), serde_json::to_string(&w).unwrap()).unwrap();
    assert_eq!(code(&run(&["report", "--replay", "w.json"], d)), 1);
}

#[test]
fn malformed_rational_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(&["gen", "sigma", "--n", "6", "--out", "s6.json"], d);
    for bad in ["1/0", "0.5", "abc", "1/"] {
        let o = run(&["verify", "--map", "s6.json", "--crooked", bad], d);
        assert_eq!(code(&o), 3, "{bad}");
    }
    assert_eq!(code(&run(&["gen", "lambda", "--alpha", "1/0"], d)), 3);
}

#[test]
fn other_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(&["gen", "sigma", "--n", "6", "--out", "s6.json"], d);
    assert_eq!(code(&run(&["verify", "--map", "s6.json"], d)), 3);
    assert_eq!(code(&run(&["verify", "--map", "s6.json", "--measure"], d)), 3);
    assert_eq!(code(&run(&["verify", "--map", "missing.json", "--measure"], d)), 3);
    assert_eq!(code(&run(&["gen", "lambda", "--n", "8"], d)), 3);
    assert_eq!(code(&run(&["sweep", "--vertex-budget", "0"], d)), 3);
    assert_eq!(code(&run(&["no-such-command"], d)), 3);
    assert_eq!(code(&run(&["--help"], d)), 0);
}

#[test]
fn budget_overrun_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = bin().args(["sweep", "--n", "7", "--k", "4"]).env("CROOKMAPS_VERTEX_BUDGET", "100").current_dir(d).output().unwrap();
    assert_eq!(code(&o), 2);
    assert_eq!(code(&run(&["gen", "lambda", "--vertex-budget", "10"], d)), 2);
    let o = run(&["stage", "--policy", "strict", "--out", "strict.json"], d);
    assert_eq!(code(&o), 2);
    let s = json(&d.join("strict.json"));
    assert!(s["result"]["stopped"].as_str().unwrap().contains("131"));
}

#[test]
fn sweep_checks_every_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(&["sweep", "--n", "7,9", "--k", "2,4", "--alpha", "0,1/48", "--report", "s.json"], d);
    assert_eq!(code(&o), 0);
    let items = json(&d.join("s.json"))["result"].as_array().unwrap().clone();
    assert_eq!(items.len(), 8);
    assert!(items.iter().all(|i| i["verdict"] == true && i["measure_preserving"] == true));
}

#[test]
fn reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        run(&["gen", "base", "--out", "f.json"], d);
        run(&["verify", "--map", "f.json", "--measure", "--leo", "1/10", "--rotation", "--report", "r.json"], d);
        run(&["gen", "--fig2", "--fig3", "--fig5", "--fig6", "--out", "figs"], d);
    }
    for f in ["f.json", "r.json", "figs/fig2.csv", "figs/fig3.csv", "figs/fig5.csv", "figs/fig6.csv"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}

#[test]
fn figure_datasets() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(&["gen", "--fig5", "--fig6", "--out", "figs"], d)), 0);
    let mut rdr = csv::Reader::from_path(d.join("figs/fig5.csv")).unwrap();
    let mut cols = [0u64; 10];
    let mut rows = [0u64; 10];
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let (j, l, c): (usize, usize, u64) = (rec[0].parse().unwrap(), rec[1].parse().unwrap(), rec[2].parse().unwrap());
        cols[j] += c;
        rows[l] += c;
    }
    assert_eq!(cols, [239; 10]);
    assert_eq!(rows, [239; 10]);
    let fig6 = std::fs::read_to_string(d.join("figs/fig6.csv")).unwrap();
    assert!(fig6.lines().nth(2).unwrap().starts_with("3/130,1/5,"));
}

#[test]
fn stage_then_bbm() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(&["stage", "--eta", "4", "--delta", "1", "--out", "state.json"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(&d.join("state.json"));
    let checks = &s["result"]["state"]["stages"][0]["checks"];
    assert_eq!(checks["measure_preserving"], true);
    assert_eq!(checks["half_turn_symmetric"], true);

    let o = run(
        &["bbm", "--state", "state.json", "--beta-grid", "fixed:half:1/4", "--iters", "2", "--seed-grid", "20,20", "--emit", "svg", "--out", "out"],
        d,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = json(&d.join("out/summary.json"));
    let grid = summary["result"]["grid"].as_array().unwrap();
    assert_eq!(grid.len(), 3);
    assert_eq!(grid[0]["boundary_rotation"], "0/1");
    assert_eq!(grid[0]["accessible_period"], 1);
    assert_eq!(grid[2]["boundary_rotation"], "1/2");
    assert_eq!(grid[2]["accessible_period"], 2);
    let svg = std::fs::read_to_string(d.join("out/cloud_0000.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.matches("<line").count() == 2);

    let o = run(&["bbm", "--state", "state.json", "--beta-grid", "0:1/10:1/20", "--iters", "1", "--seed-grid", "10,10", "--out", "csv"], d);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(d.join("csv/clouds.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("beta,x,t,generation"));
    assert_eq!(code(&run(&["bbm", "--state", "state.json", "--beta-grid", "0:1", "--out", "x"], d)), 3);
}
