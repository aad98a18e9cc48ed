mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_layercake"));
    c.env_remove("LAYERCAKE_SEED");
    c
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn classical_monotone_holds() {
    let o = run(&["check", "--transform", "classical", "--property", "monotone", "--trials", "100", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["report"]["verdict"], "holds_on_witnesses");
    assert_eq!(v["report"]["seed"], 7);
}

#[test]
fn shifted_monotone_fails_under_assert() {
    let o = run(&["check", "--transform", "shifted", "--property", "monotone", "--trials", "100", "--seed", "7", "--assert"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["report"]["verdict"], "violated");
    let w = &v["report"]["counterexample"]["witness"];
    assert!(w["e"].is_object() && w["f"].is_object());

    let plain = run(&["check", "--transform", "shifted", "--property", "monotone", "--trials", "100", "--seed", "7"]);
    assert_eq!(plain.status.code(), Some(0));
}

#[test]
fn p_growth_csv_matches_closed_form() {
    let o = run(&["experiment", "p-growth", "--p", "0.5", "--N", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap(), vec!["n", "value"]);
    let mut count = 0;
    for rec in rows.records() {
        let rec = rec.unwrap();
        let n: usize = rec[0].parse().unwrap();
        let v: f64 = rec[1].parse().unwrap();
        let want = common::p_growth_closed_form(0.5, n);
        assert!((v - want).abs() <= 1e-12 * want, "n = {n}: {v} vs {want}");
        count += 1;
    }
    assert_eq!(count, 16);
}

#[test]
fn reports_are_deterministic_and_seeded_from_env() {
    let args = ["check", "--transform", "classical", "--property", "intersection", "--trials", "50"];
    let a = bin().args(args).env("LAYERCAKE_SEED", "11").output().unwrap();
    let b = bin().args(args).env("LAYERCAKE_SEED", "11").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["spec"]["seed"], 11);
    let explicit = run(&["check", "--transform", "classical", "--property", "intersection", "--trials", "50", "--seed", "11"]);
    assert_eq!(explicit.stdout, a.stdout);
}

#[test]
fn rearranged_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = run(&["rearrange", "--input", data("step_halfline.json").to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0));
    let canon = json(&first)["canonical"].clone();
    let path = dir.path().join("canonical.json");
    std::fs::write(&path, serde_json::to_string(&canon).unwrap()).unwrap();

    let profile = |input: &str| stdout(&run(&["rearrange", "--input", input, "--format", "csv"]));
    let p1 = profile(data("step_halfline.json").to_str().unwrap());
    let p2 = profile(path.to_str().unwrap());
    assert!(p1.starts_with("t,value\n"));
    assert_eq!(p1, p2);
    assert_eq!(p1, "t,value\n0,2\n0.5,1\n2.5,0\n");
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("growth.csv");
    let o = run(&["experiment", "p-growth", "--p", "0.5", "--N", "3", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(out).unwrap().starts_with("n,value\n1,1"));
}

#[test]
fn malformed_inputs_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = dir.path().join("bad.json");
    std::fs::write(&bad_json, "{\n  \"space\": {\"kind\": \"atoms\", \"masses\": [1.0]},\n  \"cell_values\": [1.0,,]\n}").unwrap();
    let o = run(&["rearrange", "--input", bad_json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&o.stderr));

    let missing = dir.path().join("missing.json");
    std::fs::write(&missing, "{\"space\": {\"kind\": \"half_line\"}}").unwrap();
    let o = run(&["rearrange", "--input", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("levels"));

    let bad_csv = dir.path().join("bad.csv");
    std::fs::write(&bad_csv, "h,1\nshape,2\nvalues\n1,oops\n").unwrap();
    let o = run(&["symmetrize", "--grid", bad_csv.to_str().unwrap(), "--mode", "spherical"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));

    let o = run(&["check", "--transform", "classical"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn divergent_weight_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    std::fs::write(&w, r#"{"kind": "half_line", "profile": {"form": "power", "coeff": 1.0, "exponent": -1.0}}"#).unwrap();
    let o = run(&["norm", "--input", data("step_atoms.json").to_str().unwrap(), "--p", "1", "--weight", w.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn norm_of_sample_function() {
    let o = run(&[
        "norm",
        "--input",
        data("step_atoms.json").to_str().unwrap(),
        "--p",
        "1",
        "--weight",
        data("weight_inv_sqrt.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    // f* = 5 on [0,1), 2 on [1,4); ∫ t^{-1/2} gives 5·2 + 2·(4 - 2)
    assert_eq!(json(&o)["norm"], 14.0);
}

#[test]
fn symmetrize_profiles() {
    let grid = data("grid.csv");
    let g = grid.to_str().unwrap();
    let two = stdout(&run(&["symmetrize", "--grid", g, "--mode", "2d", "--format", "csv"]));
    assert!(two.starts_with("s,t,value\n0,0,5\n"));
    assert_eq!(two.lines().count(), 17);
    let sph = stdout(&run(&["symmetrize", "--grid", g, "--mode", "spherical", "--format", "csv"]));
    assert!(sph.starts_with("t,value\n0,5\n"));
    let a = run(&["symmetrize", "--grid", g, "--mode", "2d", "--route", "iterated"]);
    let b = run(&["symmetrize", "--grid", g, "--mode", "2d", "--route", "set-transform"]);
    assert_eq!(json(&a)["grid"], json(&b)["grid"]);
    let st = stdout(&run(&["symmetrize", "--grid", g, "--mode", "steiner", "--format", "csv"]));
    let back = layercake::cli::parse_grid_csv(&st).unwrap();
    assert_eq!(back.values[..4], [0.0, 2.0, 1.0, 0.0]);
}

#[test]
fn tree_weights_and_assert() {
    let ok = run(&["tree", "--weights", data("tree_linear.json").to_str().unwrap(), "--assert"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["report"]["concavity_holds"], true);

    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("inverted.json");
    std::fs::write(&w, r#"{"q": 2, "d": 2, "values": {"": 7, "1": 5, "11": 6, "10": 4, "0": 3, "01": 2, "00": 1}}"#).unwrap();
    let bad = run(&["tree", "--weights", w.to_str().unwrap(), "--assert"]);
    assert_eq!(bad.status.code(), Some(1));
    let v = json(&bad);
    assert_eq!(v["report"]["concavity_holds"], false);
    assert_eq!(v["report"]["linearly_decreasing"]["holds"], false);
}

#[test]
fn conditions_through_cli() {
    let sph = run(&["check", "--condition", "spherical", "--weight", data("weight_exp_radial.json").to_str().unwrap(), "--assert"]);
    assert_eq!(sph.status.code(), Some(0));
    let tri = run(&[
        "check",
        "--condition",
        "triangle",
        "--domain",
        "halfline",
        "--weight",
        data("weight_inv_sqrt.json").to_str().unwrap(),
        "--trials",
        "200",
        "--assert",
    ]);
    assert_eq!(tri.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("t.json");
    std::fs::write(&w, r#"{"kind": "half_line", "profile": {"form": "power", "coeff": 1.0, "exponent": 1.0}}"#).unwrap();
    let inc = run(&["check", "--condition", "concavity", "--domain", "atoms:1,2,0.5", "--weight", w.to_str().unwrap(), "--assert"]);
    assert_eq!(inc.status.code(), Some(1));
    assert!(json(&inc)["report"]["witness"].is_object());
}
