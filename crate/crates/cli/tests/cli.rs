use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_grasscs"));
    c.env_remove("GRASSCS_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn validator() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(v: &Value) {
    let errs: Vec<String> = validator().iter_errors(v).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errs.is_empty(), "schema violations: {errs:?}\n{v:#}");
}

const Z: [&str; 8] = ["0.3", "-0.1", "0.2", "0.5", "-0.4", "0.1", "0.7", "0.0"];
const W: [&str; 8] = ["1.1", "0.2", "-0.3", "0.0", "0.5", "0.5", "-0.2", "0.9"];

fn with(base: &[&str], flag: &str, vals: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = base.iter().map(|s| s.to_string()).collect();
    v.push(flag.into());
    v.extend(vals.iter().map(|s| s.to_string()));
    v
}

fn run_owned(args: &[String]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn every_command() -> Vec<Vec<String>> {
    let s = |a: &[&str]| a.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut kernel = with(&["kernel", "--lambda", "2"], "--matrix", &Z);
    kernel.extend(with(&[], "--matrix-w", &W));
    let mut overlap = with(&["overlap", "--lambda", "2"], "--matrix", &Z);
    overlap.extend(with(&[], "--matrix-w", &W));
    vec![
        s(&["basis", "--lambda", "2"]),
        kernel,
        overlap,
        s(&["generators", "--lambda", "1", "--op", "P3", "--op", "T+0", "--full"]),
        with(&["symbols", "--lambda", "2"], "--matrix", &Z),
        with(&["phase", "--lambda", "1"], "--angles", &["0.4", "2.7", "0.3", "3.4", "0", "3.14159", "0", "0"]),
        with(&["husimi", "--lambda", "1", "--state", "uniform"], "--matrix", &Z),
        s(&["husimi", "--lambda", "1", "--grid", "4"]),
        s(&["entropy", "--lambda", "1", "--state", "lowest", "--method", "quadrature"]),
        s(&["entropy", "--lambda", "1", "--state", "random", "--n-samples", "20000"]),
        s(&["moment", "--lambda", "2", "--state", "random"]),
        s(&["moment", "--lambda", "1", "--method", "mc", "--n-samples", "20000"]),
        s(&["conjecture", "--lambda", "3"]),
        s(&["conjecture", "--lambda", "1", "--starts", "2", "--n-mc", "5000", "--n-inner", "2000", "--restarts", "1", "--max-evals", "300"]),
        s(&["su2", "--two-s", "3", "--state", "coherent", "--theta", "1.0", "--phi", "0.5"]),
    ]
}

#[test]
fn every_command_output_matches_schema() {
    for args in every_command() {
        let out = run_owned(&args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert_eq!(v["command"], args[0].as_str());
        assert!(v["errors"].as_array().unwrap().is_empty());
        assert_valid(&v);
    }
}

#[test]
fn identical_flags_give_identical_results() {
    for args in every_command() {
        let a = json(&run_owned(&args));
        let b = json(&run_owned(&args));
        assert_eq!(a["results"], b["results"], "{args:?}");
    }
    let mut args = vec!["entropy", "--lambda", "1", "--state", "random", "--method", "mc", "--n-samples", "5000"];
    let a = json(&run(&args));
    args.push("--sequential");
    let b = json(&run(&args));
    assert_eq!(a["results"], b["results"]);
}

#[test]
fn documented_examples() {
    let v = json(&run(&["basis", "--lambda", "1"]));
    assert_eq!(v["results"]["indices"].as_array().unwrap().len(), 6);
    let v = json(&run(&["entropy", "--lambda", "1", "--state", "lowest", "--method", "quadrature"]));
    let w = v["results"]["w"].as_f64().unwrap();
    assert!((w - 17.0 / 12.0).abs() < 1e-8, "{w}");
    let v = json(&run(&["moment", "--lambda", "1"]));
    assert!((v["results"]["m"].as_f64().unwrap() - 0.3).abs() < 1e-10);
}

#[test]
fn seed_comes_from_flag_or_environment() {
    let args = ["entropy", "--lambda", "1", "--state", "random", "--method", "mc", "--n-samples", "5000"];
    let flag = json(&run(&[&args[..], &["--seed", "42"]].concat()));
    let env = json(&bin().args(args).env("GRASSCS_SEED", "42").output().unwrap());
    assert_eq!(flag["seed"], 42);
    assert_eq!(flag["results"], env["results"]);
    let other = json(&run(&[&args[..], &["--seed", "43"]].concat()));
    assert_ne!(flag["results"], other["results"]);
}

#[test]
fn exit_codes() {
    let out = run(&["entropy", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_valid(&v);
    assert_eq!(v["errors"][0]["kind"], "precondition");
    assert!(v["results"].is_null());

    let out = run(&["entropy", "--lambda", "1", "--state", "random", "--method", "quadrature"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["generators", "--lambda", "7", "--op", "P3"]);
    assert_eq!(out.status.code(), Some(2));

    for bad in [&["frobnicate"][..], &["basis", "--lambda", "1", "--bogus"], &["basis"]] {
        let out = run(bad);
        assert_eq!(out.status.code(), Some(64), "{bad:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    }
    let mut both = with(&["symbols", "--lambda", "1"], "--matrix", &Z);
    both.extend(with(&[], "--angles", &["0"; 8]));
    assert_eq!(run_owned(&both).status.code(), Some(64));
}

#[test]
fn state_file_is_normalized_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    std::fs::write(&path, "[[2,0],[0,0],[0,0],[0,0],[0,0],[0,0]]").unwrap();
    let p = path.to_str().unwrap();
    let out = run(&["entropy", "--lambda", "1", "--state", "file", "--state-file", p, "--method", "quadrature"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!((json(&out)["results"]["w"].as_f64().unwrap() - 17.0 / 12.0).abs() < 1e-8);

    std::fs::write(&path, "[[1,0],[0,0]]").unwrap();
    assert_eq!(run(&["moment", "--lambda", "1", "--state", "file", "--state-file", p]).status.code(), Some(2));
    std::fs::write(&path, "not json").unwrap();
    assert_eq!(run(&["moment", "--lambda", "1", "--state", "file", "--state-file", p]).status.code(), Some(2));
}

#[test]
fn husimi_grid_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let out = run(&["husimi", "--lambda", "2", "--grid", "5", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("vartheta_plus,vartheta_minus,q"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 25);
    assert!((rows[0][2] - 1.0).abs() < 1e-15);
    assert!(rows.iter().all(|r| r.len() == 3 && (0.0..=1.0 + 1e-12).contains(&r[2])));
    assert_eq!(run(&["basis", "--lambda", "1", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn floats_round_trip() {
    let v = json(&run(&["basis", "--lambda", "3"]));
    let text = serde_json::to_string(&v).unwrap();
    let back: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v, back);
    let p = v["results"]["indices"][5]["prefactor"].as_f64().unwrap();
    let sq: Vec<f64> = v["results"]["indices"][5]["prefactor_sq"]
        .as_str()
        .unwrap()
        .split('/')
        .map(|x| x.parse().unwrap())
        .collect();
    let exact = if sq.len() == 2 { sq[0] / sq[1] } else { sq[0] };
    assert!((p * p - exact).abs() <= 4.0 * f64::EPSILON * exact);
}

#[test]
fn schema_rejects_malformed_documents() {
    let good = json(&run(&["basis", "--lambda", "1"]));
    assert_valid(&good);
    let v = validator();
    let mut missing = good.clone();
    missing.as_object_mut().unwrap().remove("seed");
    assert!(!v.is_valid(&missing));
    let mut bad_cmd = good.clone();
    bad_cmd["command"] = "plot".into();
    assert!(!v.is_valid(&bad_cmd));
    let mut bad_results = good.clone();
    bad_results["results"]["indices"][0]["two_j"] = "zero".into();
    assert!(!v.is_valid(&bad_results));
}
