use std::process::{Command, Output};

use serde_json::{json, Value};

use oscillab::dualramsey::MonochromaticWitness;
use oscillab::ellinf::ApproximationCertificate;
use oscillab::urysohn::{DistanceResult, EmbeddingReport};
use oscillab::UPoint;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscillab"))
        .args(args)
        .env_remove("OSCILLAB_SEED")
        .output()
        .expect("spawn oscillab")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const ZERO: &str = r#"{"transient":[],"period":["0/1"]}"#;
const X: &str = r#"{"transient":["3/10","1/1"],"period":["0/1"]}"#;
const Y: &str = r#"{"transient":["1/10","1/5"],"period":["0/1"]}"#;

#[test]
fn xk_two() {
    let v = json_ok(&["xk", "2"]);
    assert_eq!(v["k"], json!(2));
    assert_eq!(v["seq"]["transient"], json!(["0/1", "1/2", "-1/2", "1/1", "-1/1", "1/2", "-1/2"]));
    assert_eq!(v["seq"]["period"], json!(["0/1"]));
}

#[test]
fn h_table_covers_grid() {
    let v = json_ok(&["h", "2"]);
    let rows = v["table"].as_array().unwrap();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[0], json!({"u": "-1/1", "h": "-1/1"}));
    assert_eq!(rows[9], json!({"u": "1/8", "h": "0/1"}));
    assert_eq!(rows[11], json!({"u": "3/8", "h": "1/2"}));
}

#[test]
fn udist_examples_round_trip() {
    let same = json_ok(&["udist", X, X]);
    assert_eq!(same["d"], json!("0/1"));
    let v = json_ok(&["udist", X, Y]);
    assert_eq!(v, json!({"d": "2/5", "crossing": 1, "case": "M_constant", "witness_t": "1/3"}));
    let back: DistanceResult = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&back).unwrap(), v);
}

#[test]
fn reads_inputs_from_files() {
    let dir = std::env::temp_dir().join(format!("oscillab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (px, py) = (dir.join("x.json"), dir.join("y.json"));
    std::fs::write(&px, X).unwrap();
    std::fs::write(&py, ZERO).unwrap();
    let v = json_ok(&["udist", px.to_str().unwrap(), py.to_str().unwrap()]);
    assert_eq!(v["d"], json!("3/10"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn wr_and_embed() {
    let w: UPoint = serde_json::from_value(json_ok(&["wr", "3"])).unwrap();
    assert_eq!(serde_json::to_value(&w).unwrap()["transient"], json!(["1/1", "2/3", "1/3"]));
    let space = r#"{"points":["A","B"],"dist":[["0/1","1/2"],["1/2","0/1"]]}"#;
    let v = json_ok(&["embed", space, "2"]);
    let rep: EmbeddingReport = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(rep.points.len(), 2);
    assert_eq!(serde_json::to_value(&rep).unwrap(), v);
}

#[test]
fn approx_certificate() {
    let a = r#"{"transient":["1/1","-1/2"],"period":["0/1"]}"#;
    let v = json_ok(&["approx", a, "3"]);
    let cert: ApproximationCertificate = serde_json::from_value(v).unwrap();
    assert!(cert.holds());
    assert_eq!(cert.bound, oscillab::rational::rat(2, 3));
}

#[test]
fn ramsey_instance() {
    let inst = r#"{"n":4,"k":2,"m":3,"coloring":{"kind":"position_mod","position":3,"modulus":2}}"#;
    let v = json_ok(&["ramsey", inst]);
    assert_eq!(v["n"], json!(4));
    let w: Option<MonochromaticWitness> = serde_json::from_value(v["witness"].clone()).unwrap();
    assert!(w.is_some());
}

#[test]
fn selftest_suite_and_env_seed() {
    let v = json_ok(&["selftest", "--cases", "20", "--suite", "pseudometric"]);
    assert_eq!(v["all_passed"], json!(true));
    assert_eq!(v["suites"][0]["passed"], json!(20));
    let seeded = Command::new(env!("CARGO_BIN_EXE_oscillab"))
        .args(["selftest", "--cases", "5", "--suite", "monoid"])
        .env("OSCILLAB_SEED", "41")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&seeded.stdout).unwrap();
    assert_eq!(v["seed"], json!(41));
}

#[test]
fn input_errors_exit_two() {
    let liminf = r#"{"transient":[],"period":["1/2"]}"#;
    for args in [
        vec!["udist", liminf, ZERO],
        vec!["udist", "{not json", ZERO],
        vec!["udist", "/no/such/file.json", ZERO],
        vec!["xk", "0"],
        vec!["wr", "0"],
        vec!["embed", r#"{"points":["A","B"],"dist":[["0/1","3/2"],["3/2","0/1"]]}"#, "1"],
        vec!["selftest", "--suite", "nope"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
    let out = run(&["udist", liminf, ZERO]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("liminf"));
}

#[test]
fn table_and_decimal_views() {
    let out = run(&["--format", "table", "--decimal", "udist", X, Y]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("d ") && l.contains("2/5") && l.ends_with("~0.400000")));
    let v = json_ok(&["udist", X, Y, "--decimal"]);
    assert_eq!(v["exact"]["d"], json!("2/5"));
    assert_eq!(v["decimal_non_authoritative"]["witness_t"], json!("0.333333"));
}

#[test]
fn repeated_runs_are_identical() {
    let a = run(&[
        "embed",
        r#"{"points":["P","Q","R"],"dist":[["0/1","1/3","1/2"],["1/3","0/1","3/4"],["1/2","3/4","0/1"]]}"#,
        "3",
    ]);
    let b = run(&[
        "embed",
        r#"{"points":["P","Q","R"],"dist":[["0/1","1/3","1/2"],["1/3","0/1","3/4"],["1/2","3/4","0/1"]]}"#,
        "3",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
