use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn relcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relcalc")).args(args).output().expect("binary runs")
}

fn write(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("relcalc-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const NILPOTENT_GRAPH: &str = r#"{"field": "Q", "d": 2, "pairs": [["1","0","0","0"], ["0","1","1","0"]]}"#;
const NILPOTENT_PENCIL: &str = r#"{"field": "Q", "E": [["1","0"],["0","1"]], "F": [["0","1"],["0","0"]]}"#;

#[test]
fn analyze_reports_parts_and_degrees() {
    let file = write("graph.json", NILPOTENT_GRAPH);
    let v = json(&relcalc(&["analyze", "--relation", file.to_str().unwrap(), "--nmax", "2"]));
    assert_eq!(v["dim"], 2);
    assert_eq!(v["ker"]["dim"], 1);
    assert_eq!(v["mul"]["dim"], 0);
    assert_eq!(v["jordan_degrees"], serde_json::json!([1, 1, 0]));
    assert_eq!(v["singular_chain"], false);
}

#[test]
fn pencil_profile_and_points() {
    let file = write("pencil.json", NILPOTENT_PENCIL);
    let v = json(&relcalc(&["pencil", "--file", file.to_str().unwrap(), "--lambda", "0", "--lambda", "inf"]));
    assert_eq!(v["regular"], true);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["det_poly"], serde_json::json!(["0", "0", "1"]));
    assert_eq!(v["points"][0]["at"], "0");
    assert_eq!(v["points"][0]["jordan_dims"], serde_json::json!([1, 1, 0, 0, 0]));
    assert_eq!(v["points"][1]["jordan_dims"], serde_json::json!([0, 0, 0, 0, 0]));
}

#[test]
fn perturb_and_sn_run_clean() {
    let pencil = write("p.json", NILPOTENT_PENCIL);
    let rank1 = write("q.json", r#"{"field": "Q", "u": ["1","0"], "v": ["0","0"], "w": ["0","1"]}"#);
    let v = json(&relcalc(&[
        "perturb",
        "--pencil",
        pencil.to_str().unwrap(),
        "--rank1",
        rank1.to_str().unwrap(),
        "--lambda",
        "0",
        "--lambda",
        "-1",
    ]));
    assert_eq!(v["regular_before"], true);
    assert_eq!(v["regular_after"], true);

    let a = write("a.json", NILPOTENT_GRAPH);
    let b = write("b.json", r#"{"field": "Q", "d": 2, "pairs": [["1","0","0","0"], ["0","1","0","0"]]}"#);
    let out = relcalc(&["sn", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap(), "--nmax", "3"]);
    assert!(json(&out)["verdicts"].as_array().is_some_and(|v| !v.is_empty()));
}

#[test]
fn fixtures_and_out_file() {
    let path = std::env::temp_dir().join(format!("relcalc-cli-{}-fixtures.json", std::process::id()));
    let out = relcalc(&["fixtures", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["instances"], 8);
    assert_eq!(v["violations"], serde_json::json!([]));
}

#[test]
fn exit_codes() {
    assert_eq!(relcalc(&["verify", "--scenario", "nope"]).status.code(), Some(1));
    assert_eq!(relcalc(&["verify", "--scenario", "relation-1dim", "--field", "GF(4)"]).status.code(), Some(1));
    assert_eq!(relcalc(&["analyze", "--relation", "/nonexistent/relation.json"]).status.code(), Some(1));
    let garbled = write("garbled.json", r#"{"field": "Q", "d": 2, "pairs": [["1"]]}"#);
    assert_eq!(relcalc(&["analyze", "--relation", garbled.to_str().unwrap()]).status.code(), Some(1));
    let oracle = ["verify", "--scenario", "s_n-oracle", "--field", "Q", "--dim", "2"];
    assert_eq!(relcalc(&oracle).status.code(), Some(2));
    assert_eq!(relcalc(&["verify", "--scenario", "relation-1dim", "--dim", "12"]).status.code(), Some(2));
    assert_eq!(relcalc(&["verify", "--scenario", "relation-1dim", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(relcalc(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_is_repeatable() {
    let args = ["verify", "--scenario", "relation-1dim", "--trials", "5", "--seed", "3", "--field", "GF(3)", "--dim", "2..3"];
    let strip = |out: Output| {
        let mut v = json(&out);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    let first = strip(relcalc(&args));
    assert_eq!(first["config"]["d_max"], 3);
    assert_eq!(first, strip(relcalc(&args)));
}
