use std::path::PathBuf;
use std::process::{Command, Output};

use sonc_core::io;
use sonc_core::rat::ints;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn sonc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sonc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn motzkin_circuit_table() {
    let o = sonc(&["circuits", &data("motzkin.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("[1,1,1,-3]"), "{out}");
    assert!(out.contains("1 circuits, 1 edge generators"));
}

#[test]
fn planar_six_census() {
    let o = sonc(&["census", &data("planar_six.json"), "--sonc-complexes"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("10 distinct sonc-complexes"));
}

#[test]
fn exit_codes() {
    assert_eq!(sonc(&["circuits", &data("motzkin.json"), "--bogus"]).status.code(), Some(2));
    assert_eq!(sonc(&["strata", "--d", "1"]).status.code(), Some(2));
    assert_eq!(sonc(&["quartic-test", "--w1", "x", "--w3", "1"]).status.code(), Some(2));
    assert_eq!(sonc(&["verify-disc", &data("chart_d0.json"), "--poly", "D9"]).status.code(), Some(2));
    assert_eq!(sonc(&["circuits", "/nonexistent.json"]).status.code(), Some(1));
    let wrong = sonc(&["verify-disc", &data("chart_d0.json"), "--poly", "D5", "--samples", "3"]);
    assert_eq!(wrong.status.code(), Some(1));
    let right = sonc(&["verify-disc", &data("chart_d0.json"), "--poly", "D0", "--samples", "10"]);
    assert_eq!(right.status.code(), Some(0));
    assert!(stdout(&right).contains("10 of 10 samples vanish"));
}

#[test]
fn every_chart_equation_vanishes() {
    for k in 0..6 {
        let o = sonc(&["verify-disc", &data(&format!("chart_d{k}.json")), "--poly", &format!("D{k}"), "--samples", "8"]);
        assert_eq!(o.status.code(), Some(0), "D{k}: {}", stdout(&o));
    }
}

#[test]
fn json_output_parses_back() {
    let o = sonc(&["boundary-sample", &data("line4.json"), "--weights", &data("line4_weights.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = io::parse_json(&stdout(&o)).unwrap();
    let f = io::sum_from_json(v["sum"].clone()).unwrap();
    assert_eq!(f.support.len(), 5);
    let a = io::support_from_json(serde_json::to_value(&*f.support).unwrap()).unwrap();
    io::decomposition_from_json(&a, v["decomposition"].clone()).unwrap();

    let e = sonc(&["eval", &data("motzkin_sum.json"), "--at", &data("motzkin_at.json"), "--json"]);
    let v = io::parse_json(&stdout(&e)).unwrap();
    assert_eq!(v["value"], "0");
    assert_eq!(io::rats_from_json(v["z"].clone()).unwrap(), ints(&[1, 1]));
}

#[test]
fn seeded_output_is_reproducible() {
    let args = ["hk-sample", &data("planar_six.json"), "--weights", &data("planar_six_weights_d1.json"), "--samples", "3"];
    let run = |seed: &str| {
        let mut a = args.to_vec();
        a.extend(["--seed", seed, "--json"]);
        sonc(&a).stdout
    };
    assert_eq!(run("7"), run("7"));
    assert_ne!(run("7"), run("8"));
}

#[test]
fn writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("strata.csv");
    let o = sonc(&["strata", "--d", "4", "--slice", "--csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("label,dim,slice dim"));
    assert!(text.contains("\"{1,2,3}\",4,2"), "{text}");
}

#[test]
fn grid_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let o = sonc(&[
        "boundary-sample",
        &data("planar_six.json"),
        "--weights",
        &data("planar_six_weights_d1.json"),
        "--emit-grid",
        path.to_str().unwrap(),
        "--axes",
        "3,4",
        "--steps",
        "3",
        "--poly",
        "D1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a3,a4,d_value,f_min");
    assert_eq!(lines.len(), 10);
}

#[test]
fn quartic_and_equality_verdicts() {
    let b = sonc(&["quartic-test", "--w1", "1/2", "--w3", "2"]);
    assert!(stdout(&b).contains("boundary"));
    let i = sonc(&["quartic-test", "--w1", "1/2", "--w3", "1", "--json"]);
    let v = io::parse_json(&stdout(&i)).unwrap();
    assert_eq!(v["verdict"], "interior");
    let e = sonc(&["check-equality", &data("generic_six.json")]);
    assert!(stdout(&e).contains("verdict: equal"));
    let p = sonc(&["check-equality", &data("planar_six.json")]);
    assert!(stdout(&p).contains("verdict: precondition-violated"));
}

#[test]
fn strata_dot() {
    let o = sonc(&["strata", "--d", "4", "--slice", "--dot"]);
    let out = stdout(&o);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("->").count(), 2);
}
