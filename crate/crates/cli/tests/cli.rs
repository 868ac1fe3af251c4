use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liouville-lab")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

fn fixture(name: &str, body: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn numfield_sqrt2_monodromy() {
    let out = run(&["numfield", "--poly", "-2,0,1", "--monodromy"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[[3, 4], [2, 3]]"));
    let out = run(&["numfield", "--poly", "-2,0,1", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["schema"], "liouville-lab/1");
    assert_eq!(v["result"]["monodromy"], serde_json::json!([[[3, 4], [2, 3]]]));
    assert_eq!(v["result"]["liouville_certificate"], "positive-exact");
    assert_eq!(v["result"]["signature"], serde_json::json!([2, 0]));
}

#[test]
fn verify_pair_is_positive_exact() {
    let out = run(&["verify-pair", "--preset", "totreal:2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["certificate"], "positive-exact");
    assert_eq!(v["seed"], 0);
    assert!(v["orientation"].is_array());
    assert!(v.get("timing").is_none());
}

#[test]
fn cotame_on_fixture_files() {
    let o0 = fixture("remark_o0.json", "[[0,0,1,0],[0,0,0,1],[-1,0,0,0],[0,-1,0,0]]");
    let o1 = fixture("remark_o1.json", "{\"matrix\": [[0,-1,0,0],[1,0,0,0],[0,0,0,1],[0,0,-1,0]]}");
    let out = run(&["cotame", "--omega0", o0.to_str().unwrap(), "--omega1", o1.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    let j = &v["result"]["J"]["matrix"];
    assert_eq!(j.as_array().unwrap().len(), 4);
    assert_eq!(v["certificate_kind"], "numeric");
}

#[test]
fn opposite_forms_give_negative_verdict() {
    let out = run(&["cotame", "--omega0", "0,1;-1,0", "--omega1", "0,-1;1,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_deterministic() {
    let args = ["suite", "--name", "equivalence", "--dims", "4,6", "--trials", "20", "--seed", "3", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["seed"], 3);
    let c = run(&["--threads", "1", "giroux-torsion", "--preset", "sol:2,1,1,1", "--k", "2", "--json"]);
    let d = run(&["giroux-torsion", "--preset", "sol:2,1,1,1", "--k", "2", "--json"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify-pair", "--nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify-pair", "--preset", "nope:1"]).status.code(), Some(2));
    assert_eq!(run(&["numfield", "--poly", "-4,0,1"]).status.code(), Some(2));
    assert_eq!(run(&["cotame", "--omega0", "[[0,1],[1,0]]", "--omega1", "0,1;-1,0"]).status.code(), Some(2));
}

#[test]
fn other_subcommands_pass() {
    for args in [
        &["verify-contact", "--preset", "totreal:3", "--form", "minus"][..],
        &["giroux-torsion", "--t3", "--k", "3"],
        &["reeb", "--preset", "sol:2,1,1,1", "--grid", "128"],
        &["lutz-check", "--k", "2", "--tau", "0.5", "--psi", "septic", "--grid", "64"],
        &["cutoff", "--preset", "totreal:2", "--grid", "64"],
        &["geiges", "--preset", "totreal:2"],
        &["geiges", "--n", "4"],
        &["numfield", "--sl2", "2,1,1,1"],
        &["pencil-reduce", "--omega0", "0,0,1,0;0,0,0,1;-1,0,0,0;0,-1,0,0", "--omega1", "0,0,2,0;0,0,0,3;-2,0,0,0;0,-3,0,0"],
        &["pencil-reduce", "--exact", "--omega0", "0,0,1,0;0,0,0,1;-1,0,0,0;0,-1,0,0", "--omega1", "0,0,2,0;0,0,0,3;-2,0,0,0;0,-3,0,0"],
        &["suite", "--name", "cayley", "--trials", "20"],
        &["suite", "--name", "counterexample", "--trials", "50"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn non_geiges_pair_is_negative() {
    let out = run(&["geiges", "--preset", "totreal:3", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["verdict"], "not-geiges");
}
