use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lrcw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrcw")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

const C1: &str = r#"{"k":5,"atoms":[{"elements":[0,1,2,3],"rho":3},{"elements":[4,5,6,7],"rho":3}]}"#;

#[test]
fn bounds_report() {
    let out = lrcw(&["bounds", "139", "60", "20", "21"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!((v["singleton"].as_i64(), v["d_b"].as_i64()), (Some(40), Some(27)));
    assert_eq!(v["branch"], "EQ6");
    assert_eq!(v["delta_improvement"], 6);

    let v = json(&lrcw(&["bounds", "13", "5", "3", "2", "--wide"]));
    assert_eq!((v["d_b"].as_i64(), v["branch"].as_str()), (Some(7), Some("EQ5")));
}

#[test]
fn exit_codes() {
    let out = lrcw(&["bounds", "5", "6", "3", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("k ≤ n violated"));
    assert_eq!(lrcw(&["bounds", "5", "x", "3", "2"]).status.code(), Some(2));
    assert_eq!(lrcw(&["frobnicate"]).status.code(), Some(2));
    let out = lrcw(&["build", "perfect", "9", "5", "3", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("hypothesis not met"));
}

#[test]
fn build_perfect_and_bound_instance() {
    let out = lrcw(&["build", "perfect", "10", "5", "3", "2"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("(10,5,5,3,2) perfect=true"));
    assert_eq!(json(&out)["config"]["atoms"].as_array().unwrap().len(), 3);

    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let out = lrcw(&["build", "theorem42", "139", "60", "20", "21", "--dot", dot.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["graph_params"]["d"], 27);
    assert_eq!(v["graph"]["beta"], serde_json::json!([7, 6, 6]));
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("graph construction {"));
}

#[test]
fn build_graph_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let g1 = r#"{"m":2,"edges":[[0,1]],"alpha":[0,0],"beta":[0,0],"gamma":[1],"k":3,"r":2,"delta":2}"#;
    let out = lrcw(&["build", "graph", &write(dir.path(), "g1.json", g1)]);
    assert!(out.status.success());
    assert_eq!(json(&out)["graph_params"], serde_json::json!({"n": 5, "d": 2}));
    assert!(stderr(&out).contains("(5,3,2,2,2)"));

    let thick = g1.replace("\"gamma\":[1]", "\"gamma\":[2]");
    let out = lrcw(&["build", "graph", &write(dir.path(), "thick.json", &thick)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);
}

#[test]
fn analyze_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = lrcw(&["analyze", &write(dir.path(), "c1.json", C1), "--verify-axioms"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("(8,5,3,3,2)"));
    let v = json(&out);
    assert_eq!(v["lattice"].as_array().unwrap().len(), 4);
    assert_eq!(v["dot"].as_str().unwrap().matches("[label=").count(), 4);
    assert_eq!(v["axioms"]["rank"]["violation_count"], 0);
    assert_eq!(v["axioms"]["rank"]["mode"]["mode"], "exhaustive");

    let bad = C1.replace("\"rho\":3}", "\"rho\":4}");
    let out = lrcw(&["analyze", &write(dir.path(), "bad.json", &bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!json(&out)["violations"].as_array().unwrap().is_empty());

    let out = lrcw(&["analyze", &write(dir.path(), "junk.json", "{")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_outcomes() {
    let out = lrcw(&["search", "7", "4", "2", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!((v["result"]["best_d"].as_u64(), v["result"]["perfect"].as_bool()), (Some(2), Some(false)));
    assert_eq!(v["bound"]["tight"], true);
    let v = json(&lrcw(&["search", "8", "5", "3", "2"]));
    assert_eq!((v["result"]["best_d"].as_u64(), v["result"]["perfect"].as_bool()), (Some(3), Some(true)));
}

#[test]
fn grid_is_deterministic_and_clean() {
    let one = lrcw(&["grid", "--n", "6..12", "--search", "--workers", "1"]);
    let many = lrcw(&["grid", "--n", "6..12", "--search", "--workers", "4"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().ends_with("within_bound"));
    let rows: Vec<_> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn sweep_cap_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "c1.json", C1);
    let out = Command::new(env!("CARGO_BIN_EXE_lrcw"))
        .args(["analyze", &path, "--verify-axioms"])
        .env("LRCW_SWEEP_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_code_file_and_random() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = write(dir.path(), "pairs.txt", "1 0 1 0\n0 1 0 1\n");
    let out = lrcw(&["oracle-code", "--generator", &pairs, "--q", "2", "--r", "1", "--delta", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["code_distance"], 2);
    assert_eq!(v["locality_sets"].as_array().unwrap().len(), 2);

    let mds = write(dir.path(), "mds.json", r#"{"q":3,"generator":[[1,0,1,1],[0,1,1,2]]}"#);
    let v = json(&lrcw(&["oracle-code", "--generator", &mds, "--r", "2", "--delta", "3"]));
    assert_eq!(v["matroid_distance"], 3);

    let out = lrcw(&["oracle-code", "--random", "40", "--seed", "7"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["agreed"], 40);
    assert_eq!(lrcw(&["oracle-code"]).status.code(), Some(2));
}

#[test]
fn manifest_digest_matches_output() {
    let dir = tempfile::tempdir().unwrap();
    let body = dir.path().join("out.json");
    let manifest = dir.path().join("run.json");
    let args = [
        "oracle-code",
        "--random",
        "5",
        "--seed",
        "3",
        "--out",
        body.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
    ];
    assert!(lrcw(&args).status.success());
    let first = std::fs::read(&body).unwrap();
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["seed"], 3);
    assert_eq!(m["command"][0], "oracle-code");
    assert_eq!(m["output_sha256"].as_str().unwrap().len(), 64);
    assert!(lrcw(&args).status.success());
    assert_eq!(std::fs::read(&body).unwrap(), first);
    let again: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(again, m);
}
