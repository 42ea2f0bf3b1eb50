use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const LAUFER_1: &str = "x1^3*x2+x2^3*x3+x3^2+x4^2";
const LAUFER_2: &str = "x1^3*x2+x2^5*x3+x3^2+x4^2";
const ALPHA_12: &str = "x1^2+x2^2+x3^2+x4^4";

fn hhdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hhdim")).args(args).env_remove("HH_THREADS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write_table(dir: &Path, name: &str, poly: &str, dmin: i64, dmax: i64) -> String {
    let o = hhdim(&["table", "--poly", poly, "--dmin", &dmin.to_string(), "--dmax", &dmax.to_string(), "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let path = dir.join(name);
    std::fs::write(&path, &o.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn table_json_for_laufer() {
    let o = hhdim(&["table", "--poly", LAUFER_1, "--dmin", "-12", "--dmax", "4", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["hh2_vanishes"], true);
    assert_eq!(v["ker_chi_order"], 36);
    let hh3: u64 = v["cells"].as_array().unwrap().iter().filter(|c| c["d"] == 3).map(|c| c["dim"].as_u64().unwrap()).sum();
    assert_eq!(hh3, 11);
    assert!(v.get("contributions").is_none());
}

#[test]
fn table_json_is_deterministic() {
    let args = ["table", "--poly", LAUFER_2, "--dmin", "-10", "--dmax", "4", "--format", "json", "--monomials"];
    let a = hhdim(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_hhdim")).args(args).env("HH_THREADS", "1").output().unwrap();
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a)["contributions"].as_array().unwrap().len() > 10);
}

#[test]
fn table_csv_and_pretty() {
    let o = hhdim(&["table", "--poly", LAUFER_1, "--dmin", "-4", "--dmax", "3", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("degree,weight,dim"));
    let o = hhdim(&["table", "--poly", LAUFER_1, "--dmin", "-4", "--dmax", "3"]);
    assert!(stdout(&o).contains("|ker chi|  = 36"));
}

#[test]
fn table_input_errors() {
    let o = hhdim(&["table", "--poly", "x1^2+x1^2", "--dmin", "0", "--dmax", "3"]);
    assert_eq!(code(&o), 2);
    let o = hhdim(&["table", "--poly", "x1^2+x2^2+x3^2+x4^2", "--dmin", "3", "--dmax", "0"]);
    assert_eq!(code(&o), 2);
    let o = hhdim(&["table", "--poly", "3*x1^2+x2^2+x3^2+x4^2", "--dmin", "0", "--dmax", "3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn compare_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_table(dir.path(), "a.json", ALPHA_12, -8, -1);
    let l = write_table(dir.path(), "l.json", LAUFER_2, -8, -1);
    let far = write_table(dir.path(), "far.json", LAUFER_2, 0, 3);

    let o = hhdim(&["compare", &a, &a, "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "Equivalent");
    assert_eq!(json(&o)["c"], "1");

    let o = hhdim(&["compare", &a, &l, "--format", "json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["verdict"], "Distinguished");
    assert_eq!(json(&o)["degree"], -6);

    let o = hhdim(&["compare", &a, &far]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).starts_with("InconclusiveWindow"));
}

#[test]
fn compare_rejects_bad_documents() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_table(dir.path(), "a.json", ALPHA_12, -4, -1);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"schema\": \"v1\"}").unwrap();
    let o = hhdim(&["compare", &a, bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn probe_small_res() {
    let o = hhdim(&["probe-small-res", "--poly", LAUFER_2, "--dmin", "-12", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "ConstantRank");
    assert_eq!(json(&o)["rank"], 1);

    let o = hhdim(&["probe-small-res", "--poly", "x1^2+x2^3+x3^3+x4^6", "--dmin", "-12"]);
    assert_eq!(code(&o), 0);

    let o = hhdim(&["probe-small-res", "--poly", "x1^2+x2^2+x3^2+x4^3", "--dmin", "-12", "--format", "json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["verdict"], "NonConstant");

    let o = hhdim(&["probe-small-res", "--poly", LAUFER_1, "--dmin", "0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn golden_families() {
    let o = hhdim(&["golden", "--family", "bp_cE6", "--k", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("HH^3 = 66"));
    let o = hhdim(&["golden", "--family", "bp_cE8", "--k", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("HH^3 = 472"));
    let o = hhdim(&["golden", "--family", "laufer", "--k", "1"]);
    assert_eq!(code(&o), 0);
    let o = hhdim(&["golden", "--family", "cE7", "--k", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn invalid_thread_count() {
    let o = Command::new(env!("CARGO_BIN_EXE_hhdim"))
        .args(["golden", "--family", "laufer", "--k", "1"])
        .env("HH_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}
