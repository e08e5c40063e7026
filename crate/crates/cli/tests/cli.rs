use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fx(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn tworep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tworep")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn sets_computes_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sets.json");
    let o = tworep(&[
        "sets", "--field", "Q", "--bad-set", "2,37", "--cubics", &fx("ex48.cubics"), "--verify", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("rank 3"));
    let doc = json(&out);
    assert_eq!(doc["t0"], serde_json::json!(["3", "5"]));
    assert_eq!(doc["t2"]["primes"].as_array().unwrap().len(), 6);
    // reloading and verifying the written document
    let o = tworep(&["sets", "--sets", out.to_str().unwrap(), "--verify"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn sets_over_gaussian_field() {
    let o = tworep(&["sets", "--field", "Qi", "--bad-set", "1+i,1+2*i,11+6*i"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["basis"].as_array().unwrap().len(), 4);
    assert_eq!(doc["t2"]["primes"].as_array().unwrap().len(), 10);
}

#[test]
fn sets_exit_codes() {
    let o = tworep(&["sets", "--field", "Q", "--bad-set", "2", "--norm-cap", "3"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let o = tworep(&["sets", "--field", "Qx"]);
    assert_eq!(code(&o), 1);
    let o = tworep(&["sets", "--field", "Q", "--bad-set", "4"]);
    assert_eq!(code(&o), 1);
    let o = tworep(&["sets", "--sets", "/nonexistent/sets.json"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn analyze_curve_43808() {
    let o = tworep(&["analyze", "--sets", &fx("sets_q_2_37.json"), "--curve", "0 0 0 -1369 0"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["width"], "at_least_two");
    assert_eq!(r["residual"]["reducible"], true);
    assert_eq!(r["structure"]["det"]["label"], "-1");
    let mut leaves: Vec<&str> =
        r["structure"]["leaves"].as_array().unwrap().iter().map(|l| l["label"].as_str().unwrap()).collect();
    leaves.sort();
    assert_eq!(leaves, ["-1", "2", "2"]);
    assert_eq!(r["structure"]["image_order_log2"], 3);
    assert_eq!(r["det_is_norm"], true);
    assert_eq!(r["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["meta"]["inputs"]["curve"].as_str().unwrap().len(), 64);
    assert!(!r["queries"].as_array().unwrap().is_empty());
}

#[test]
fn analyze_gaussian_table() {
    let o = tworep(&["analyze", "--sets", &fx("sets_3140c.json"), "--oracle-table", &fx("3140c.tsv")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["width"], "at_least_two");
    assert_eq!(r["trivial_level"]["k"], 1);
}

#[test]
fn analyze_small_class() {
    let o = tworep(&["analyze", "--sets", &fx("sets_q_2_37.json"), "--oracle-table", &fx("350464h.tsv")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["width"], "one");
    assert_eq!(r["small_pair"][0]["label"], "2");
    assert_eq!(r["small_pair"][1]["label"], "2");
}

#[test]
fn analyze_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // only the T0 primes
    let short = dir.path().join("short.tsv");
    fs::write(&short, "3\t0\n5\t2\n").unwrap();
    let o = tworep(&["analyze", "--sets", &fx("sets_q_2_37.json"), "--oracle-table", short.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("7, 17, 23, 53"), "{}", stderr(&o));

    // too little precision everywhere
    let coarse = dir.path().join("coarse.tsv");
    let rows = "3\t0\t3\t2^3\n5\t2\t5\t2^3\n7\t0\t7\t2^3\n17\t-2\t17\t2^3\n23\t0\t23\t2^3\n53\t14\t53\t2^3\n";
    fs::write(&coarse, rows).unwrap();
    let o = tworep(&["analyze", "--sets", &fx("sets_q_2_37.json"), "--oracle-table", coarse.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("need 4 bits"), "{}", stderr(&o));

    // F(1) = 2 mod 4 everywhere is not a product of two characters
    let bad = dir.path().join("bad.tsv");
    fs::write(&bad, "3\t2\n5\t0\n7\t2\n17\t0\n23\t2\n53\t0\n").unwrap();
    let o = tworep(&["analyze", "--sets", &fx("sets_q_2_37.json"), "--oracle-table", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));

    // no oracle, and two oracles
    let o = tworep(&["analyze", "--sets", &fx("sets_q_2_37.json")]);
    assert_eq!(code(&o), 1);
    let o = tworep(&[
        "analyze", "--sets", &fx("sets_q_2_37.json"), "--curve", "0 0 0 -1369 0", "--oracle-table", &fx("350464h.tsv"),
    ]);
    assert_ne!(code(&o), 0);
}

#[test]
fn dump_then_analyze_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("43808.tsv");
    let o = tworep(&[
        "oracle-dump", "--field", "Q", "--bad-set", "2,37", "--curve", "0 0 0 -1369 0", "--max-norm", "60", "--out",
        table.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(&table).unwrap();
    assert!(text.lines().any(|l| l == "53\t14\t53"));

    let live = dir.path().join("live.json");
    let dumped = dir.path().join("dumped.json");
    let o = tworep(&["analyze", "--sets", &fx("sets_q_2_37.json"), "--curve", "0 0 0 -1369 0", "--out", live.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = tworep(&[
        "analyze", "--sets", &fx("sets_q_2_37.json"), "--oracle-table", table.to_str().unwrap(), "--out",
        dumped.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let (mut a, mut b) = (json(&live), json(&dumped));
    // provenance differs by construction
    a.as_object_mut().unwrap().remove("meta");
    b.as_object_mut().unwrap().remove("meta");
    assert_eq!(a, b);
}

#[test]
fn analyze_is_deterministic() {
    let args = ["analyze", "--sets", &fx("sets_200.2a.json"), "--oracle-table", &fx("200.2a.tsv")];
    let (a, b) = (tworep(&args), tworep(&args));
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dump_edge_cases() {
    let o = tworep(&["oracle-dump", "--field", "Q", "--bad-set", "2", "--curve", "0 0 0 -1 0", "--max-norm", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().filter(|l| !l.starts_with('#')).count(), 0);

    let o = tworep(&["oracle-dump", "--field", "Q", "--bad-set", "2,37", "--synthetic", "1;1", "--max-norm", "50"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for line in String::from_utf8_lossy(&o.stdout).lines().filter(|l| !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(&cols[1..], ["2", "1"], "{line}");
    }

    // curve with bad reduction outside S
    let o = tworep(&["oracle-dump", "--field", "Q", "--bad-set", "2", "--curve", "0 0 0 -1369 0", "--max-norm", "10"]);
    assert_eq!(code(&o), 1);
}
