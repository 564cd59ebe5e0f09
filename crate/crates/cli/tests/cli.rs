use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conic-codes"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("CONIC_CODES_THREADS").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn even_q_is_a_usage_error() {
    assert_eq!(run(&["verify", "--q", "8"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--q", "15"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--q", "3"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["dims", "--q", "5", "--matrix", "A44"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--q", "5", "--suite", "bogus"]).status.code(), Some(2));
}

#[test]
fn matrix_suite_reports_power_identity() {
    let out = run(&["verify", "--q", "9", "--suite", "matrix"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(check(&r, "B5_eq_B")["actual"], "pass");
    assert_eq!(check(&r, "B3_eq_B")["actual"], "false");
    assert_eq!(check(&r, "rank_p_A")["actual"], "37");
    assert_eq!(check(&r, "rank_p_A33")["actual"], "36");
}

#[test]
fn full_suite_reports_dimension() {
    let out = run(&["verify", "--q", "7", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["pass"], true);
    let dim = check(&r, "dim_L");
    assert_eq!((dim["expected"].as_str(), dim["actual"].as_str()), (Some("8"), Some("8")));
    for name in ["census", "parity_lemmas", "block_shape", "idempotents", "ker_phi_by_block", "equivariance"] {
        assert_eq!(check(&r, name)["pass"], true, "{name}");
    }
    assert!(r["timestamp"].is_string());
    assert!(check(&r, "census")["elapsed_ms"].is_u64());
}

#[test]
fn no_timestamp_output_is_reproducible() {
    let a = run(&["verify", "--q", "5", "--no-timestamp"]);
    let b = bin().args(["verify", "--q", "5", "--no-timestamp"]).env("CONIC_CODES_THREADS", "1").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert!(r.get("timestamp").is_none());
    assert!(check(&r, "census").get("elapsed_ms").is_none());
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = bin().args(["verify", "--q", "5"]).env("CONIC_CODES_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dims_of_a33() {
    let r = json(&run(&["dims", "--q", "11", "--matrix", "A33"]));
    assert_eq!((r["n"].as_u64(), r["k"].as_u64()), (Some(66), Some(24)));
    let r = json(&run(&["dims", "--q", "5", "--matrix", "A22"]));
    assert_eq!(r["n"].as_u64(), Some(10));
    let all = json(&run(&["dims", "--q", "5"]));
    assert_eq!(all.as_array().unwrap().len(), 4);
    let csv = String::from_utf8(run(&["dims", "--q", "5", "--format", "csv"]).stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("q,matrix,n,k,rank"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn export_alist_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a33.alist");
    let out = run(&["export", "--q", "5", "--matrix", "A33", "--format", "alist", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("15 15"));
    let m = conic_core::codes::from_alist(&text).unwrap();
    assert_eq!((m.rows(), m.cols()), (15, 15));

    let csv_path = dir.path().join("b.csv");
    run(&["export", "--q", "5", "--matrix", "B", "--format", "csv", "--out", csv_path.to_str().unwrap()]);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().count(), 15);
    assert!(csv.lines().all(|l| l.split(',').count() == 15));
}

#[test]
fn unwritable_output_path() {
    let out = run(&["export", "--q", "5", "--out", "/nonexistent-dir/x.alist"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn field_by_characteristic_and_polynomial() {
    let a = json(&run(&["dims", "--p", "3", "--e", "2", "--matrix", "A33"]));
    assert_eq!(a["k"].as_u64(), Some(17));
    let b = json(&run(&["dims", "--q", "9", "--poly", "1,0,1", "--matrix", "A33"]));
    assert_eq!(b["k"].as_u64(), Some(17));
    assert_eq!(run(&["dims", "--q", "9", "--poly", "1,0,0"]).status.code(), Some(2));
}

#[test]
fn chartable_formats() {
    let csv = String::from_utf8(run(&["chartable", "--q", "7", "--format", "csv"]).stdout).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 2 + 6);
    assert!(rows[0].starts_with("character,degree,D,"));
    let t = json(&run(&["chartable", "--q", "13"]));
    assert_eq!(t["pass"], true);
    let degrees: Vec<u64> = t["characters"].as_array().unwrap().iter().map(|c| c["degree"].as_u64().unwrap()).collect();
    assert_eq!(degrees, vec![1, 13, 7, 7, 12, 12, 12, 14, 14]);
}

#[test]
fn classify_census() {
    let r = json(&run(&["classify", "--q", "5", "--json"]));
    assert_eq!(r["pass"], true);
    assert_eq!(r["census"]["external"].as_u64(), Some(15));
    assert_eq!(r["points"].as_array().unwrap().len(), 31);
}

#[test]
fn group_and_blocks_commands() {
    let out = run(&["group", "--q", "7", "--classes", "--parities"]);
    assert_eq!(out.status.code(), Some(0));
    let g = json(&out);
    assert_eq!(g["order"].as_u64(), Some(168));
    assert_eq!(g["classes"].as_array().unwrap().len(), 6);
    assert!(g["parities"]["cases"].is_array());

    let out = run(&["blocks", "--q", "13"]);
    assert_eq!(out.status.code(), Some(0));
    let b = json(&out);
    let sizes: Vec<usize> =
        b["blocks"].as_array().unwrap().iter().map(|x| x["members"].as_array().unwrap().len()).collect();
    assert_eq!(sizes.iter().sum::<usize>(), 9);
    assert_eq!(b["blocks"][0]["idempotent"]["D"], "1");
    assert_eq!(b["modules"]["kernel_dim"].as_u64(), Some(37));
}
