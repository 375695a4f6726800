use std::io::Write;
use std::path::PathBuf;

use serde_json::Value;
use ybhom::cli::{run, CliResult, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn ybhom(args: &[&str]) -> CliResult {
    run(std::iter::once("ybhom").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--output", "json"]);
    let res = ybhom(&full);
    assert_eq!(res.code, EXIT_PASS, "{}", res.stderr);
    serde_json::from_str(&res.stdout).expect("valid JSON")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn temp_module(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

/// `dim_H` in module degree 0, by `n`.
fn degree_zero_dims(v: &Value) -> Vec<usize> {
    v["homology"]["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["module_degree"] == 0)
        .map(|r| r["dim_H"].as_u64().unwrap() as usize)
        .collect()
}

fn usizes(v: &Value) -> Vec<usize> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect()
}

#[test]
fn check_passes_for_m2_and_m3() {
    for m in ["2", "3"] {
        let res = ybhom(&["check", "--m", m, "--n-max", "4"]);
        assert_eq!(res.code, EXIT_PASS, "{}", res.stderr);
        assert!(res.stdout.contains("ybe"));
    }
}

#[test]
fn kernel_reports_m2_dimensions() {
    let v = json(&["kernel", "--m", "2", "--n-max", "6"]);
    let dims: Vec<usize> = v["degrees"].as_array().unwrap().iter().map(|d| d["M"].as_u64().unwrap() as usize).collect();
    assert_eq!(dims, vec![1, 0, 3, 2, 9, 12, 31]);
}

#[test]
fn homology_of_the_triangular_module() {
    let v = json(&["homology", "--m", "3", "--module", &data("triangular_l3_m3.json")]);
    assert_eq!(degree_zero_dims(&v), vec![1, 3, 9, 27, 81]);
    assert_eq!(usizes(&v["homology"]["r"]), vec![2, 4, 2]);
    assert_eq!(usizes(&v["r_stacked"]), vec![2, 4, 2]);
}

#[test]
fn homology_of_the_free_module() {
    let v = json(&["homology", "--m", "2", "--free", "--truncation", "5"]);
    assert_eq!(degree_zero_dims(&v), vec![1, 0, 3, 2, 9, 12]);
}

#[test]
fn noncommuting_module_fails_with_the_pair() {
    let res = ybhom(&["homology", "--m", "2", "--module", &data("noncommuting_l2_m2.json")]);
    assert_eq!(res.code, EXIT_FAIL);
    assert!(res.stderr.contains("FAILED"), "{}", res.stderr);
}

#[test]
fn malformed_module_is_a_usage_error() {
    let f = temp_module("{\"kind\": \"finite\", \"m\": 2, ");
    let res = ybhom(&["homology", "--m", "2", "--module", f.path().to_str().unwrap()]);
    assert_eq!(res.code, EXIT_USAGE);
    assert!(res.stderr.contains("line"), "{}", res.stderr);
}

#[test]
fn usage_errors() {
    assert_eq!(ybhom(&["homology", "--m", "2"]).code, EXIT_USAGE);
    assert_eq!(ybhom(&["kernel", "--m", "0"]).code, EXIT_USAGE);
    assert_eq!(ybhom(&["check", "--rank-mode", "fast"]).code, EXIT_USAGE);
    assert_eq!(ybhom(&["homology", "--free", "--module", "x.json"]).code, EXIT_USAGE);
    assert_eq!(ybhom(&["homology", "--m", "2", "--module", "/nonexistent/module.json"]).code, EXIT_USAGE);
    assert_eq!(ybhom(&["frobnicate"]).code, EXIT_USAGE);
}

#[test]
fn csv_and_pretty_outputs() {
    let csv = ybhom(&["homology", "--m", "3", "--module", &data("triangular_l3_m3.json"), "--output", "csv"]);
    assert_eq!(csv.code, EXIT_PASS);
    assert!(csv.stdout.starts_with("n,module_degree,dim_C,rank_out,rank_in,dim_H,betti_formula,checks_ok"));
    let pretty = ybhom(&["decompose", "--m", "2", "--n", "3"]);
    assert_eq!(pretty.code, EXIT_PASS, "{}", pretty.stderr);
    assert!(!pretty.stdout.is_empty());
}

#[test]
fn both_rank_mode_reports_no_disagreement() {
    let v = json(&["homology", "--m", "3", "--module", &data("triangular_l3_m3.json"), "--rank-mode", "both"]);
    let text = v.to_string();
    assert!(text.contains("rank_mode"));
    let failures: Vec<&Value> = v["checks"].as_array().into_iter().flatten().filter(|c| c["ok"] == false).collect();
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn output_is_deterministic() {
    let a = ybhom(&["koszul", "--m", "2", "--free", "--truncation", "4", "--output", "json"]);
    let b = ybhom(&["koszul", "--m", "2", "--free", "--truncation", "4", "--output", "json"]);
    assert_eq!(a.code, EXIT_PASS, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
}
