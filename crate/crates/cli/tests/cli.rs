use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn eppa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eppa"))
        .args(args)
        .env_remove("EPPA_VERTEX_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn graph_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const K2: &str = r#"{"version": 1, "k": 2, "n": 2, "part_of": [1, 2], "edges": [[1, 2]]}"#;
const LEFT_TO_RIGHT: &str =
    r#"{"version": 1, "k": 4, "n": 2, "part_of": [1, 1, 2, 2], "edges": [[1, 3], [1, 4], [2, 3], [2, 4]]}"#;
const ODD: &str =
    r#"{"version": 1, "k": 4, "n": 2, "part_of": [1, 1, 2, 2], "edges": [[1, 3], [1, 4], [2, 3], [4, 2]]}"#;

#[test]
fn size_of_six_in_three_parts() {
    let o = eppa(&["size", "6", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "96");
}

#[test]
fn size_rejects_indivisible_order() {
    let o = eppa(&["size", "5", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_smallest_instance() {
    let f = graph_file(K2);
    let o = eppa(&["verify", f.path().to_str().unwrap(), "--max-dom", "2"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("tested=6 passed=6 failed=0"), "{}", stdout(&o));
}

#[test]
fn verify_json_report() {
    let f = graph_file(LEFT_TO_RIGHT);
    let o = eppa(&["verify", f.path().to_str().unwrap(), "--oracle", "--json"]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["failed"], 0);
    assert_eq!(r["tested"], r["oracle_checked"]);
    let text = stdout(&o);
    let at = |key: &str| text.find(&format!("\"{key}\"")).unwrap();
    assert!(at("instances") < at("tested") && at("tested") < at("errors") && at("errors") < at("details"));
}

#[test]
fn semigeneric_verdicts() {
    let yes = graph_file(LEFT_TO_RIGHT);
    let o = eppa(&["semigeneric", yes.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "semi-generic: yes");
    let no = graph_file(ODD);
    let o = eppa(&["semigeneric", no.path().to_str().unwrap()]);
    assert!(stdout(&o).starts_with("semi-generic: no (3 arcs from {1,2} in V1 to {3,4} in V2)"));
}

#[test]
fn build_reports_sizes_and_writes_dot() {
    let f = graph_file(K2);
    let o = eppa(&["build", f.path().to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "k=2 n=2 m=1 |V'|=4");
    let o = eppa(&["build", f.path().to_str().unwrap(), "--dot"]);
    let dot = stdout(&o);
    assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 4);
    let out = NamedTempFile::new().unwrap();
    let o = eppa(&["build", f.path().to_str().unwrap(), "--out", out.path().to_str().unwrap()]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.path()).unwrap()).unwrap();
    assert_eq!(doc["k"], 4);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn build_respects_the_vertex_budget() {
    let f = graph_file(LEFT_TO_RIGHT);
    let o = Command::new(env!("CARGO_BIN_EXE_eppa"))
        .args(["build", f.path().to_str().unwrap()])
        .env("EPPA_VERTEX_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("16"));
}

#[test]
fn extend_prints_a_certificate() {
    let f = graph_file(LEFT_TO_RIGHT);
    let o = eppa(&["extend", f.path().to_str().unwrap(), "1:2,3:4"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("phi_hat: 1->2 2->1 3->4 4->3"), "{text}");
    assert!(text.contains("automorphism: ok"));
    assert!(text.contains("extends phi: ok"));
    assert_eq!(text.lines().filter(|l| l.starts_with("  ") && l.contains("#")).count(), 16);
}

#[test]
fn extend_rejects_non_automorphisms() {
    let f = graph_file(ODD);
    let o = eppa(&["extend", f.path().to_str().unwrap(), "1:2,3:4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_document_is_a_usage_error() {
    let f = graph_file(r#"{"version": 1, "k": 2, "n": 2, "part_of": [1, 2], "edges": []}"#);
    let o = eppa(&["semigeneric", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("completeness"));
}

#[test]
fn small_campaigns_pass_and_are_deterministic() {
    let o = eppa(&["campaign", "--n", "2", "--max-k", "4", "--exhaustive"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("instances=18 tested=860"));
    let args = ["campaign", "--n", "3", "--max-k", "6", "--sample", "5", "--instances", "3", "--seed", "4", "--json"];
    let a = eppa(&args);
    let b = eppa(&[&args[..], &["--jobs", "2"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
