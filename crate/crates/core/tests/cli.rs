use std::process::{Command, Output};

use heiscay::digraph::parse_edgelist;

fn heiscay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heiscay"))
        .args(args)
        .env_remove("HEISCAY_BUDGET")
        .output()
        .expect("binary runs")
}

fn strip_timings(json: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn certify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = heiscay(&[
        "certify", "--k", "3", "--m", "3", "--kind", "oriented", "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, String::from_utf8(out.stdout).unwrap());
    let v = strip_timings(&written);
    assert_eq!(v["vertices"], 27);
    assert_eq!(v["arc_transitive"], true);
    assert_eq!(v["block_size"], 3);
    assert_eq!(v["group_order"], 81);
    assert_eq!(v["orientation"], "oriented");
}

#[test]
fn build_large_composite() {
    let out = heiscay(&["build", "--k", "9", "--m", "2", "--kind", "graph"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, d) = parse_edgelist(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(header.vertices, 4096);
    assert_eq!(d.n_vertices(), 4096);
    assert_eq!(header.kind, "graph");
    assert_eq!(d.n_arcs(), 4096 * 9);
}

#[test]
fn vacuous_block_size_is_a_usage_error() {
    let out = heiscay(&["build", "--k", "3", "--m", "1", "--kind", "graph"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("vacuous"));
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(heiscay(&["build", "--k", "1", "--m", "3", "--kind", "graph"]).status.code(), Some(2));
    assert_eq!(heiscay(&["plan", "--k", "3"]).status.code(), Some(2));
    assert_eq!(
        heiscay(&["plan", "--k", "6", "--m", "2", "--kind", "graph", "--base-prime", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_heiscay"))
        .args(["build", "--k", "5", "--m", "3", "--kind", "graph"])
        .env("HEISCAY_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plan_prints_json() {
    let out = heiscay(&["plan", "--k", "6", "--m", "3", "--kind", "oriented"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["k"], 6);
    assert_eq!(v["predicted_vertices"], v["base_vertices"].as_u64().unwrap().pow(v["power"].as_u64().unwrap() as u32));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["dot", "edgelist"] {
        let run = |name: &str| {
            let path = dir.path().join(name);
            let out = heiscay(&[
                "certify", "--k", "5", "--m", "2", "--kind", "graph", "--format", format,
                "--out", path.to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0));
            (std::fs::read(&path).unwrap(), strip_timings(std::str::from_utf8(&out.stdout).unwrap()))
        };
        let (a, b) = (run("a"), run("b"));
        assert_eq!(a, b, "{format}");
    }
    let a = heiscay(&["build", "--k", "4", "--m", "3", "--kind", "graph", "--format", "dot"]);
    let b = heiscay(&["build", "--k", "4", "--m", "3", "--kind", "graph", "--format", "dot"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("graph"));
}
