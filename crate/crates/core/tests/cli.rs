use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_topocryst");
const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).env("TOPOCRYST_THREADS", "2").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn data(f: &str) -> String {
    format!("{DATA}/{f}")
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let (code, _, err) = run(&["transmogrify"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    assert_eq!(run(&["rings", "--graph", "builtin:laves", "--lenght", "3"]).0, 2);
}

#[test]
fn bad_thread_count_is_usage_error() {
    let out = Command::new(BIN).args(["symmetry", "--graph", "builtin:cubic"]).env("TOPOCRYST_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qg");
    std::fs::write(&bad, "vertex A\nedge e1 A B\n").unwrap();
    assert_eq!(run(&["symmetry", "--graph", bad.to_str().unwrap()]).0, 1);
    // Bare graph without vectors cannot be built.
    assert_eq!(run(&["build", "--graph", &data("k4.qg")]).0, 1);
}

#[test]
fn lattice_report_on_l_d() {
    let (code, out, _) = run(&["lattice", "--lattice", &data("l_d.lat")]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["K_count"], 12);
    assert_eq!(v["alpha_sq"], "2");
    assert_eq!(v["point_group_order"], 48);
    assert_eq!(v["orthogonally_symmetric"]["is_os"], true);
    assert_eq!(v["class"], "fcc");
    assert_eq!(v["tight_frame"]["c"], "8");
    assert_eq!(v["tight_frame"]["residual"], "0");
}

#[test]
fn lattice_report_from_block() {
    let (code, out, _) = run(&["lattice", "--graph", &data("laves.qg")]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["K_count"], 8);
    assert_eq!(v["class"], "bcc");
}

#[test]
fn rings_length_3_on_laves() {
    let (code, out, _) = run(&["rings", "--graph", "builtin:laves", "--length", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    for x in v["vertices"].as_array().unwrap() {
        assert_eq!(x["count"], 0);
    }
}

#[test]
fn rings_default_to_girth() {
    let (code, out, _) = run(&["rings", "--graph", &data("diamond.qg"), "--vertex", "B"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["girth"], 6);
    assert_eq!(v["vertices"][0]["count"], 12);
    assert_eq!(v["vertices"][0]["rings"].as_array().unwrap().len(), 12);
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec!["lattice", "--lattice", "builtin:bcc"],
        vec!["rings", "--graph", "builtin:laves"],
        vec!["symmetry", "--graph", "builtin:laves"],
        vec!["standardize", "--graph", "builtin:honeycomb"],
    ] {
        assert_eq!(run(&args), run(&args));
    }
}

#[test]
fn build_exports() {
    let dir = tempfile::tempdir().unwrap();
    for fmt in ["xyz", "obj", "json"] {
        let path = dir.path().join(format!("net.{fmt}"));
        let (code, _, _) = run(&["build", "--graph", "builtin:diamond", "--window", "1", "--format", fmt, "--out", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("vertices") || text.contains("\"vertices\""));
    }
    let json = std::fs::read_to_string(dir.path().join("net.json")).unwrap();
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 54);
    assert_eq!(run(&["build", "--graph", "builtin:diamond", "--format", "pdb"]).0, 2);
}

#[test]
fn standardize_writes_harmonic_block() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k4.qg");
    let (code, _, _) = run(&["standardize", "--graph", &data("k4.qg"), "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("covolume 1"));
    let block = topocryst::graph::QuotientGraph::parse(&text).unwrap().block().unwrap().to_f64();
    let reference = topocryst::block::laves_block().to_f64();
    assert!(topocryst::realization::harmonic_residual(&block) <= 1e-9);
    assert!(topocryst::realization::similar_blocks(&block, &reference, 1e-6));
}

#[test]
fn standardize_rejects_bad_tolerance() {
    assert_eq!(run(&["standardize", "--graph", &data("theta.qg"), "--tol", "-1"]).0, 2);
}

#[test]
fn verify_paper_passes() {
    let (code, out, _) = run(&["verify-paper"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 13);
}
