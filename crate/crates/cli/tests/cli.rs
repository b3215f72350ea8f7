use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cws_core::format::write_spec;
use cws_core::ring_spec;
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cws(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cws"))
        .args(args)
        .output()
        .expect("run cws")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = cws(&all);
    (code(&o), serde_json::from_slice(&o.stdout).expect("json output"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn validate_exit_codes() {
    assert_eq!(code(&cws(&["validate", &data("ring7.spec")])), 0);

    let dir = tempfile::tempdir().unwrap();
    let zx = write(dir.path(), "zx.spec", "d 2\nn 1\nm 2\ng 0 | 1\ng 1 | 0\n");
    let o = cws(&["validate", zx.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("non-commuting"), "{}", stdout(&o));

    let cut = write(dir.path(), "cut.spec", "d 3\nn 2\nm 2\ng 0 0 | 1 0\n");
    assert_eq!(code(&cws(&["validate", cut.to_str().unwrap()])), 2);
    assert_eq!(code(&cws(&["validate", "/nonexistent/spec"])), 2);
}

#[test]
fn syndrome_literals() {
    let o = cws(&["syndrome", &data("d4.spec"), "--error", "Z0"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "0 2 2\n"));

    let o = cws(&["syndrome", &data("d4.spec"), "--error", ""]);
    assert_eq!(stdout(&o), "0 0 0\n");

    let o = cws(&["syndrome", &data("ring7.spec"), "--error", "Z1 Z5 X1^2 X5^2"]);
    assert_eq!(stdout(&o), "1 1 1 0 1 1 1\n");

    assert_eq!(code(&cws(&["syndrome", &data("d4.spec"), "--error", "Y0"])), 2);
    assert_eq!(code(&cws(&["syndrome", &data("d4.spec"), "--error", "Z7"])), 2);
}

#[test]
fn verify_ring_and_extension() {
    let o = cws(&["verify", &data("ring7.code"), "--delta", "3", "--oracle"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("ring7.code")).unwrap() + "c 1 1 1 0 1 1 1\n";
    let p = write(dir.path(), "plus.code", &text);
    let o = cws(&["verify", p.to_str().unwrap(), "--oracle"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("weight 2"), "{}", stdout(&o));
}

#[test]
fn verify_d4_flags_degeneracy() {
    // Z1^2 and Z2^2 are weight-1 stabilizer elements that act as -1 on the
    // second basis state, so the code is rejected by both checks.
    let (exit, v) = json(&["verify", &data("d4.code"), "--delta", "2", "--oracle"]);
    assert_eq!(exit, 1);
    assert_eq!(v["ok"], false);
    assert_eq!(v["oracle"]["ok"], false);
    assert_eq!(v["oracle"]["degenerate"], true);
    assert_eq!(v["verdict"]["degeneracy_violations"].as_array().unwrap().len(), 2);
}

#[test]
fn search_examples() {
    let (exit, v) = json(&["search", &data("ring7.spec"), "--delta", "3", "--max-nodes", "2000"]);
    assert_eq!(exit, 0);
    assert!(v["k"].as_u64().unwrap() >= 3);

    // delta 1 detects nothing, so every vertex is compatible with every other
    let (_, v) = json(&["search", &data("d4.spec"), "--delta", "1"]);
    assert_eq!(v["k"], v["vertices"]);
    assert_eq!(v["k"], 64);

    let dir = tempfile::tempdir().unwrap();
    let ring5 = write(dir.path(), "ring5.spec", &write_spec(&ring_spec(2, 5)));
    let (_, v) = json(&["search", ring5.to_str().unwrap(), "--delta", "3"]);
    assert_eq!(v["k"], 2);
    assert_eq!(v["optimal"], true);
    assert_eq!(v["oracle"], true);
}

#[test]
fn search_writes_code_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d4.found");
    let o = cws(&["search", &data("d4.spec"), "--delta", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let found = std::fs::read_to_string(&out).unwrap();
    assert_eq!(code(&cws(&["verify", out.to_str().unwrap()])), 0, "{found}");

    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("d4.found.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "search");
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(manifest.get("wall_time_secs").is_none());

    cws(&["search", &data("d4.spec"), "--delta", "2", "--out", out.to_str().unwrap(), "--record-time"]);
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("d4.found.manifest.json")).unwrap()).unwrap();
    assert!(manifest["wall_time_secs"].is_f64());
}

#[test]
fn global_manifest_flag() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("run.json");
    let o = cws(&["validate", &data("d4.spec"), "--manifest", m.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(v["command"], "validate");
    assert_eq!(v["result"]["exit"], 0);
}

#[test]
fn scan_gcd() {
    let (_, v) = json(&["scan-gcd", &data("d4.spec"), "--delta", "2"]);
    let ws = v["witnesses"].as_array().unwrap();
    assert!(ws.iter().any(|w| w["m_value"] == 2 && w["vu_gcd"] == 1 && w["syndrome"]["entries"] == serde_json::json!([0, 2, 2])));

    let o = cws(&["scan-gcd", &data("ring7.spec"), "--delta", "3"]);
    assert_eq!(stdout(&o), "0 witnesses\n");
}

#[test]
fn export_toy_graph() {
    let dir = tempfile::tempdir().unwrap();
    let toy = write(dir.path(), "toy.spec", "d 3\nn 1\nm 1\ng 0 | 1\n");
    let o = cws(&["export-graph", toy.to_str().unwrap(), "--delta", "1"]);
    let text = stdout(&o);
    let p: Vec<&str> = text.lines().filter(|l| l.starts_with("p ")).collect();
    assert_eq!(p, ["p edge 3 3"]);
    assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 3);
}

#[test]
fn canonicalize_prints_rank() {
    let (exit, v) = json(&["canonicalize", &data("d4.spec"), "--delta", "2"]);
    assert_eq!(exit, 0);
    assert_eq!(v["canonical_rank"], 3);
    assert!(v["spec"].as_str().unwrap().starts_with("d 4\nn 3\nm 6\ng 0 0 0 | 2 0 0\n"));
}

#[test]
fn closure_modes() {
    let o = cws(&["closure", &data("d4.code"), "--mode", "scalar"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("Z0"), "{}", stdout(&o));

    // the additive code <c> plus a new last codeword
    let dir = tempfile::tempdir().unwrap();
    let spec = std::fs::read_to_string(data("ring7.spec")).unwrap();
    let p = write(
        dir.path(),
        "ext.code",
        &format!("{spec}delta 3\nc 0 0 0 0 0 0 0\nc 1 1 0 0 1 0 0\nc 2 2 0 0 2 0 0\nc 0 0 1 0 0 1 1\n"),
    );
    let (exit, v) = json(&["closure", p.to_str().unwrap(), "--mode", "group"]);
    assert_eq!(exit, 1, "{v}");
    assert_eq!(code(&cws(&["closure", p.to_str().unwrap(), "--mode", "scalar"])), 2);
}

#[test]
fn distance_and_sweep() {
    let o = cws(&["distance", &data("ring7.code")]);
    assert_eq!(stdout(&o), "3\n");

    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.spec", "d 2\nn 1\nm 2\ng 0 | 1\ng 1 | 0\n");
    let o = cws(&["sweep", &data("d4.spec"), bad.to_str().unwrap(), "--delta", "2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("d4.spec: K = "), "{text}");
    assert!(text.contains("bad.spec: invalid spec"), "{text}");
}
