use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn run(root: &Path, args: &[&str]) -> (bool, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_vuln-factory"))
        .arg("--root")
        .arg(root)
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"));
    (out.status.success(), json, String::from_utf8(out.stderr).unwrap())
}

fn ok(root: &Path, args: &[&str]) -> Value {
    let (success, json, stderr) = run(root, args);
    assert!(success, "{args:?} failed: {json} {stderr}");
    json
}

#[test]
fn generate_census_reset_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();

    let first = ok(root, &["generate"]);
    assert_eq!(first["counter"], 1);
    assert!(first["generated"][0].as_str().unwrap().ends_with("vuln_modules/vuln_module_0.c"));
    assert_eq!(fs::read_to_string(root.join("vuln_counter.txt")).unwrap(), "1\n");

    let more = ok(root, &["generate", "--count", "2"]);
    assert_eq!(more["generated"].as_array().unwrap().len(), 2);
    assert!(root.join("vuln_modules/vuln_module_2.c").exists());

    let census = ok(root, &["census"]);
    assert_eq!(census, serde_json::json!({"k": 3, "base": 11, "generated": 15, "total": 26}));

    ok(root, &["reset"]);
    assert!(!root.join("vuln_modules").exists());
    assert!(!root.join("vuln_counter.txt").exists());
    assert_eq!(ok(root, &["census"])["total"], 11);
}

#[test]
fn census_warns_on_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    ok(root, &["generate", "--count", "2"]);
    fs::remove_file(root.join("vuln_modules/vuln_module_1.c")).unwrap();
    let (success, json, stderr) = run(root, &["census"]);
    assert!(success);
    assert_eq!(json["total"], 21);
    assert!(stderr.contains("warning"), "{stderr}");
}

#[test]
fn check_bound_100() {
    let dir = tempfile::tempdir().unwrap();
    let v = ok(dir.path(), &["check", "--bound", "100"]);
    assert_eq!(v["trace_length"], 19);
    assert_eq!(v["violated"], true);
    assert_eq!(v["final_state"]["k"], 18);
    assert_eq!(v["final_state"]["count"], 101);
}

#[test]
fn scan_generated_module() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    ok(root, &["generate", "--count", "8"]);
    let path = root.join("vuln_modules/vuln_module_7.c");
    let report = ok(root, &["scan", path.to_str().unwrap()]);
    assert_eq!(report["manifest_n"], 7);
    assert_eq!(report["consistent"], true);
    let cwes: Vec<u64> = report["findings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["cwe"].as_u64().unwrap())
        .collect();
    assert_eq!(cwes, [121, 134, 190, 416, 78]);
}

#[test]
fn abundance_exposure_saturate() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let counts = root.join("counts.json");
    fs::write(&counts, r#"{"counts": {"121": 70, "78": 30}, "label": "corpus@2026-01"}"#).unwrap();
    let table = ok(root, &["abundance", "--input", counts.to_str().unwrap()]);
    assert_eq!(table["label"], "corpus@2026-01");
    assert_eq!(table["entries"]["121"], 0.7);
    assert_eq!(table["entries"]["78"], 0.3);

    let e = ok(root, &["exposure", "--abundance", "0.3", "--deployment", "0.001", "--pexploit", "1"]);
    assert!((e["exposure"].as_f64().unwrap() - 3e-4).abs() < 1e-12);

    let shares = root.join("shares.json");
    fs::write(&shares, r#"{"shares": {"a": 0.5, "b": 0.25, "c": 0.15, "d": 0.05, "e": 0.05}}"#).unwrap();
    let s = ok(root, &["saturate", "--input", shares.to_str().unwrap(), "--target", "0.9"]);
    assert_eq!(s["status"], "reachable");
    assert_eq!(s["count"], 3);
    let s = ok(root, &["saturate", "--input", shares.to_str().unwrap(), "--target", "1"]);
    assert_eq!(s["count"], 5);
}

#[test]
fn tm_run_and_fermi() {
    let dir = tempfile::tempdir().unwrap();
    let v = ok(dir.path(), &["tm-run", "--invocations", "3"]);
    let ns: Vec<u64> = v["emissions"].as_array().unwrap().iter().map(|e| e["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, [0, 1, 2]);
    assert_eq!(v["counter_tape"], "11");
    assert_eq!(v["emissions"][0]["description_hash"].as_str().unwrap().len(), 64);

    let f = ok(dir.path(), &["fermi", "--cwes", "10"]);
    assert_eq!(f["value"], 1024);
    let f = ok(dir.path(), &["fermi"]);
    assert_eq!(f["num_cwes"], 1447);
    assert_eq!(f["digits"], 436);
    // the exact value survives as a JSON number
    let text = f["value"].to_string();
    assert_eq!(text.len(), 436);
    assert!(text.starts_with("38940"));
}

#[test]
fn failures_are_json_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    fs::write(root.join("vuln_counter.txt"), "abc").unwrap();
    let (success, json, _) = run(root, &["generate"]);
    assert!(!success);
    assert_eq!(json["error"], "corrupt_counter");
    assert!(!root.join("vuln_modules/vuln_module_0.c").exists());

    let (success, json, _) = run(root, &["exposure", "--abundance", "2", "--deployment", "0.5", "--pexploit", "1"]);
    assert!(!success);
    assert_eq!(json["error"], "domain");

    let (success, json, _) = run(root, &["scan", root.join("missing.c").to_str().unwrap()]);
    assert!(!success);
    assert_eq!(json["error"], "persistence");
}

#[test]
fn partial_generate_reports_written_paths() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    fs::create_dir_all(root.join("vuln_modules")).unwrap();
    fs::write(root.join("vuln_modules/vuln_module_2.c"), "not ours").unwrap();
    let (success, json, _) = run(root, &["generate", "--count", "4"]);
    assert!(!success);
    assert_eq!(json["error"], "integrity");
    assert_eq!(json["written"].as_array().unwrap().len(), 2);
    assert_eq!(fs::read_to_string(root.join("vuln_counter.txt")).unwrap(), "2\n");
}

#[test]
fn generate_creates_missing_root() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().join("fresh/workspace");
    ok(&root, &["generate"]);
    assert!(root.join("vuln_modules/vuln_module_0.c").exists());
}
