//! End-to-end checks of the binary: exit codes, JSON documents, and
//! byte-for-byte reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn sample(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../samples")
        .join(name)
}

fn frevival(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frevival"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_worked_example_exits_zero_with_witness() {
    let out = frevival(&["analyze", sample("z6xd3.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["schema"], "frevival/1");
    let witnesses = doc["witnesses"].as_array().unwrap();
    let minimal: Vec<_> = witnesses
        .iter()
        .filter(|w| w["minimal_time"] == true)
        .collect();
    assert_eq!(minimal.len(), 1);
    assert_eq!(minimal[0]["involution_label"], "(3,e)");
    assert_eq!(minimal[0]["M"], 3);
    assert_eq!(minimal[0]["k"], 1);
    assert_eq!(minimal[0]["kind"], "fr-proper");
    assert!(minimal[0]["certificates"]["oracle"]["pass"].as_bool().unwrap());
}

#[test]
fn analyze_without_witness_exits_one_with_reason() {
    let out = frevival(&["analyze", sample("s3_transpositions.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["no_witness_reason"], "no central involution");
    assert!(doc["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn analyze_z4_reports_pst() {
    let out = frevival(&["analyze", sample("z4_cycle.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let w = &doc["witnesses"][0];
    assert_eq!(w["kind"], "pst");
    assert_eq!(w["M"], 4);
    let t = w["t"].as_f64().unwrap();
    assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    assert_eq!(w["alpha"][0].as_f64().unwrap(), 0.0);
    assert_eq!(w["beta"][0].as_f64().unwrap(), -1.0);
}

#[test]
fn malformed_input_exits_two() {
    let dir = std::env::temp_dir().join("frevival-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, b"{ not json").unwrap();
    let out = frevival(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let invalid = dir.join("identity_in_set.json");
    std::fs::write(
        &invalid,
        br#"{"group": {"kind": "cyclic", "n": 4}, "connection": {"elements": [0, 1, 3]}}"#,
    )
    .unwrap();
    let out = frevival(&["analyze", invalid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("identity"), "stderr: {err}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let path = sample("z6xd3.json");
    let a = frevival(&["analyze", path.to_str().unwrap()]);
    let b = frevival(&["analyze", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn scan_small_abelian_is_clean_and_deterministic() {
    let args = [
        "scan",
        "--max-order",
        "8",
        "--families",
        "abelian",
        "--seed",
        "7",
    ];
    let a = frevival(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let doc = stdout_json(&a);
    assert!(doc["violations"].as_array().unwrap().is_empty());
    assert!(doc["total_graphs"].as_u64().unwrap() > 0);
    let b = frevival(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn chartable_of_d3_matches_published_shape() {
    let dir = std::env::temp_dir().join("frevival-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d3.json");
    std::fs::write(&path, br#"{"kind": "dihedral", "n": 3}"#).unwrap();
    let out = frevival(&["chartable", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert!(doc["verification_pass"].as_bool().unwrap());
    let degrees: Vec<u64> = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["degree"].as_u64().unwrap())
        .collect();
    assert_eq!(degrees, vec![1, 1, 2]);
    // psi_3 on the rotation class evaluates to -1
    let v = &doc["rows"][2]["values"][1];
    assert!((v["numeric"][0].as_f64().unwrap() + 1.0).abs() < 1e-9);
}

#[test]
fn spectrum_of_z4_cycle() {
    let out = frevival(&["spectrum", sample("z4_cycle.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert!(doc["integral"].as_bool().unwrap());
    assert_eq!(doc["graph"]["order"], 4);
    assert_eq!(doc["graph"]["degree"], 2);
    assert!(doc["graph"]["connected"].as_bool().unwrap());
    let mut lambdas: Vec<i64> = doc["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["lambda_exact"].as_i64().unwrap())
        .collect();
    lambdas.sort_unstable();
    assert_eq!(lambdas, vec![-2, 0, 0, 2]);
}

#[test]
fn verify_round_trip_on_stored_report() {
    let dir = std::env::temp_dir().join("frevival-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let report_path = dir.join("z6xd3_report.json");
    let out = frevival(&[
        "analyze",
        sample("z6xd3.json").to_str().unwrap(),
        "--json-out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = frevival(&["verify", report_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert!(doc["pass"].as_bool().unwrap());
    assert!(doc["witness_count_matches"].as_bool().unwrap());
    assert_eq!(doc["witnesses"].as_array().unwrap().len(), 2);
}

#[test]
fn extra_times_are_probed() {
    let out = frevival(&[
        "analyze",
        sample("z4_cycle.json").to_str().unwrap(),
        "--times",
        "1.5707963267948966,0.4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let probes = doc["extra_times"].as_array().unwrap();
    assert_eq!(probes.len(), 2);
    assert!(probes[0]["revival_shape"].as_bool().unwrap());
    assert!(!probes[1]["revival_shape"].as_bool().unwrap());
}

#[test]
fn scan_rejects_excessive_max_order() {
    let out = frevival(&["scan", "--max-order", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("512"));
}

#[test]
fn scan_accepts_user_supplied_group_files() {
    let dir = std::env::temp_dir().join("frevival-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("klein.json");
    // the Klein four-group as an explicit table
    std::fs::write(
        &path,
        br#"{"kind": "explicit-table", "table": [[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]]}"#,
    )
    .unwrap();
    let out = frevival(&[
        "scan",
        "--max-order",
        "2",
        "--families",
        "abelian",
        "--group-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    let groups: Vec<&str> = doc["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["group"].as_str().unwrap())
        .collect();
    assert!(groups.contains(&"klein"), "groups: {groups:?}");
    assert!(doc["violations"].as_array().unwrap().is_empty());
}

#[test]
fn size_cap_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_frevival"))
        .args(["analyze", sample("z6xd3.json").to_str().unwrap()])
        .env("FREVIVAL_SIZE_CAP", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cap"), "stderr: {err}");
}
