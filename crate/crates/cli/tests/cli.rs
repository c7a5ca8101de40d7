// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use decoscatter::linalg::binary_entropy;

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"))
        .join("cli")
        .join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn decoscatter(experiment: &str, config: &str, dir: &Path, extra: &[&str]) -> Output {
    let path = dir.join("config.json");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_decoscatter"))
        .arg(experiment)
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

/// Data rows of a CSV artifact as name -> values, skipping the trailing hash line.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

const NARROW: &str = r#"{
  "params": { "mass": 1.0, "coupling": 1.0, "spins": 1 },
  "spec": { "k0": 1.0, "sigma0": 40.0, "y0": -400.0 }
}"#;

#[test]
fn narrow_single_spin_row() {
    let dir = scratch("narrow");
    let o = decoscatter("narrow", NARROW, &dir, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = read_csv(&dir.join("out/narrow.csv"));
    assert_eq!(rows.len(), 1);
    assert!((column(&h, &rows, "p_reflect")[0] - 0.2).abs() < 1e-12);
    assert!((column(&h, &rows, "entropy")[0] - binary_entropy(0.2)).abs() < 1e-12);
    let text = std::fs::read_to_string(dir.join("out/narrow.csv")).unwrap();
    assert!(text.lines().last().unwrap().starts_with("# config_sha256="));
    assert!(text.contains("2.0000000000000004e-1"));
}

#[test]
fn free_amplitudes_are_transparent() {
    let dir = scratch("amplitudes");
    let config = r#"{
      "params": { "mass": 1.0, "coupling": 0.0, "spins": 3 },
      "spec": { "k0": 2.0, "sigma0": 5.0, "y0": -50.0 },
      "sweep": { "parameter": "k", "range": { "start": 0.1, "stop": 20.0, "count": 15, "spacing": "log" } }
    }"#;
    let o = decoscatter("amplitudes", config, &dir, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = read_csv(&dir.join("out/amplitudes.csv"));
    assert_eq!(rows.len(), 15 * 4);
    assert!(column(&h, &rows, "abs_a").iter().all(|&a| a == 0.0));
    assert!(column(&h, &rows, "abs_b").iter().all(|&b| b == 1.0));
}

#[test]
fn broad_packet_mixes_more_than_two_channels() {
    let dir = scratch("broad");
    let config = r#"{
      "params": { "mass": 1.0, "coupling": 0.5, "spins": 100 },
      "spec": { "k0": 5.0, "sigma0": 0.4, "y0": -4.0 },
      "grid": { "points": 1024 },
      "mode": "full",
      "sweep": { "parameter": "mu", "values": [0.0, 0.5] }
    }"#;
    let o = decoscatter("entropy-scan", config, &dir, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = read_csv(&dir.join("out/entropy_scan.csv"));
    let full = column(&h, &rows, "entropy");
    let narrow = column(&h, &rows, "narrow_entropy");
    assert!(full[0].abs() < 1e-12, "free entropy {}", full[0]);
    assert!(
        full[1] > narrow[1] + 1e-3,
        "full {} narrow {}",
        full[1],
        narrow[1]
    );
}

#[test]
fn entropy_scan_finds_ln2() {
    let dir = scratch("scan");
    let config = r#"{
      "params": { "mass": 1.0, "coupling": 1.0, "spins": 1 },
      "spec": { "k0": 0.5, "sigma0": 200.0, "y0": -2000.0 },
      "mode": "narrow",
      "sweep": { "parameter": "k0", "range": { "start": 0.05, "stop": 5.0, "count": 201, "spacing": "log" } }
    }"#;
    let o = decoscatter("entropy-scan", config, &dir, &["--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!dir.join("out/entropy_scan.csv").exists());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/entropy_scan.json")).unwrap())
            .unwrap();
    assert!((v["max_entropy"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-3);
    assert!((v["argmax"].as_f64().unwrap() - 0.5).abs() < 0.02);
    assert_eq!(v["bound_respected"], serde_json::Value::Bool(true));
}

#[test]
fn oracle_report_within_tolerance() {
    let dir = scratch("oracle");
    let config = r#"{
      "params": { "mass": 1.0, "coupling": 1.0, "spins": 1 },
      "spec": { "k0": 10.0, "sigma0": 2.0, "y0": -30.0 },
      "oracle": { "n_y": 8192, "density_points": 256 }
    }"#;
    let o = decoscatter("oracle-validate", config, &dir, &["--threads", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("out/oracle_validate.json")).unwrap(),
    )
    .unwrap();
    let point = &v["points"][0];
    assert!(point["max_channel_deviation"].as_f64().unwrap() < 1e-3);
    assert!(point["density_max_deviation_relative"].as_f64().unwrap() < 1e-3);
    assert_eq!(point["pass"], serde_json::Value::Bool(true));
}

#[test]
fn unknown_field_is_a_config_error() {
    let dir = scratch("unknown");
    let config = NARROW.replace("\"spins\": 1", "\"spins\": 1, \"spin\": 2");
    let o = decoscatter("narrow", &config, &dir, &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("spin") && err.contains("line 2"), "{err}");
}

#[test]
fn malformed_json_reports_position() {
    let dir = scratch("malformed");
    let o = decoscatter("narrow", "{\n  \"params\": [\n", &dir, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"));
}

#[test]
fn missing_section_is_a_config_error() {
    let dir = scratch("missing");
    let o = decoscatter("lindblad", NARROW, &dir, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`lindblad`"));
}

#[test]
fn experiment_mismatch_is_a_config_error() {
    let dir = scratch("mismatch");
    let config = NARROW.replacen('{', "{ \"experiment\": \"amplitudes\",", 1);
    let o = decoscatter("narrow", &config, &dir, &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn broad_packet_in_narrow_mode_is_rejected() {
    let dir = scratch("not-narrow");
    let config = NARROW.replace("\"sigma0\": 40.0", "\"sigma0\": 2.0");
    let o = decoscatter("narrow", &config, &dir, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("full-density"));
}

#[test]
fn unstable_step_is_a_numerical_failure() {
    let dir = scratch("unstable");
    let config = r#"{
      "params": { "mass": 1.0, "coupling": 0.0, "spins": 1 },
      "spec": { "k0": 0.25, "sigma0": 1.0, "y0": -1.0 },
      "lindblad": { "n_y": 128, "y_extent": 10.0, "gamma": 0.1, "jump": "position", "dt": 0.5, "t_final": 4.0 }
    }"#;
    let o = decoscatter("lindblad", config, &dir, &[]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("unstable"));
}

#[test]
fn manifest_lists_every_artifact() {
    let dir = scratch("manifest");
    let o = decoscatter("narrow", NARROW, &dir, &[]);
    assert!(o.status.success());
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/manifest.json")).unwrap())
            .unwrap();
    let files: Vec<&str> = m["artifacts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["file"].as_str().unwrap())
        .collect();
    assert_eq!(files, ["narrow.csv", "narrow.json"]);
    let hash = m["config_sha256"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    let csv = std::fs::read_to_string(dir.join("out/narrow.csv")).unwrap();
    assert!(csv.ends_with(&format!("# config_sha256={hash}\n")));

    // whitespace and key order do not change the hash
    let dir2 = scratch("manifest-reordered");
    let reordered = r#"{"spec":{"y0":-400.0,"sigma0":40.0,"k0":1.0},"params":{"spins":1,"coupling":1.0,"mass":1.0}}"#;
    assert!(decoscatter("narrow", reordered, &dir2, &[])
        .status
        .success());
    let m2 = std::fs::read(dir2.join("out/manifest.json")).unwrap();
    assert_eq!(std::fs::read(dir.join("out/manifest.json")).unwrap(), m2);
}
