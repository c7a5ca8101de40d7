// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! Artifact rendering. Every float is written as `{:.16e}` (17 significant
//! digits), in CSV and JSON alike, so identical runs give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::Format;
use crate::CliError;

pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "nan".to_string()
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::I(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x as i64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::I(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self {
            header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Header, rows, then `# config_sha256=<hash>`.
    pub fn render(&self, config_hash: &str) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::F(x) => float(*x),
                    Cell::I(i) => i.to_string(),
                    Cell::S(s) => s.clone(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        let _ = writeln!(out, "# config_sha256={config_hash}");
        out
    }
}

/// Pretty JSON with fixed float formatting. Object keys keep insertion order
/// from `serde_json::Map` (sorted, without `preserve_order`).
pub fn render_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

pub fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("record serializes")
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&float(n.as_f64().unwrap_or(f64::NAN)).replace("nan", "null"));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push_str(": ");
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file: String,
    pub format: Format,
    pub content: String,
}

impl Artifact {
    pub fn csv(file: &str, table: &Table, config_hash: &str) -> Self {
        Self {
            file: file.to_string(),
            format: Format::Csv,
            content: table.render(config_hash),
        }
    }

    pub fn json(file: &str, value: &Value) -> Self {
        Self {
            file: file.to_string(),
            format: Format::Json,
            content: render_json(value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestEntry {
    pub file: String,
    pub format: Format,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: String,
    pub config_sha256: String,
    pub artifacts: Vec<ManifestEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// Writes artifacts in order, then the manifest.
pub fn write_all(
    dir: &Path,
    experiment: &str,
    config_hash: &str,
    artifacts: &[Artifact],
) -> Result<Manifest, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut entries = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        let path = dir.join(&a.file);
        fs::write(&path, &a.content).map_err(|e| CliError::io(&path, e))?;
        entries.push(ManifestEntry {
            file: a.file.clone(),
            format: a.format,
            bytes: a.content.len(),
            sha256: sha256_hex(a.content.as_bytes()),
        });
    }
    let manifest = Manifest {
        tool: "decoscatter",
        version: env!("CARGO_PKG_VERSION"),
        experiment: experiment.to_string(),
        config_sha256: config_hash.to_string(),
        artifacts: entries,
    };
    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, render_json(&to_value(&manifest))).map_err(|e| CliError::io(&path, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(float(0.2), "2.0000000000000001e-1");
        assert_eq!(float(1.0), "1.0000000000000000e0");
        let back: f64 = float(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn table_ends_with_hash() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![1.5.into(), 3_i64.into()]);
        let text = t.render("abc");
        assert_eq!(text, "a,b\n1.5000000000000000e0,3\n# config_sha256=abc\n");
    }

    #[test]
    fn json_is_valid_and_stable() {
        let v =
            serde_json::json!({"x": 0.1, "n": 3, "s": "q\"", "list": [1.0, true, null], "e": {}});
        let text = render_json(&v);
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
        assert_eq!(back["n"].as_u64(), Some(3));
        assert_eq!(text, render_json(&v));
    }
}
