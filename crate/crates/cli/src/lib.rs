// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! Experiment driver behind the `decoscatter` binary.
//!
//! A run reads one JSON config, evaluates the named experiment at every sweep
//! point, and writes CSV/JSON artifacts plus `manifest.json` into the output
//! directory. Column layouts and the config schema are in `SCHEMA.md`.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};

pub use config::{Experiment, ExperimentConfig, Format};
pub use output::Manifest;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: &str, reason: impl std::fmt::Display) -> Self {
        CliError::Config(format!("field `{field}`: {reason}"))
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Parameter and regime errors are configuration problems; everything
    /// else is a numerical failure.
    pub fn from_core(e: decoscatter::Error) -> Self {
        use decoscatter::Error as E;
        match e {
            E::InvalidParameter { .. }
            | E::InvalidMomentum(_)
            | E::NotNarrow { .. }
            | E::Coverage { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

/// Runs `experiment` and writes its artifacts to `out`.
pub fn run(
    experiment: Experiment,
    config: &ExperimentConfig,
    out: &Path,
) -> Result<Manifest, CliError> {
    config.validate(experiment)?;
    let hash = output::sha256_hex(config.canonical().as_bytes());
    let formats = config.formats();
    let artifacts: Vec<_> = experiments::run(experiment, config, &hash)?
        .into_iter()
        .filter(|a| formats.contains(&a.format))
        .collect();
    output::write_all(out, experiment.name(), &hash, &artifacts)
}

/// Reads `path`, applies command-line overrides and runs.
pub fn run_file(
    experiment: Experiment,
    path: &Path,
    out: Option<&Path>,
    formats: Option<Vec<Format>>,
) -> Result<Manifest, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut config = ExperimentConfig::parse(&text)?;
    if let Some(f) = formats {
        config.formats = Some(f);
    }
    let out = out
        .map(Path::to_path_buf)
        .or_else(|| config.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    run(experiment, &config, &out)
}
