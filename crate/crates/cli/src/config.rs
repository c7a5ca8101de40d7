// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: one JSON document per run, see `SCHEMA.md`.

use std::fmt;

use decoscatter::lindblad_contrast::{JumpChoice, LindbladConfig};
use decoscatter::oracle_grid::{DeltaMode, GridOracleConfig};
use decoscatter::wavepacket::DEFAULT_GRID_POINTS;
use decoscatter::{ModelParams, MomentumGrid, PacketSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Amplitudes,
    Narrow,
    FullDensity,
    OracleValidate,
    EntropyScan,
    Lindblad,
    Contrast,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Amplitudes => "amplitudes",
            Experiment::Narrow => "narrow",
            Experiment::FullDensity => "full-density",
            Experiment::OracleValidate => "oracle-validate",
            Experiment::EntropyScan => "entropy-scan",
            Experiment::Lindblad => "lindblad",
            Experiment::Contrast => "contrast",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Narrow,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    K,
    K0,
    Sigma0,
    Mu,
    Spins,
    Mass,
    Gamma,
}

impl SweepParameter {
    pub fn column(self) -> &'static str {
        match self {
            SweepParameter::K => "k",
            SweepParameter::K0 => "k0",
            SweepParameter::Sigma0 => "sigma0",
            SweepParameter::Mu => "mu",
            SweepParameter::Spins => "spins",
            SweepParameter::Mass => "mass",
            SweepParameter::Gamma => "gamma",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default = "linear")]
    pub spacing: Spacing,
}

fn linear() -> Spacing {
    Spacing::Linear
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: SweepParameter,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<Range>,
}

impl Sweep {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        let values = match (&self.values, &self.range) {
            (Some(v), None) => v.clone(),
            (None, Some(r)) => {
                if r.count < 2 {
                    return Err(CliError::config(
                        "sweep.range.count",
                        "need at least 2 points",
                    ));
                }
                let last = (r.count - 1) as f64;
                match r.spacing {
                    Spacing::Linear => (0..r.count)
                        .map(|i| r.start + (r.stop - r.start) * i as f64 / last)
                        .collect(),
                    Spacing::Log => {
                        if !(r.start > 0.0 && r.stop > 0.0) {
                            return Err(CliError::config(
                                "sweep.range",
                                "log spacing needs positive bounds",
                            ));
                        }
                        let (a, b) = (r.start.ln(), r.stop.ln());
                        (0..r.count)
                            .map(|i| (a + (b - a) * i as f64 / last).exp())
                            .collect()
                    }
                }
            }
            _ => {
                return Err(CliError::config(
                    "sweep",
                    "give exactly one of `values` or `range`",
                ))
            }
        };
        if values.is_empty() {
            return Err(CliError::config("sweep.values", "empty sweep"));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(CliError::config(
                "sweep.values",
                format!("non-finite value {bad}"),
            ));
        }
        if self.parameter == SweepParameter::Spins {
            if let Some(bad) = values
                .iter()
                .find(|v| v.fract() != 0.0 || **v < 0.0 || **v > u32::MAX as f64)
            {
                return Err(CliError::config(
                    "sweep.values",
                    format!("spins must be a non-negative integer, got {bad}"),
                ));
            }
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<f64>,
}

fn default_points() -> usize {
    DEFAULT_GRID_POINTS
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            points: DEFAULT_GRID_POINTS,
            k_max: None,
        }
    }
}

impl GridSection {
    pub fn build(&self, spec: &PacketSpec) -> decoscatter::Result<MomentumGrid> {
        match self.k_max {
            Some(k_max) => MomentumGrid::new(self.points, k_max),
            None => MomentumGrid::for_packet(spec, self.points),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub n_y: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_mode: Option<DeltaMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_extent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic_stride: Option<usize>,
    /// Momentum grid for the oracle density matrix.
    #[serde(default = "default_density_points")]
    pub density_points: usize,
}

fn default_density_points() -> usize {
    512
}

impl OracleSection {
    pub fn build(&self, spec: PacketSpec, params: ModelParams) -> GridOracleConfig {
        let mut cfg = GridOracleConfig::benchmark(spec, params, self.n_y);
        if let Some(mode) = self.delta_mode {
            cfg.delta_mode = mode;
        }
        if let Some(t_final) = self.t_final {
            cfg.t_final = t_final;
        }
        if let Some(dt) = self.dt {
            cfg.dt = dt;
        }
        if let Some(l) = self.y_extent {
            cfg.y_extent = l;
        }
        if let Some(s) = self.diagnostic_stride {
            cfg.diagnostic_stride = s;
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LindbladSection {
    pub n_y: usize,
    pub y_extent: f64,
    pub gamma: f64,
    pub jump: JumpChoice,
    pub dt: f64,
    pub t_final: f64,
    #[serde(default = "default_stride")]
    pub sample_stride: usize,
    /// Packet for the master-equation run; defaults to the top-level `spec`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<PacketSpec>,
}

fn default_stride() -> usize {
    10
}

impl LindbladSection {
    pub fn build(
        &self,
        spec: PacketSpec,
        params: ModelParams,
        gamma: Option<f64>,
    ) -> LindbladConfig {
        LindbladConfig {
            n_y: self.n_y,
            y_extent: self.y_extent,
            gamma: gamma.unwrap_or(self.gamma),
            jump: self.jump,
            dt: self.dt,
            t_final: self.t_final,
            sample_stride: self.sample_stride,
            params,
            spec: self.spec.unwrap_or(spec),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    pub params: ModelParams,
    pub spec: PacketSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lindblad: Option<LindbladSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ScanMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub narrowness_threshold: Option<f64>,
    /// Output directory; `--out` overrides it. Not part of the config hash.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formats: Option<Vec<Format>>,
}

/// One sweep point with the swept value applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub value: Option<f64>,
    pub params: ModelParams,
    pub spec: PacketSpec,
    /// Scattering momentum for `amplitudes`; `spec.k0` unless swept.
    pub k: f64,
    pub gamma: Option<f64>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!(
                "config line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    /// Canonical form used for the config hash: compact JSON of the parsed
    /// document with the output directory removed.
    pub fn canonical(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        serde_json::to_string(&c).expect("config serializes")
    }

    pub fn formats(&self) -> Vec<Format> {
        let mut f = self
            .formats
            .clone()
            .unwrap_or_else(|| vec![Format::Csv, Format::Json]);
        f.sort();
        f.dedup();
        f
    }

    pub fn threshold(&self) -> f64 {
        self.narrowness_threshold
            .unwrap_or(decoscatter::wavepacket::DEFAULT_NARROWNESS_THRESHOLD)
    }

    pub fn validate(&self, experiment: Experiment) -> Result<(), CliError> {
        if let Some(e) = self.experiment {
            if e != experiment {
                return Err(CliError::config(
                    "experiment",
                    format!("config is for `{e}` but `{experiment}` was requested"),
                ));
            }
        }
        self.params.validate().map_err(CliError::from_core)?;
        self.spec.validate().map_err(CliError::from_core)?;
        if self.formats.as_ref().is_some_and(|f| f.is_empty()) {
            return Err(CliError::config(
                "formats",
                "select at least one of csv, json",
            ));
        }
        let needs = |present: bool, field: &str| {
            if present {
                Ok(())
            } else {
                Err(CliError::config(
                    field,
                    format!("section required by `{experiment}`"),
                ))
            }
        };
        match experiment {
            Experiment::OracleValidate => needs(self.oracle.is_some(), "oracle")?,
            Experiment::Lindblad => needs(self.lindblad.is_some(), "lindblad")?,
            Experiment::Contrast => {
                needs(self.oracle.is_some(), "oracle")?;
                needs(self.lindblad.is_some(), "lindblad")?;
            }
            Experiment::EntropyScan => {
                needs(self.mode.is_some(), "mode")?;
                needs(self.sweep.is_some(), "sweep")?;
            }
            _ => {}
        }
        if let Some(sweep) = &self.sweep {
            let allowed: &[SweepParameter] = match experiment {
                Experiment::Amplitudes => &[
                    SweepParameter::K,
                    SweepParameter::Mu,
                    SweepParameter::Spins,
                    SweepParameter::Mass,
                ],
                Experiment::EntropyScan => &[
                    SweepParameter::K0,
                    SweepParameter::Spins,
                    SweepParameter::Mu,
                ],
                Experiment::Lindblad => &[SweepParameter::Gamma],
                Experiment::Contrast => &[SweepParameter::Gamma],
                _ => &[
                    SweepParameter::K0,
                    SweepParameter::Sigma0,
                    SweepParameter::Mu,
                    SweepParameter::Spins,
                    SweepParameter::Mass,
                ],
            };
            if !allowed.contains(&sweep.parameter) {
                return Err(CliError::config(
                    "sweep.parameter",
                    format!(
                        "`{}` cannot be swept in `{experiment}`",
                        sweep.parameter.column()
                    ),
                ));
            }
            sweep.points()?;
        }
        for point in self.points()? {
            point.params.validate().map_err(CliError::from_core)?;
            point.spec.validate().map_err(CliError::from_core)?;
            if !(point.k.is_finite() && point.k > 0.0) {
                return Err(CliError::config(
                    "sweep.values",
                    format!("k must be positive, got {}", point.k),
                ));
            }
            if point.gamma.is_some_and(|g| !(g.is_finite() && g >= 0.0)) {
                return Err(CliError::config(
                    "sweep.values",
                    "gamma must be non-negative",
                ));
            }
        }
        Ok(())
    }

    pub fn points(&self) -> Result<Vec<Point>, CliError> {
        let base = Point {
            value: None,
            params: self.params,
            spec: self.spec,
            k: self.spec.k0,
            gamma: None,
        };
        let Some(sweep) = &self.sweep else {
            return Ok(vec![base]);
        };
        Ok(sweep
            .points()?
            .into_iter()
            .map(|v| {
                let mut p = base;
                p.value = Some(v);
                match sweep.parameter {
                    SweepParameter::K => p.k = v,
                    SweepParameter::K0 => {
                        p.spec.k0 = v;
                        p.k = v;
                    }
                    SweepParameter::Sigma0 => p.spec.sigma0 = v,
                    SweepParameter::Mu => p.params.coupling = v,
                    SweepParameter::Spins => p.params.spins = v as u32,
                    SweepParameter::Mass => p.params.mass = v,
                    SweepParameter::Gamma => p.gamma = Some(v),
                }
                p
            })
            .collect())
    }
}
