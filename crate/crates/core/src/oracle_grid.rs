// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force check of the closed forms: time-dependent evolution of the
//! relative coordinate in each sector on a uniform position grid.
//!
//! The Hamiltonian is `-(1/2m) d^2/dy^2 + mu m_s delta_reg(y)` with a
//! three-point Laplacian and Dirichlet walls. Time stepping is Crank-Nicolson
//! (Cayley form), which is exactly unitary and commutes with the discrete
//! Hamiltonian, so norm and energy are conserved to rounding. The walls sit
//! far enough out that the packet never feels them.
//!
//! Nothing here uses the scattering amplitudes; the comparison happens in the
//! callers.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{entropy_of_spectrum, hermitian_eigenvalues, weighted_gram};
use crate::reduced_density::{DensityMatrix, SectorMixture};
use crate::spin_bath::{enumerate_sectors, mirror_pair_fold, ModelParams, SpinSector};
use crate::wavepacket::{free_relative_packet, relative_packet_position, MomentumGrid, PacketSpec};

pub const BOUNDARY_LEAK_THRESHOLD: f64 = 1e-8;
pub const NORM_DRIFT_THRESHOLD: f64 = 1e-8;
pub const COMPLETION_THRESHOLD: f64 = 1e-6;
/// Maximum `w * k0` for the Gaussian regularization.
pub const MAX_GAUSSIAN_WIDTH_K0: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum DeltaMode {
    /// Spike of height `mu m_s / dy` on the origin bin.
    SingleBin,
    /// Area-normalized Gaussian of the given width.
    NarrowGaussian { width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridOracleConfig {
    /// Box is `[-y_extent, y_extent)`.
    pub y_extent: f64,
    pub n_y: usize,
    pub dt: f64,
    pub t_final: f64,
    pub delta_mode: DeltaMode,
    pub spec: PacketSpec,
    pub params: ModelParams,
    /// Norm, energy and wall checks every this many steps.
    pub diagnostic_stride: usize,
    /// Keep full snapshots every this many steps.
    pub snapshot_stride: Option<usize>,
}

impl GridOracleConfig {
    /// Horizon that carries the packet centre from `y0` to `-y0`, a box of
    /// half-width at least `2|y0|`, and `E0 dt / 2 <= 0.05`.
    pub fn benchmark(spec: PacketSpec, params: ModelParams, n_y: usize) -> Self {
        let v = spec.k0 / params.mass;
        let e0 = spec.k0 * spec.k0 / (2.0 * params.mass);
        let t_final = 2.0 * spec.y0.abs() / v;
        let dt_target = (0.1 / e0).min(0.01);
        let steps = (t_final / dt_target).ceil();
        // outgoing packets end near |y0|; leave ten final widths to the wall
        let width_growth = spec.momentum_width() / std::f64::consts::SQRT_2 * t_final / params.mass;
        let final_spread = spec.position_spread().hypot(width_growth);
        Self {
            y_extent: (2.0 * spec.y0.abs()).max(spec.y0.abs() + 10.0 * final_spread),
            n_y,
            dt: t_final / steps,
            t_final,
            delta_mode: DeltaMode::SingleBin,
            spec,
            params,
            diagnostic_stride: 10,
            snapshot_stride: None,
        }
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    pub fn dy(&self) -> f64 {
        2.0 * self.y_extent / self.n_y as f64
    }

    pub fn position(&self, j: usize) -> f64 {
        self.y_extent * ((2 * j) as f64 / self.n_y as f64 - 1.0)
    }

    pub fn origin_index(&self) -> usize {
        self.n_y / 2
    }

    /// Time at which the incoming packet centre reaches the origin.
    pub fn collision_time(&self) -> f64 {
        self.spec.y0.abs() * self.params.mass / self.spec.k0
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        self.params.validate()?;
        if self.n_y < 16 || !self.n_y.is_power_of_two() {
            return Err(invalid(
                "n_y",
                format!("must be a power of two >= 16, got {}", self.n_y),
            ));
        }
        if !(self.y_extent > 0.0 && self.y_extent.is_finite()) {
            return Err(invalid("y_extent", "must be positive"));
        }
        if !(self.dt > 0.0 && self.t_final > 0.0) {
            return Err(invalid("dt", "time step and horizon must be positive"));
        }
        if self.diagnostic_stride == 0 || self.snapshot_stride == Some(0) {
            return Err(invalid("stride", "strides must be at least 1"));
        }
        let min_separation = 5.0 * 2.0 * self.spec.sigma0;
        if self.spec.y0 >= -min_separation {
            return Err(invalid(
                "y0",
                format!(
                    "packet must start left of -{min_separation} (10 sigma0), got {}",
                    self.spec.y0
                ),
            ));
        }
        if self.spec.y0 <= -self.y_extent {
            return Err(invalid("y0", "packet centre lies outside the box"));
        }
        if let DeltaMode::NarrowGaussian { width } = self.delta_mode {
            if !(width > 0.0 && width * self.spec.k0 <= MAX_GAUSSIAN_WIDTH_K0) {
                return Err(invalid(
                    "delta_mode.width",
                    format!(
                        "need 0 < w*k0 <= {MAX_GAUSSIAN_WIDTH_K0}, got {}",
                        width * self.spec.k0
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn potential(&self, sector: &SpinSector) -> Vec<f64> {
        let strength = self.params.coupling * sector.net_spin();
        let dy = self.dy();
        let mut v = vec![0.0; self.n_y];
        match self.delta_mode {
            DeltaMode::SingleBin => v[self.origin_index()] = strength / dy,
            DeltaMode::NarrowGaussian { width } => {
                let profile: Vec<f64> = (0..self.n_y)
                    .map(|j| {
                        let y = self.position(j) / width;
                        (-0.5 * y * y).exp()
                    })
                    .collect();
                let area: f64 = profile.iter().sum::<f64>() * dy;
                for (vj, p) in v.iter_mut().zip(&profile) {
                    *vj = strength * p / area;
                }
            }
        }
        v
    }

    fn edge_bins(&self) -> usize {
        (self.n_y / 64).max(1)
    }
}

/// Discrete Hamiltonian `h0 + V_j` on the diagonal, `off` beside it.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn new(cfg: &GridOracleConfig, potential: &[f64], with_potential: bool) -> Self {
        let dy = cfg.dy();
        let h0 = 1.0 / (cfg.params.mass * dy * dy);
        let diag = potential
            .iter()
            .map(|v| if with_potential { h0 + v } else { h0 })
            .collect();
        Self {
            diag,
            off: -0.5 * h0,
        }
    }

    fn expectation(&self, psi: &[Complex64], dy: f64) -> f64 {
        let n = psi.len();
        let mut acc = 0.0;
        for j in 0..n {
            let mut h = psi[j] * self.diag[j];
            if j > 0 {
                h += psi[j - 1] * self.off;
            }
            if j + 1 < n {
                h += psi[j + 1] * self.off;
            }
            acc += (psi[j].conj() * h).re;
        }
        acc * dy
    }
}

/// `(1 + i dt H / 2) psi' = (1 - i dt H / 2) psi`, factorized once.
struct CrankNicolson {
    alpha: Complex64,
    hamiltonian: Tridiagonal,
    upper: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
    rhs: Vec<Complex64>,
}

impl CrankNicolson {
    fn new(hamiltonian: Tridiagonal, dt: f64) -> Self {
        let n = hamiltonian.diag.len();
        let alpha = Complex64::new(0.0, 0.5 * dt);
        let c = alpha * hamiltonian.off;
        let mut upper = vec![Complex64::new(0.0, 0.0); n];
        let mut inv_pivot = vec![Complex64::new(0.0, 0.0); n];
        let mut prev_upper = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let d = Complex64::new(1.0, 0.0) + alpha * hamiltonian.diag[j];
            let pivot = if j == 0 { d } else { d - c * prev_upper };
            inv_pivot[j] = pivot.inv();
            upper[j] = c * inv_pivot[j];
            prev_upper = upper[j];
        }
        Self {
            alpha,
            hamiltonian,
            upper,
            inv_pivot,
            rhs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    fn step(&mut self, psi: &mut [Complex64]) {
        let n = psi.len();
        let h = &self.hamiltonian;
        let c = self.alpha * h.off;
        for j in 0..n {
            let mut r = psi[j] * (Complex64::new(1.0, 0.0) - self.alpha * h.diag[j]);
            if j > 0 {
                r -= c * psi[j - 1];
            }
            if j + 1 < n {
                r -= c * psi[j + 1];
            }
            self.rhs[j] = r;
        }
        // forward sweep
        let mut prev = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let r = if j == 0 {
                self.rhs[0]
            } else {
                self.rhs[j] - c * prev
            };
            prev = r * self.inv_pivot[j];
            self.rhs[j] = prev;
        }
        // back substitution
        psi[n - 1] = self.rhs[n - 1];
        for j in (0..n - 1).rev() {
            psi[j] = self.rhs[j] - self.upper[j] * psi[j + 1];
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleSample {
    pub t: f64,
    pub norm: f64,
    pub energy: f64,
    pub kinetic: f64,
    pub edge_probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorTrajectory {
    pub sector: SpinSector,
    pub dy: f64,
    pub steps: usize,
    /// `t_n = n dt` for every step including `t = 0`.
    pub times: Vec<f64>,
    /// `<V>` in this sector at every step.
    pub potential_mean: Vec<f64>,
    /// `<V^2>` of the regularized potential at every step.
    pub potential_sq: Vec<f64>,
    pub samples: Vec<OracleSample>,
    pub snapshots: Vec<(f64, Vec<Complex64>)>,
    pub final_state: Vec<Complex64>,
}

impl SectorTrajectory {
    pub fn initial(&self) -> &OracleSample {
        &self.samples[0]
    }

    pub fn last(&self) -> &OracleSample {
        self.samples.last().expect("trajectory has samples")
    }

    /// Largest `|norm(t) - 1|`.
    pub fn norm_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.norm - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `|<H>(t) - <H>(0)| / |<H>(0)|`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.initial().energy;
        self.samples
            .iter()
            .map(|s| (s.energy - e0).abs() / e0.abs())
            .fold(0.0, f64::max)
    }
}

/// Initial relative packet sampled on the grid and normalized to `sum |psi|^2 dy = 1`.
pub fn initial_state(cfg: &GridOracleConfig) -> Vec<Complex64> {
    let mut psi: Vec<Complex64> = (0..cfg.n_y)
        .map(|j| relative_packet_position(cfg.position(j), &cfg.spec))
        .collect();
    let norm = probability(&psi, cfg.dy()).sqrt();
    psi.iter_mut().for_each(|z| *z /= norm);
    psi
}

fn probability(psi: &[Complex64], dy: f64) -> f64 {
    psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * dy
}

fn potential_moments(psi: &[Complex64], potential: &[f64], dy: f64) -> (f64, f64) {
    potential
        .iter()
        .zip(psi)
        .filter(|(v, _)| **v != 0.0)
        .fold((0.0, 0.0), |(m, s), (v, z)| {
            let p = z.norm_sqr() * dy;
            (m + v * p, s + v * v * p)
        })
}

pub fn evolve_sector(sector: &SpinSector, cfg: &GridOracleConfig) -> Result<SectorTrajectory> {
    cfg.validate()?;
    let dy = cfg.dy();
    let steps = cfg.steps();
    let potential = cfg.potential(sector);
    let total = Tridiagonal::new(cfg, &potential, true);
    let kinetic = Tridiagonal::new(cfg, &potential, false);
    let edge = cfg.edge_bins();

    let mut psi = initial_state(cfg);
    let sample = |psi: &[Complex64], t: f64| {
        let edge_probability =
            (probability(&psi[..edge], dy) + probability(&psi[psi.len() - edge..], dy)).max(0.0);
        OracleSample {
            t,
            norm: probability(psi, dy),
            energy: total.expectation(psi, dy),
            kinetic: kinetic.expectation(psi, dy),
            edge_probability,
        }
    };
    let check = |s: &OracleSample| -> Result<()> {
        if s.edge_probability > BOUNDARY_LEAK_THRESHOLD {
            return Err(Error::BoundaryLeak {
                probability: s.edge_probability,
                threshold: BOUNDARY_LEAK_THRESHOLD,
                time: s.t,
            });
        }
        let drift = (s.norm - 1.0).abs();
        if drift > NORM_DRIFT_THRESHOLD {
            return Err(Error::NonConvergence {
                drift,
                threshold: NORM_DRIFT_THRESHOLD,
            });
        }
        Ok(())
    };

    let mut times = Vec::with_capacity(steps + 1);
    let mut potential_mean = Vec::with_capacity(steps + 1);
    let mut potential_sq = Vec::with_capacity(steps + 1);
    let mut samples = Vec::new();
    let mut snapshots = Vec::new();

    let first = sample(&psi, 0.0);
    check(&first)?;
    samples.push(first);
    let record = |psi: &[Complex64], mean: &mut Vec<f64>, sq: &mut Vec<f64>| {
        let (m, s) = potential_moments(psi, &potential, dy);
        mean.push(m);
        sq.push(s);
    };
    times.push(0.0);
    record(&psi, &mut potential_mean, &mut potential_sq);
    if cfg.snapshot_stride.is_some() {
        snapshots.push((0.0, psi.clone()));
    }

    let mut stepper = CrankNicolson::new(Tridiagonal::new(cfg, &potential, true), cfg.dt);
    for n in 1..=steps {
        stepper.step(&mut psi);
        let t = n as f64 * cfg.dt;
        times.push(t);
        record(&psi, &mut potential_mean, &mut potential_sq);
        if n % cfg.diagnostic_stride == 0 || n == steps {
            let s = sample(&psi, t);
            check(&s)?;
            samples.push(s);
        }
        if let Some(stride) = cfg.snapshot_stride {
            if n % stride == 0 {
                snapshots.push((t, psi.clone()));
            }
        }
    }

    Ok(SectorTrajectory {
        sector: *sector,
        dy,
        steps,
        times,
        potential_mean,
        potential_sq,
        samples,
        snapshots,
        final_state: psi,
    })
}

/// Evolves every sector independently; results come back ordered by `m_s`.
pub fn evolve_all_sectors(
    sectors: &[SpinSector],
    cfg: &GridOracleConfig,
) -> Result<Vec<SectorTrajectory>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        sectors.par_iter().map(|s| evolve_sector(s, cfg)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sectors.iter().map(|s| evolve_sector(s, cfg)).collect()
    }
}

/// Probability still within `|y| < 4 sigma0` of the origin.
pub fn probability_near_origin(state: &[Complex64], cfg: &GridOracleConfig) -> f64 {
    let radius = 4.0 * cfg.spec.sigma0;
    (0..cfg.n_y)
        .filter(|&j| cfg.position(j).abs() < radius)
        .map(|j| state[j].norm_sqr())
        .sum::<f64>()
        * cfg.dy()
}

/// `(P_reflect, P_transmit)` from `|psi|^2` on either side of the origin;
/// the origin bin is split evenly.
pub fn extract_channel_probabilities(
    trajectory: &SectorTrajectory,
    cfg: &GridOracleConfig,
) -> Result<crate::scattering::ChannelProbabilities> {
    let state = &trajectory.final_state;
    let remaining = probability_near_origin(state, cfg);
    if remaining >= COMPLETION_THRESHOLD {
        return Err(Error::Stale {
            remaining,
            radius: 4.0 * cfg.spec.sigma0,
        });
    }
    let dy = cfg.dy();
    let origin = cfg.origin_index();
    let mid = 0.5 * state[origin].norm_sqr() * dy;
    let reflect = probability(&state[..origin], dy) + mid;
    let transmit = probability(&state[origin + 1..], dy) + mid;
    Ok(crate::scattering::ChannelProbabilities { reflect, transmit })
}

/// Fidelity `|<phi_free(t)|psi>|^2` against the closed-form free packet.
pub fn free_packet_fidelity(state: &[Complex64], t: f64, cfg: &GridOracleConfig) -> f64 {
    let overlap: Complex64 = state
        .iter()
        .enumerate()
        .map(|(j, z)| {
            free_relative_packet(cfg.position(j), t, &cfg.spec, cfg.params.mass).conj() * z
        })
        .sum::<Complex64>()
        * cfg.dy();
    overlap.norm_sqr()
}

/// Per-step phase of the discrete free propagator at momentum `k`.
fn free_step_phase(k: f64, cfg: &GridOracleConfig) -> f64 {
    let dy = cfg.dy();
    let energy = (1.0 - (k * dy).cos()) / (cfg.params.mass * dy * dy);
    2.0 * (0.5 * energy * cfg.dt).atan()
}

/// Momentum amplitudes `(2pi)^{-1/2} sum_j psi_j e^{-i k y_j} dy` on `grid`,
/// with the discrete free evolution of `steps` steps undone.
pub fn momentum_amplitudes(
    state: &[Complex64],
    steps: usize,
    cfg: &GridOracleConfig,
    grid: &MomentumGrid,
) -> Vec<Complex64> {
    let dy = cfg.dy();
    let floor = state.iter().map(|z| z.norm()).fold(0.0, f64::max) * 1e-18;
    let lo = state.iter().position(|z| z.norm() > floor).unwrap_or(0);
    let hi = state.iter().rposition(|z| z.norm() > floor).unwrap_or(0);
    let scale = dy / (2.0 * std::f64::consts::PI).sqrt();
    const RESYNC: usize = 64;
    (0..grid.len())
        .map(|i| {
            let k = grid.value(i);
            let step = Complex64::from_polar(1.0, -k * dy);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut phasor = Complex64::new(0.0, 0.0);
            for (j, z) in state.iter().enumerate().take(hi + 1).skip(lo) {
                if (j - lo) % RESYNC == 0 {
                    phasor = Complex64::from_polar(1.0, -k * cfg.position(j));
                }
                acc += z * phasor;
                phasor *= step;
            }
            let unwind = Complex64::from_polar(1.0, steps as f64 * free_step_phase(k, cfg));
            acc * scale * unwind
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleDensity {
    pub trajectories: Vec<SectorTrajectory>,
    pub mixture: SectorMixture,
    pub density: DensityMatrix,
}

/// Evolves every sector, transforms the final states to `grid`, and traces
/// over the bath with the binomial weights.
pub fn oracle_density_matrix(cfg: &GridOracleConfig, grid: &MomentumGrid) -> Result<OracleDensity> {
    let sectors = enumerate_sectors(&cfg.params)?;
    let trajectories = evolve_all_sectors(&sectors, cfg)?;
    let states = trajectories
        .iter()
        .map(|t| momentum_amplitudes(&t.final_state, t.steps, cfg, grid))
        .collect();
    let mixture = SectorMixture {
        grid: *grid,
        weights: sectors.iter().map(|s| s.weight).collect(),
        twice_net_spins: sectors.iter().map(|s| s.twice_net_spin).collect(),
        states,
    };
    let density = mixture.to_density();
    Ok(OracleDensity {
        trajectories,
        mixture,
        density,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionMoments {
    pub t: f64,
    /// Bath-averaged `<V>`.
    pub mean: f64,
    /// Bath-averaged `<V^2>` of the regularized potential.
    pub mean_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionSeries {
    /// Regularization scale `1 / dy`.
    pub cutoff: f64,
    pub samples: Vec<InteractionMoments>,
}

/// Bath averages of the interaction energy and its square at every step.
/// `trajectories` must hold every sector of one bath, evolved on one grid.
pub fn interaction_energy_moments(
    trajectories: &[SectorTrajectory],
    cfg: &GridOracleConfig,
) -> Result<InteractionSeries> {
    let first = trajectories
        .first()
        .ok_or_else(|| Error::InvalidState("no sector trajectories".into()))?;
    if trajectories
        .iter()
        .any(|t| t.times.len() != first.times.len())
    {
        return Err(Error::InvalidState(
            "sector trajectories use different time grids".into(),
        ));
    }
    let samples = (0..first.times.len())
        .map(|n| {
            let mean = mirror_pair_fold(
                trajectories.len(),
                0.0,
                |i| trajectories[i].sector.weight * trajectories[i].potential_mean[n],
                |a, x| a + x,
            );
            let mean_sq = mirror_pair_fold(
                trajectories.len(),
                0.0,
                |i| trajectories[i].sector.weight * trajectories[i].potential_sq[n],
                |a, x| a + x,
            );
            InteractionMoments {
                t: first.times[n],
                mean,
                mean_sq,
            }
        })
        .collect();
    Ok(InteractionSeries {
        cutoff: 1.0 / cfg.dy(),
        samples,
    })
}

/// Bath-traced diagnostics at a snapshot time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedSample {
    pub t: f64,
    pub trace: f64,
    pub purity: f64,
    pub energy: f64,
    pub entropy: f64,
    pub v_mean: f64,
    pub v_sq: f64,
}

/// Trace, purity, energy and entropy of the reduced relative state at every
/// common snapshot. Requires `snapshot_stride`.
pub fn reduced_timeseries(
    trajectories: &[SectorTrajectory],
    cfg: &GridOracleConfig,
) -> Result<Vec<ReducedSample>> {
    let stride = cfg.snapshot_stride.ok_or_else(|| {
        Error::InvalidState("snapshot_stride is required for the reduced time series".into())
    })?;
    let first = trajectories
        .first()
        .ok_or_else(|| Error::InvalidState("no sector trajectories".into()))?;
    let weights: Vec<f64> = trajectories.iter().map(|t| t.sector.weight).collect();
    let dy = cfg.dy();
    let mut out = Vec::with_capacity(first.snapshots.len());
    for (s, (t, _)) in first.snapshots.iter().enumerate() {
        let states: Vec<Vec<Complex64>> = trajectories
            .iter()
            .map(|tr| tr.snapshots[s].1.clone())
            .collect();
        let eig = hermitian_eigenvalues(&weighted_gram(&weights, &states, dy));
        let step = s * stride;
        let energy: f64 = trajectories
            .iter()
            .map(|tr| {
                let potential = cfg.potential(&tr.sector);
                tr.sector.weight
                    * Tridiagonal::new(cfg, &potential, true).expectation(&tr.snapshots[s].1, dy)
            })
            .sum();
        let v_mean: f64 = trajectories
            .iter()
            .map(|tr| tr.sector.weight * tr.potential_mean[step])
            .sum();
        let v_sq: f64 = trajectories
            .iter()
            .map(|tr| tr.sector.weight * tr.potential_sq[step])
            .sum();
        out.push(ReducedSample {
            t: *t,
            trace: eig.iter().sum(),
            purity: eig.iter().map(|l| l * l).sum(),
            energy,
            entropy: entropy_of_spectrum(&eig),
            v_mean,
            v_sq,
        });
    }
    Ok(out)
}

/// CSV dump `t,y,re_psi,im_psi` of the stored snapshots, every `stride`-th
/// grid point.
pub fn write_trajectory_csv<W: Write>(
    trajectory: &SectorTrajectory,
    cfg: &GridOracleConfig,
    stride: usize,
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "t,y,re_psi,im_psi")?;
    for (t, state) in &trajectory.snapshots {
        for j in (0..state.len()).step_by(stride.max(1)) {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                t,
                cfg.position(j),
                state[j].re,
                state[j].im
            )?;
        }
    }
    Ok(())
}
