// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! Markovian dephasing of a free packet, for contrast with the exact model.
//!
//! ```text
//! d rho / dt = -i [H, rho] + gamma (L rho L - 1/2 {L^2, rho}),
//! ```
//!
//! with a Hermitian, dimensionless jump `L = y / sigma0` (position) or
//! `L = sigma0 |p|` (momentum). Position dephasing heats the packet at the
//! constant rate `d<p^2>/dt = gamma / sigma0^2`; momentum dephasing commutes
//! with the free Hamiltonian and leaves the energy alone.
//!
//! The grid is a Dirichlet box with the three-point Laplacian, the same
//! discretization as the oracle. Position runs integrate in the position
//! basis; momentum runs integrate in the sine eigenbasis of the Laplacian,
//! where `|p|` is diagonal. Both use classical RK4.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{entropy_of_spectrum, hermitian_eigenvalues, linear_fit};
use crate::spin_bath::ModelParams;
use crate::wavepacket::{relative_packet_position, PacketSpec};

pub const TRACE_TOLERANCE: f64 = 1e-6;
/// RK4 is stable for `|lambda dt|` up to about 2.8 on the imaginary axis.
const STABILITY_LIMIT: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpChoice {
    Position,
    Momentum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindbladConfig {
    pub n_y: usize,
    /// Box is `[-y_extent, y_extent)`.
    pub y_extent: f64,
    pub gamma: f64,
    pub jump: JumpChoice,
    pub dt: f64,
    pub t_final: f64,
    /// Diagnostics every this many steps.
    pub sample_stride: usize,
    pub params: ModelParams,
    pub spec: PacketSpec,
}

impl LindbladConfig {
    pub fn dy(&self) -> f64 {
        2.0 * self.y_extent / self.n_y as f64
    }

    pub fn position(&self, j: usize) -> f64 {
        self.y_extent * ((2 * j) as f64 / self.n_y as f64 - 1.0)
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// `d<p^2>/dt` predicted by `[y, [y, p^2]] = -2` for position jumps.
    pub fn heating_rate(&self) -> f64 {
        match self.jump {
            JumpChoice::Position => self.gamma / (self.spec.sigma0 * self.spec.sigma0),
            JumpChoice::Momentum => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        self.params.validate()?;
        if self.n_y < 4 {
            return Err(invalid("n_y", "need at least 4 grid points"));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(invalid("gamma", "dephasing rate must be non-negative"));
        }
        if !(self.y_extent > 0.0 && self.dt > 0.0 && self.t_final > 0.0) {
            return Err(invalid("dt", "box, step and horizon must be positive"));
        }
        if self.sample_stride == 0 {
            return Err(invalid("sample_stride", "must be at least 1"));
        }
        if self.spec.y0.abs() >= self.y_extent {
            return Err(invalid("y0", "packet centre lies outside the box"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindbladSample {
    pub t: f64,
    pub trace: f64,
    pub purity: f64,
    pub energy: f64,
    pub p_squared: f64,
    pub entropy: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LindbladSeries {
    pub config: LindbladConfig,
    pub samples: Vec<LindbladSample>,
}

impl LindbladSeries {
    /// Least-squares slope of `<p^2>(t)` over the whole run.
    pub fn p_squared_rate(&self) -> f64 {
        let t: Vec<f64> = self.samples.iter().map(|s| s.t).collect();
        let p: Vec<f64> = self.samples.iter().map(|s| s.p_squared).collect();
        linear_fit(&t, &p).1
    }

    pub fn first(&self) -> &LindbladSample {
        &self.samples[0]
    }

    pub fn last(&self) -> &LindbladSample {
        self.samples.last().expect("series has samples")
    }

    pub fn max_trace_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.trace - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_relative_energy_drift(&self) -> f64 {
        let e0 = self.first().energy;
        self.samples
            .iter()
            .map(|s| (s.energy - e0).abs() / e0.abs())
            .fold(0.0, f64::max)
    }
}

/// Generator of the master equation in whichever basis the run uses.
enum Generator {
    /// Position basis: tridiagonal `H`, diagonal `L = y / sigma0`.
    Position {
        h_diag: f64,
        h_off: f64,
        jump: Vec<f64>,
        gamma: f64,
    },
    /// Laplacian eigenbasis: diagonal `H` and `L = sigma0 |p|`.
    Eigenbasis {
        energies: Vec<f64>,
        jump: Vec<f64>,
        gamma: f64,
    },
}

impl Generator {
    fn spectral_radius(&self) -> f64 {
        let spread = |v: &[f64]| {
            let (lo, hi) = v
                .iter()
                .fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
            hi - lo
        };
        match self {
            Generator::Position {
                h_diag,
                jump,
                gamma,
                ..
            } => 2.0 * h_diag + 0.5 * gamma * spread(jump).powi(2),
            Generator::Eigenbasis {
                energies,
                jump,
                gamma,
            } => spread(energies) + 0.5 * gamma * spread(jump).powi(2),
        }
    }

    fn rhs(&self, rho: &DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
        let n = rho.nrows();
        let minus_i = Complex64::new(0.0, -1.0);
        match self {
            Generator::Position {
                h_off, jump, gamma, ..
            } => {
                for j in 0..n {
                    for i in 0..n {
                        // (H rho - rho H)_ij with Dirichlet walls; diagonal parts cancel
                        let mut comm = Complex64::new(0.0, 0.0);
                        if i > 0 {
                            comm += rho[(i - 1, j)];
                        }
                        if i + 1 < n {
                            comm += rho[(i + 1, j)];
                        }
                        if j > 0 {
                            comm -= rho[(i, j - 1)];
                        }
                        if j + 1 < n {
                            comm -= rho[(i, j + 1)];
                        }
                        let d = jump[i] - jump[j];
                        out[(i, j)] = minus_i * comm * *h_off - rho[(i, j)] * (0.5 * gamma * d * d);
                    }
                }
            }
            Generator::Eigenbasis {
                energies,
                jump,
                gamma,
            } => {
                for j in 0..n {
                    for i in 0..n {
                        let d = jump[i] - jump[j];
                        let rate =
                            Complex64::new(-0.5 * gamma * d * d, -(energies[i] - energies[j]));
                        out[(i, j)] = rho[(i, j)] * rate;
                    }
                }
            }
        }
    }

    fn energy(&self, rho: &DMatrix<Complex64>) -> f64 {
        let n = rho.nrows();
        match self {
            Generator::Position { h_diag, h_off, .. } => {
                let mut e = 0.0;
                for i in 0..n {
                    e += h_diag * rho[(i, i)].re;
                    if i + 1 < n {
                        e += 2.0 * h_off * rho[(i + 1, i)].re;
                    }
                }
                e
            }
            Generator::Eigenbasis { energies, .. } => {
                (0..n).map(|i| energies[i] * rho[(i, i)].re).sum()
            }
        }
    }
}

/// Dirichlet sine modes `u_a(j) = sqrt(2/(n+1)) sin(pi (a+1)(j+1)/(n+1))`
/// and their Laplacian energies.
fn sine_modes(n: usize, dy: f64, mass: f64) -> (DMatrix<f64>, Vec<f64>) {
    let scale = (2.0 / (n as f64 + 1.0)).sqrt();
    let modes = DMatrix::from_fn(n, n, |j, a| {
        scale * (std::f64::consts::PI * (a + 1) as f64 * (j + 1) as f64 / (n as f64 + 1.0)).sin()
    });
    let energies = (0..n)
        .map(|a| {
            let q = std::f64::consts::PI * (a + 1) as f64 / (n as f64 + 1.0);
            (1.0 - q.cos()) / (mass * dy * dy)
        })
        .collect();
    (modes, energies)
}

fn initial_vector(cfg: &LindbladConfig) -> Vec<Complex64> {
    let mut phi: Vec<Complex64> = (0..cfg.n_y)
        .map(|j| relative_packet_position(cfg.position(j), &cfg.spec))
        .collect();
    let norm: f64 = phi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    phi.iter_mut().for_each(|z| *z /= norm);
    phi
}

fn outer(v: &[Complex64]) -> DMatrix<Complex64> {
    let n = v.len();
    DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
}

pub fn evolve_lindblad(cfg: &LindbladConfig) -> Result<LindbladSeries> {
    cfg.validate()?;
    let n = cfg.n_y;
    let dy = cfg.dy();
    let mass = cfg.params.mass;
    let sigma0 = cfg.spec.sigma0;
    let phi = initial_vector(cfg);

    let (generator, mut rho) = match cfg.jump {
        JumpChoice::Position => {
            let h_diag = 1.0 / (mass * dy * dy);
            let generator = Generator::Position {
                h_diag,
                h_off: -0.5 * h_diag,
                jump: (0..n).map(|j| cfg.position(j) / sigma0).collect(),
                gamma: cfg.gamma,
            };
            (generator, outer(&phi))
        }
        JumpChoice::Momentum => {
            let (modes, energies) = sine_modes(n, dy, mass);
            let coeffs: Vec<Complex64> = (0..n)
                .map(|a| (0..n).map(|j| phi[j] * modes[(j, a)]).sum())
                .collect();
            let jump = energies
                .iter()
                .map(|e| sigma0 * (2.0 * mass * e).sqrt())
                .collect();
            let generator = Generator::Eigenbasis {
                energies,
                jump,
                gamma: cfg.gamma,
            };
            (generator, outer(&coeffs))
        }
    };

    let radius = generator.spectral_radius() * cfg.dt;
    if radius > STABILITY_LIMIT {
        return Err(Error::Unstable(format!(
            "dt * spectral radius = {radius:.3} exceeds the RK4 limit {STABILITY_LIMIT}; reduce dt"
        )));
    }

    let sample = |rho: &DMatrix<Complex64>, t: f64| {
        let eig = hermitian_eigenvalues(rho);
        let energy = generator.energy(rho);
        LindbladSample {
            t,
            trace: rho.diagonal().iter().map(|z| z.re).sum(),
            purity: rho.iter().map(|z| z.norm_sqr()).sum(),
            energy,
            p_squared: 2.0 * mass * energy,
            entropy: entropy_of_spectrum(&eig),
            min_eigenvalue: eig.first().copied().unwrap_or(0.0),
        }
    };

    let steps = cfg.steps();
    let mut samples = vec![sample(&rho, 0.0)];
    let dt = Complex64::new(cfg.dt, 0.0);
    let mut k1 = DMatrix::zeros(n, n);
    let mut k2 = DMatrix::zeros(n, n);
    let mut k3 = DMatrix::zeros(n, n);
    let mut k4 = DMatrix::zeros(n, n);
    for step in 1..=steps {
        generator.rhs(&rho, &mut k1);
        generator.rhs(&(&rho + &k1 * (dt * 0.5)), &mut k2);
        generator.rhs(&(&rho + &k2 * (dt * 0.5)), &mut k3);
        generator.rhs(&(&rho + &k3 * dt), &mut k4);
        rho += (&k1 + &k2 * Complex64::new(2.0, 0.0) + &k3 * Complex64::new(2.0, 0.0) + &k4)
            * (dt / 6.0);

        if step % cfg.sample_stride == 0 || step == steps {
            let s = sample(&rho, step as f64 * cfg.dt);
            if !s.trace.is_finite() || (s.trace - 1.0).abs() > TRACE_TOLERANCE {
                return Err(Error::Unstable(format!(
                    "trace drifted to {} at t = {}",
                    s.trace, s.t
                )));
            }
            samples.push(s);
        }
    }
    Ok(LindbladSeries {
        config: *cfg,
        samples,
    })
}

/// What the exact model does to the particles across one collision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactModelSummary {
    /// Entropy of the reduced relative state after the collision (it starts pure).
    pub entropy_gain: f64,
    pub particle_energy_initial: f64,
    pub particle_energy_final: f64,
}

impl ExactModelSummary {
    pub fn relative_energy_change(&self) -> f64 {
        (self.particle_energy_final - self.particle_energy_initial) / self.particle_energy_initial
    }

    /// From an oracle run: entropy of the traced final state and the
    /// bath-averaged kinetic energy before and after.
    pub fn from_oracle(oracle: &crate::oracle_grid::OracleDensity) -> Self {
        let kinetic = |f: &dyn Fn(&crate::oracle_grid::SectorTrajectory) -> f64| {
            oracle
                .trajectories
                .iter()
                .map(|t| t.sector.weight * f(t))
                .sum::<f64>()
        };
        Self {
            entropy_gain: oracle.mixture.entropy(),
            particle_energy_initial: kinetic(&|t| t.initial().kinetic),
            particle_energy_final: kinetic(&|t| t.last().kinetic),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContrastReport {
    pub exact_entropy_gain: f64,
    pub exact_energy_change_relative: f64,
    pub lindblad_jump: JumpChoice,
    pub lindblad_gamma: f64,
    pub lindblad_entropy_gain: f64,
    pub lindblad_energy_change: f64,
    pub lindblad_energy_change_relative: f64,
    pub lindblad_p_squared_rate: f64,
    pub predicted_p_squared_rate: f64,
    pub energy_tolerance: f64,
    pub rate_tolerance: f64,
    /// `dS > 0` with `|dE/E| <= energy_tolerance`.
    pub exact_decoheres_without_energy_change: bool,
    /// `dS > 0` and `dE > 0`.
    pub lindblad_decoheres_with_heating: bool,
    /// Measured heating rate within `rate_tolerance` of the prediction.
    pub heating_rate_matches: bool,
}

pub const CONTRAST_ENERGY_TOLERANCE: f64 = 1e-4;
pub const CONTRAST_RATE_TOLERANCE: f64 = 0.02;

pub fn contrast_report(lindblad: &LindbladSeries, exact: &ExactModelSummary) -> ContrastReport {
    let (first, last) = (lindblad.first(), lindblad.last());
    let de = last.energy - first.energy;
    let ds = last.entropy - first.entropy;
    let rate = lindblad.p_squared_rate();
    let predicted = lindblad.config.heating_rate();
    let rate_ok = if predicted == 0.0 {
        rate.abs() <= CONTRAST_RATE_TOLERANCE * first.p_squared
    } else {
        ((rate - predicted) / predicted).abs() <= CONTRAST_RATE_TOLERANCE
    };
    let exact_de = exact.relative_energy_change();
    ContrastReport {
        exact_entropy_gain: exact.entropy_gain,
        exact_energy_change_relative: exact_de,
        lindblad_jump: lindblad.config.jump,
        lindblad_gamma: lindblad.config.gamma,
        lindblad_entropy_gain: ds,
        lindblad_energy_change: de,
        lindblad_energy_change_relative: de / first.energy,
        lindblad_p_squared_rate: rate,
        predicted_p_squared_rate: predicted,
        energy_tolerance: CONTRAST_ENERGY_TOLERANCE,
        rate_tolerance: CONTRAST_RATE_TOLERANCE,
        exact_decoheres_without_energy_change: exact.entropy_gain > 0.0
            && exact_de.abs() <= CONTRAST_ENERGY_TOLERANCE,
        lindblad_decoheres_with_heating: ds > 0.0 && de > 0.0,
        heating_rate_matches: rate_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(gamma: f64, jump: JumpChoice) -> LindbladConfig {
        LindbladConfig {
            n_y: 64,
            y_extent: 10.0,
            gamma,
            jump,
            dt: 0.01,
            t_final: 1.0,
            sample_stride: 10,
            params: ModelParams::new(1.0, 0.0, 1).unwrap(),
            spec: PacketSpec::new(0.25, 1.0, -1.0).unwrap(),
        }
    }

    #[test]
    fn sine_modes_diagonalize_laplacian() {
        let n = 16;
        let (u, e) = sine_modes(n, 0.3, 1.2);
        let h0 = 1.0 / (1.2 * 0.09);
        let h = DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => h0,
            1 => -0.5 * h0,
            _ => 0.0,
        });
        let d = u.transpose() * h * &u;
        for a in 0..n {
            for b in 0..n {
                let expected = if a == b { e[a] } else { 0.0 };
                assert!((d[(a, b)] - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn bases_agree_without_dephasing() {
        let a = evolve_lindblad(&cfg(0.0, JumpChoice::Position)).unwrap();
        let b = evolve_lindblad(&cfg(0.0, JumpChoice::Momentum)).unwrap();
        assert!((a.first().energy - b.first().energy).abs() < 1e-12);
        assert!((a.last().energy - b.last().energy).abs() < 1e-9);
        assert!((a.last().purity - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unstable_step_rejected() {
        let mut c = cfg(0.1, JumpChoice::Position);
        c.dt = 0.5;
        assert!(matches!(evolve_lindblad(&c), Err(Error::Unstable(_))));
        let mut c = cfg(-1.0, JumpChoice::Position);
        c.gamma = -1.0;
        assert!(evolve_lindblad(&c).is_err());
    }
}
