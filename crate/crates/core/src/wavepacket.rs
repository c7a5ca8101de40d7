// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian initial state and the signed momentum grid.
//!
//! Each particle starts as `exp(-x^2 / (4 sigma^2)) exp(+-i k0 x)`. In
//! centre-of-mass and relative coordinates `Y = (x1 + x2)/2`, `y = x1 - x2`
//! the product splits into `exp(-Y^2 / (2 sigma^2))` times
//! `exp(-y^2 / (8 sigma^2) + i k0 y)`. Only the relative factor scatters.
//!
//! Fourier convention: `f(k) = (2 pi)^{-1/2} int phi(y) e^{-iky} dy`, so the
//! relative packet is `f(k) ~ exp(-2 sigma^2 (k - k0)^2)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Packets with `sigma0 * k0` at least this large count as narrow.
pub const DEFAULT_NARROWNESS_THRESHOLD: f64 = 10.0;

/// Momentum half-widths `8 / sigma0` kept on either side of `k0`.
pub const COVERAGE_WIDTHS: f64 = 8.0;

pub const DEFAULT_GRID_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSpec {
    /// Central relative momentum.
    pub k0: f64,
    /// Single-particle width.
    pub sigma0: f64,
    /// Initial relative separation; negative for an incoming packet.
    pub y0: f64,
}

impl PacketSpec {
    pub fn new(k0: f64, sigma0: f64, y0: f64) -> Result<Self> {
        let spec = Self { k0, sigma0, y0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k0.is_finite() && self.k0 > 0.0) {
            return Err(invalid("k0", format!("must be positive, got {}", self.k0)));
        }
        if !(self.sigma0.is_finite() && self.sigma0 > 0.0) {
            return Err(invalid(
                "sigma0",
                format!("must be positive, got {}", self.sigma0),
            ));
        }
        if !self.y0.is_finite() {
            return Err(invalid("y0", "must be finite"));
        }
        Ok(())
    }

    /// `sigma0 * k0`.
    pub fn narrowness(&self) -> f64 {
        self.sigma0 * self.k0
    }

    pub fn is_narrow(&self, threshold: f64) -> bool {
        self.narrowness() >= threshold
    }

    /// Width parameter of the relative amplitude in `k`: `|f|` falls as
    /// `exp(-(k - k0)^2 / (2 w^2))` with `w = 1 / (2 sigma0)`.
    pub fn momentum_width(&self) -> f64 {
        0.5 / self.sigma0
    }

    /// Largest `|k|` a grid must reach to hold the packet.
    pub fn required_k_max(&self) -> f64 {
        self.k0 + COVERAGE_WIDTHS / self.sigma0
    }

    /// Standard deviation of `|phi(y)|^2` at `t = 0`.
    pub fn position_spread(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.sigma0
    }
}

/// Uniform signed grid `k_i = -k_max + i dk`, `i = 0..n`, `dk = 2 k_max / n`.
///
/// `n` is a power of two, so `k = 0` sits at `i = n/2` and every `k_i > 0`
/// has its mirror `-k_i` at index `n - i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumGrid {
    n: usize,
    k_max: f64,
}

impl MomentumGrid {
    pub fn new(n: usize, k_max: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(invalid(
                "n",
                format!("must be a power of two >= 2, got {n}"),
            ));
        }
        if !(k_max.is_finite() && k_max > 0.0) {
            return Err(invalid("k_max", format!("must be positive, got {k_max}")));
        }
        Ok(Self { n, k_max })
    }

    /// Grid reaching `k0 + 8 / sigma0` with `n` points.
    pub fn for_packet(spec: &PacketSpec, n: usize) -> Result<Self> {
        Self::new(n, spec.required_k_max())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    pub fn dk(&self) -> f64 {
        2.0 * self.k_max / self.n as f64
    }

    pub fn value(&self, i: usize) -> f64 {
        // k_max * (2i/n - 1) keeps the grid symmetric to the last bit.
        self.k_max * ((2 * i) as f64 / self.n as f64 - 1.0)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }

    /// Index of `-k_i`, if on the grid.
    pub fn mirror(&self, i: usize) -> Option<usize> {
        (i >= 1 && i < self.n).then(|| self.n - i)
    }

    /// Indices with `k_i > 0`.
    pub fn positive_indices(&self) -> std::ops::Range<usize> {
        self.n / 2 + 1..self.n
    }

    pub fn nearest_index(&self, k: f64) -> usize {
        let raw = ((k + self.k_max) / self.dk()).round();
        raw.clamp(0.0, (self.n - 1) as f64) as usize
    }
}

/// Normalized incoming relative amplitude
/// `(4 sigma^2 / pi)^{1/4} exp(-2 sigma^2 (k - k0)^2) exp(-i (k - k0) y0)`.
pub fn relative_amplitude_in(k: f64, spec: &PacketSpec) -> Complex64 {
    let s2 = spec.sigma0 * spec.sigma0;
    let q = k - spec.k0;
    let modulus = (4.0 * s2 / PI).powf(0.25) * (-2.0 * s2 * q * q).exp();
    Complex64::from_polar(modulus, -q * spec.y0)
}

/// The incoming amplitude after free evolution for time `t`.
pub fn free_evolved_amplitude(k: f64, t: f64, spec: &PacketSpec, mass: f64) -> Complex64 {
    relative_amplitude_in(k, spec) * Complex64::from_polar(1.0, -k * k * t / (2.0 * mass))
}

/// Relative packet in position space at `t = 0`, centred on `y0`.
pub fn relative_packet_position(y: f64, spec: &PacketSpec) -> Complex64 {
    free_relative_packet(y, 0.0, spec, 1.0)
}

/// Closed-form free evolution of the relative packet under `p^2 / (2m)`.
pub fn free_relative_packet(y: f64, t: f64, spec: &PacketSpec, mass: f64) -> Complex64 {
    let s2 = 2.0 * spec.sigma0 * spec.sigma0;
    let u = y - spec.y0;
    let spread = Complex64::new(1.0, t / (2.0 * mass * s2));
    let exponent = (Complex64::new(-u * u / (4.0 * s2), spec.k0 * u)
        - Complex64::new(0.0, spec.k0 * spec.k0 * t / (2.0 * mass)))
        / spread;
    let prefactor = (2.0 * PI * s2).powf(-0.25) / spread.sqrt();
    prefactor * exponent.exp() * Complex64::from_polar(1.0, spec.k0 * spec.y0)
}

/// Single-particle packet with the width convention `exp(-x^2 / (4 sigma^2))`.
fn single_particle(x: f64, sigma: f64, k: f64) -> Complex64 {
    let norm = 1.0 / (sigma * (2.0 * PI).sqrt()).sqrt();
    Complex64::from_polar(norm * (-x * x / (4.0 * sigma * sigma)).exp(), k * x)
}

/// Evaluates the two-particle packet both as `lambda1(x1) lambda2(x2)` and
/// as the centre-of-mass times relative factorization. They agree pointwise.
pub fn com_factorization_check(x1: f64, x2: f64, spec: &PacketSpec) -> (Complex64, Complex64) {
    let sigma = spec.sigma0;
    let product = single_particle(x1, sigma, spec.k0) * single_particle(x2, sigma, -spec.k0);

    let com = 0.5 * (x1 + x2);
    let rel = x1 - x2;
    let com_factor = (-com * com / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt());
    let rel_factor =
        Complex64::from_polar((-rel * rel / (8.0 * sigma * sigma)).exp(), spec.k0 * rel);
    (product, com_factor * rel_factor)
}
