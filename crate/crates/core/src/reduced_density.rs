// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! Reduced density matrix of the relative motion after the collision.
//!
//! Sector `m_s` leaves the collision as `B(k) f(k)` at `+k` and `A(k) f(k)`
//! at `-k`, where `f` is the incoming amplitude (interaction picture, so the
//! free phases `exp(-i k^2 t / 2m)` are dropped; they cancel in every modulus
//! reported here). Tracing out the bath gives
//!
//! ```text
//! rho(k, k') = sum_m w_m psi_m(k) conj(psi_m(k')).
//! ```
//!
//! Grid convention: `rho` holds continuum values sampled on the grid, so the
//! trace is `sum_i rho_ii dk` and the spectrum is that of `rho * dk`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    binary_entropy, entropy_of_spectrum, hermitian_eigenvalues, hermiticity_defect, max_abs,
    weighted_gram,
};
use crate::scattering::{amplitudes, bath_averaged_probabilities, coherence_factor, ChannelPair};
use crate::spin_bath::{mirror_pair_fold, ModelParams, SpinSector};
use crate::wavepacket::{relative_amplitude_in, MomentumGrid, PacketSpec};

pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
/// Diagonal entries below this leave the suppression ratio undefined.
pub const SUPPRESSION_DIAGONAL_FLOOR: f64 = 1e-14;

fn check_coverage(spec: &PacketSpec, grid: &MomentumGrid) -> Result<()> {
    let required = spec.required_k_max();
    if grid.k_max() < required * (1.0 - 1e-12) {
        return Err(Error::Coverage {
            required,
            available: grid.k_max(),
        });
    }
    Ok(())
}

/// Incoming amplitude on the positive bins, zero elsewhere, renormalized so
/// that `sum |f|^2 dk = 1` exactly on the grid.
pub fn incoming_on_grid(spec: &PacketSpec, grid: &MomentumGrid) -> Result<Vec<Complex64>> {
    spec.validate()?;
    check_coverage(spec, grid)?;
    let mut f = vec![Complex64::new(0.0, 0.0); grid.len()];
    for i in grid.positive_indices() {
        f[i] = relative_amplitude_in(grid.value(i), spec);
    }
    let norm: f64 = f.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dk();
    let scale = norm.sqrt().recip();
    f.iter_mut().for_each(|z| *z *= scale);
    Ok(f)
}

/// Post-collision relative state of one sector on the signed grid.
pub fn outgoing_sector_state(
    sector: &SpinSector,
    spec: &PacketSpec,
    grid: &MomentumGrid,
    params: &ModelParams,
) -> Result<Vec<Complex64>> {
    let f = incoming_on_grid(spec, grid)?;
    scatter_incoming(&f, sector, grid, params)
}

fn scatter_incoming(
    f: &[Complex64],
    sector: &SpinSector,
    grid: &MomentumGrid,
    params: &ModelParams,
) -> Result<Vec<Complex64>> {
    let mut psi = vec![Complex64::new(0.0, 0.0); grid.len()];
    for i in grid.positive_indices() {
        let amp = amplitudes(grid.value(i), sector, params)?;
        psi[i] = amp.transmission * f[i];
        if let Some(j) = grid.mirror(i) {
            psi[j] = amp.reflection * f[i];
        }
    }
    Ok(psi)
}

/// Bath-traced state kept in factored form: pure sector states and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorMixture {
    pub grid: MomentumGrid,
    pub weights: Vec<f64>,
    pub twice_net_spins: Vec<i64>,
    pub states: Vec<Vec<Complex64>>,
}

impl SectorMixture {
    pub fn analytic(
        sectors: &[SpinSector],
        spec: &PacketSpec,
        grid: &MomentumGrid,
        params: &ModelParams,
    ) -> Result<Self> {
        params.validate()?;
        let f = incoming_on_grid(spec, grid)?;
        let states = sectors
            .iter()
            .map(|s| scatter_incoming(&f, s, grid, params))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid: *grid,
            weights: sectors.iter().map(|s| s.weight).collect(),
            twice_net_spins: sectors.iter().map(|s| s.twice_net_spin).collect(),
            states,
        })
    }

    /// Nonzero spectrum of `rho * dk`, from the `(N+1)`-dimensional Gram matrix.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&weighted_gram(&self.weights, &self.states, self.grid.dk()))
    }

    pub fn entropy(&self) -> f64 {
        entropy_of_spectrum(&self.eigenvalues())
    }

    pub fn purity(&self) -> f64 {
        self.eigenvalues().iter().map(|l| l * l).sum()
    }

    /// `rho(k_i, k_j)` without forming the full matrix.
    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        mirror_pair_fold(
            self.states.len(),
            Complex64::new(0.0, 0.0),
            |m| self.states[m][i] * self.states[m][j].conj() * self.weights[m],
            |acc, x| acc + x,
        )
    }

    /// `|rho(k_i, k_j)| / sqrt(rho(k_i, k_i) rho(k_j, k_j))`, undefined where
    /// either diagonal is below [`SUPPRESSION_DIAGONAL_FLOOR`].
    pub fn suppression(&self, i: usize, j: usize) -> Option<f64> {
        let (di, dj) = (self.element(i, i).re, self.element(j, j).re);
        (di >= SUPPRESSION_DIAGONAL_FLOOR && dj >= SUPPRESSION_DIAGONAL_FLOOR)
            .then(|| self.element(i, j).norm() / (di * dj).sqrt())
    }

    /// `sum_i rho_ii k_i^2 / (2m) dk`.
    pub fn mean_kinetic_energy(&self, mass: f64) -> f64 {
        (0..self.grid.len())
            .map(|i| self.element(i, i).re * self.grid.value(i).powi(2))
            .sum::<f64>()
            * self.grid.dk()
            / (2.0 * mass)
    }

    pub fn to_density(&self) -> DensityMatrix {
        let n = self.grid.len();
        let element = |i: usize, j: usize| self.element(i, j);
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        let fill_column = |(j, column): (usize, &mut [Complex64])| {
            for (i, slot) in column.iter_mut().enumerate() {
                *slot = element(i, j);
            }
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            data.par_chunks_mut(n).enumerate().for_each(fill_column);
        }
        #[cfg(not(feature = "parallel"))]
        data.chunks_mut(n).enumerate().for_each(fill_column);
        DensityMatrix {
            grid: self.grid,
            elements: DMatrix::from_vec(n, n, data),
        }
    }
}

/// `rho(k_i, k_j)` on a signed momentum grid, trace `sum rho_ii dk = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub grid: MomentumGrid,
    pub elements: DMatrix<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityDiagnostics {
    pub trace: f64,
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    pub purity: f64,
    pub entropy: f64,
}

impl DensityMatrix {
    pub fn from_elements(grid: MomentumGrid, elements: DMatrix<Complex64>) -> Result<Self> {
        if elements.nrows() != grid.len() || elements.ncols() != grid.len() {
            return Err(Error::InvalidState(format!(
                "expected a {n} x {n} matrix, got {} x {}",
                elements.nrows(),
                elements.ncols(),
                n = grid.len()
            )));
        }
        Ok(Self { grid, elements })
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.elements[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.elements.diagonal().iter().map(|z| z.re).sum::<f64>() * self.grid.dk()
    }

    /// `Tr(rho^2)` with the `dk^2` scaling of the grid convention.
    pub fn purity(&self) -> f64 {
        let dk = self.grid.dk();
        self.elements.iter().map(|z| z.norm_sqr()).sum::<f64>() * dk * dk
    }

    /// Spectrum of `rho * dk`, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&(self.elements.clone() * Complex64::new(self.grid.dk(), 0.0)))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.elements)
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.elements)
    }

    /// `sum rho(k,k) k^2 dk / (2m)`.
    pub fn mean_kinetic_energy(&self, mass: f64) -> f64 {
        let dk = self.grid.dk();
        (0..self.grid.len())
            .map(|i| {
                let k = self.grid.value(i);
                self.elements[(i, i)].re * k * k
            })
            .sum::<f64>()
            * dk
            / (2.0 * mass)
    }

    pub fn diagnostics(&self) -> Result<DensityDiagnostics> {
        let eigenvalues = self.eigenvalues();
        Ok(DensityDiagnostics {
            trace: self.trace(),
            hermiticity_defect: self.hermiticity_defect(),
            min_eigenvalue: eigenvalues.first().copied().unwrap_or(0.0),
            purity: self.purity(),
            entropy: von_neumann_entropy(self)?,
        })
    }

    /// `|rho(k,k')| / sqrt(rho(k,k) rho(k',k'))`; `None` where a diagonal
    /// entry falls below [`SUPPRESSION_DIAGONAL_FLOOR`].
    pub fn suppression_map(&self) -> SuppressionMap {
        let n = self.grid.len();
        let diag: Vec<f64> = (0..n).map(|i| self.elements[(i, i)].re).collect();
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let defined =
                    diag[i] >= SUPPRESSION_DIAGONAL_FLOOR && diag[j] >= SUPPRESSION_DIAGONAL_FLOOR;
                values.push(
                    defined.then(|| self.elements[(i, j)].norm() / (diag[i] * diag[j]).sqrt()),
                );
            }
        }
        SuppressionMap {
            grid: self.grid,
            values,
        }
    }
}

/// Bath-averaged density on the full grid.
pub fn assemble(
    sectors: &[SpinSector],
    spec: &PacketSpec,
    grid: &MomentumGrid,
    params: &ModelParams,
) -> Result<DensityMatrix> {
    Ok(SectorMixture::analytic(sectors, spec, grid, params)?.to_density())
}

/// Two-mode limit: the packet is treated as sharp at `k0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NarrowPacketDensity {
    pub p_transmit: f64,
    pub p_reflect: f64,
    /// `rho(+k0, -k0)`, zero up to rounding for the mirror-symmetric bath.
    pub offdiag: Complex64,
}

impl NarrowPacketDensity {
    pub fn entropy(&self) -> f64 {
        binary_entropy(self.p_reflect)
    }
}

pub fn narrow_packet_density(
    spec: &PacketSpec,
    sectors: &[SpinSector],
    params: &ModelParams,
    threshold: f64,
) -> Result<NarrowPacketDensity> {
    spec.validate()?;
    if !spec.is_narrow(threshold) {
        return Err(Error::NotNarrow {
            product: spec.narrowness(),
            threshold,
        });
    }
    let p = bath_averaged_probabilities(spec.k0, sectors, params)?;
    let offdiag = coherence_factor(spec.k0, spec.k0, sectors, params, ChannelPair::TR)?;
    Ok(NarrowPacketDensity {
        p_transmit: p.transmit,
        p_reflect: p.reflect,
        offdiag,
    })
}

/// `-Tr(rho ln rho)` over the `dk`-scaled spectrum, by dense eigensolve.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let defect = rho.hermiticity_defect();
    let scale = rho.max_abs().max(1.0);
    if defect > HERMITICITY_TOLERANCE * scale {
        return Err(Error::InvalidState(format!(
            "density matrix is not Hermitian: defect {defect:e}"
        )));
    }
    Ok(entropy_of_spectrum(&rho.eigenvalues()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuppressionMap {
    pub grid: MomentumGrid,
    values: Vec<Option<f64>>,
}

impl SuppressionMap {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i * self.grid.len() + j]
    }

    pub fn defined(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().flatten().copied()
    }
}

pub fn coherence_suppression_map(
    spec: &PacketSpec,
    sectors: &[SpinSector],
    grid: &MomentumGrid,
    params: &ModelParams,
) -> Result<SuppressionMap> {
    Ok(assemble(sectors, spec, grid, params)?.suppression_map())
}
