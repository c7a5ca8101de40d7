// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-particle scattering through a spin-bath mediated contact interaction.
//!
//! The particles interact only through `mu * delta(y) * sum_i S3_i`, where `y`
//! is the relative coordinate. The bath enters every observable through the
//! net spin `m_s = sum_i s3_i`, so the 2^N bath configurations collapse to
//! `N + 1` sectors with binomial weights. Each sector scatters elastically off
//! a delta potential of strength `mu * m_s`; tracing over the bath leaves the
//! relative motion in a mixed state with the particle energy unchanged.
//!
//! Modules, bottom-up:
//!
//! * [`spin_bath`]: sector enumeration and bath moments.
//! * [`scattering`]: closed-form reflection/transmission amplitudes.
//! * [`wavepacket`]: Gaussian initial state and the momentum grid.
//! * [`reduced_density`]: bath-traced density matrix and its diagnostics.
//! * [`oracle_grid`]: brute-force Crank-Nicolson evolution used as an
//!   independent check of the closed forms.
//! * [`lindblad_contrast`]: Markovian dephasing for comparison.
//!
//! Units: hbar = 1 throughout.

pub mod error;
pub mod linalg;
pub mod lindblad_contrast;
pub mod oracle_grid;
pub mod reduced_density;
pub mod scattering;
pub mod spin_bath;
pub mod wavepacket;

pub use error::{Error, Result};
pub use reduced_density::{DensityMatrix, NarrowPacketDensity, SectorMixture};
pub use scattering::{ChannelAmplitudes, ChannelPair, ChannelProbabilities};
pub use spin_bath::{ModelParams, SpinSector};
pub use wavepacket::{MomentumGrid, PacketSpec};
