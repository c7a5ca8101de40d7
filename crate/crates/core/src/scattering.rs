// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form delta-potential scattering in each net-spin sector.
//!
//! A left-incident plane wave `e^{iky}` in sector `m_s` leaves as
//! `A e^{-iky}` for `y < 0` and `B e^{iky}` for `y > 0` with
//!
//! ```text
//! B = 2ik / (2ik + g),   A = -g / (2ik + g),   g = 2 m mu m_s.
//! ```
//!
//! These satisfy `1 + A = B` and `|A|^2 + |B|^2 = 1` identically. The textbook
//! jump condition for `+mu m_s delta(y)` gives the same pair with `g -> -g`;
//! every bath average is invariant under that flip because the sector weights
//! are mirror symmetric.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin_bath::{mirror_pair_fold, ModelParams, SpinSector};

/// Reflection and transmission for one sector at one momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelAmplitudes {
    pub k: f64,
    pub twice_net_spin: i64,
    pub reflection: Complex64,
    pub transmission: Complex64,
    /// `g = 2 m mu m_s`, in inverse length.
    pub strength: f64,
}

impl ChannelAmplitudes {
    pub fn reflection_probability(&self) -> f64 {
        self.reflection.norm_sqr()
    }

    pub fn transmission_probability(&self) -> f64 {
        self.transmission.norm_sqr()
    }
}

/// `g = 2 m mu m_s`.
pub fn effective_strength(sector: &SpinSector, params: &ModelParams) -> f64 {
    params.mass * params.coupling * sector.twice_net_spin as f64
}

pub fn amplitudes(k: f64, sector: &SpinSector, params: &ModelParams) -> Result<ChannelAmplitudes> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidMomentum(k));
    }
    let g = effective_strength(sector, params);
    let denom = Complex64::new(g, 2.0 * k);
    Ok(ChannelAmplitudes {
        k,
        twice_net_spin: sector.twice_net_spin,
        reflection: Complex64::new(-g, 0.0) / denom,
        transmission: Complex64::new(0.0, 2.0 * k) / denom,
        strength: g,
    })
}

/// Phase of the reflected wave relative to a hard wall (`A = -1`), i.e.
/// `arg(-A) = -atan(2k / g)`. Its magnitude stays below `pi/2`.
pub fn reflected_phase_vs_hard_wall(amp: &ChannelAmplitudes) -> Result<f64> {
    if amp.twice_net_spin == 0 || amp.strength == 0.0 {
        return Err(Error::UndefinedPhase);
    }
    Ok((-amp.reflection).arg())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelProbabilities {
    pub reflect: f64,
    pub transmit: f64,
}

/// `(sum w |A|^2, sum w |B|^2)` over the bath.
pub fn bath_averaged_probabilities(
    k: f64,
    sectors: &[SpinSector],
    params: &ModelParams,
) -> Result<ChannelProbabilities> {
    let amps = sector_amplitudes(k, sectors, params)?;
    let reflect = mirror_pair_fold(
        amps.len(),
        0.0,
        |i| sectors[i].weight * amps[i].reflection_probability(),
        |acc, x| acc + x,
    );
    let transmit = mirror_pair_fold(
        amps.len(),
        0.0,
        |i| sectors[i].weight * amps[i].transmission_probability(),
        |acc, x| acc + x,
    );
    Ok(ChannelProbabilities { reflect, transmit })
}

pub(crate) fn sector_amplitudes(
    k: f64,
    sectors: &[SpinSector],
    params: &ModelParams,
) -> Result<Vec<ChannelAmplitudes>> {
    sectors.iter().map(|s| amplitudes(k, s, params)).collect()
}

/// Outgoing channel pair: the first letter picks the amplitude at `k`, the
/// second the (conjugated) amplitude at `k2`. T is transmission, R reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelPair {
    TT,
    RR,
    TR,
    RT,
}

impl ChannelPair {
    fn pick(self, amp: &ChannelAmplitudes, first: bool) -> Complex64 {
        let transmitted = match (self, first) {
            (ChannelPair::TT, _) => true,
            (ChannelPair::RR, _) => false,
            (ChannelPair::TR, f) => f,
            (ChannelPair::RT, f) => !f,
        };
        if transmitted {
            amp.transmission
        } else {
            amp.reflection
        }
    }
}

/// `sum w X(k) conj(Y(k2))` with `X, Y` chosen by `pair`.
///
/// The mixed pairs vanish at `k2 == k`: `B conj(A)` is odd in `m_s`.
pub fn coherence_factor(
    k: f64,
    k2: f64,
    sectors: &[SpinSector],
    params: &ModelParams,
    pair: ChannelPair,
) -> Result<Complex64> {
    let first = sector_amplitudes(k, sectors, params)?;
    let second = sector_amplitudes(k2, sectors, params)?;
    Ok(mirror_pair_fold(
        sectors.len(),
        Complex64::new(0.0, 0.0),
        |i| sectors[i].weight * pair.pick(&first[i], true) * pair.pick(&second[i], false).conj(),
        |acc, x| acc + x,
    ))
}
