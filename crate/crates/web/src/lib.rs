// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! Browser bindings. Every export takes plain numbers and returns a flat
//! `Float64Array` so the page can draw straight onto a canvas.

use decoscatter::linalg::binary_entropy;
use decoscatter::scattering::bath_averaged_probabilities;
use decoscatter::spin_bath::enumerate_sectors;
use decoscatter::{ModelParams, MomentumGrid, PacketSpec, SectorMixture, SpinSector};
use wasm_bindgen::prelude::*;

/// Largest suppression map the page may request, per side.
pub const MAX_MAP_POINTS: usize = 256;

fn js(e: decoscatter::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn bath(mass: f64, coupling: f64, spins: u32) -> Result<(ModelParams, Vec<SpinSector>), JsError> {
    let params = ModelParams::new(mass, coupling, spins).map_err(js)?;
    let sectors = enumerate_sectors(&params).map_err(js)?;
    Ok((params, sectors))
}

fn log_points(start: f64, stop: f64, count: usize) -> Result<Vec<f64>, JsError> {
    if !(start > 0.0 && stop > start && count >= 2) {
        return Err(JsError::new(
            "need 0 < start < stop and at least two points",
        ));
    }
    let ratio = (stop / start).ln() / (count - 1) as f64;
    Ok((0..count)
        .map(|i| start * (ratio * i as f64).exp())
        .collect())
}

/// Bath-averaged channel probabilities on a log grid in `k`, as
/// `[k, reflect, transmit]` triples.
#[wasm_bindgen]
pub fn channel_curves(
    mass: f64,
    coupling: f64,
    spins: u32,
    k_min: f64,
    k_max: f64,
    count: usize,
) -> Result<Vec<f64>, JsError> {
    let (params, sectors) = bath(mass, coupling, spins)?;
    let mut out = Vec::with_capacity(3 * count);
    for k in log_points(k_min, k_max, count)? {
        let p = bath_averaged_probabilities(k, &sectors, &params).map_err(js)?;
        out.extend([k, p.reflect, p.transmit]);
    }
    Ok(out)
}

/// Two-mode entanglement entropy against the mean momentum, as `[k0, entropy]` pairs.
#[wasm_bindgen]
pub fn entropy_scan(
    mass: f64,
    coupling: f64,
    spins: u32,
    k_min: f64,
    k_max: f64,
    count: usize,
) -> Result<Vec<f64>, JsError> {
    let (params, sectors) = bath(mass, coupling, spins)?;
    let mut out = Vec::with_capacity(2 * count);
    for k in log_points(k_min, k_max, count)? {
        let p = bath_averaged_probabilities(k, &sectors, &params).map_err(js)?;
        out.extend([k, binary_entropy(p.reflect)]);
    }
    Ok(out)
}

/// Coherence suppression `|rho_ij| / sqrt(rho_ii rho_jj)` on a `points x points`
/// momentum grid, row-major. NaN marks cells where the packet has no weight.
///
/// The last two entries are the grid's `k_max` and the full entanglement entropy.
#[wasm_bindgen]
pub fn suppression_map(
    mass: f64,
    coupling: f64,
    spins: u32,
    k0: f64,
    sigma0: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    if !points.is_power_of_two() || points > MAX_MAP_POINTS {
        return Err(JsError::new(&format!(
            "points must be a power of two up to {MAX_MAP_POINTS}"
        )));
    }
    let (params, sectors) = bath(mass, coupling, spins)?;
    let spec = PacketSpec::new(k0, sigma0, -10.0 * sigma0).map_err(js)?;
    let grid = MomentumGrid::for_packet(&spec, points).map_err(js)?;
    let mixture = SectorMixture::analytic(&sectors, &spec, &grid, &params).map_err(js)?;
    let mut out = Vec::with_capacity(points * points + 2);
    for i in 0..points {
        for j in 0..points {
            out.push(mixture.suppression(i, j).unwrap_or(f64::NAN));
        }
    }
    out.extend([grid.k_max(), mixture.entropy()]);
    Ok(out)
}
