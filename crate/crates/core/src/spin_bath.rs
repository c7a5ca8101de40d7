// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! Net-spin sectors of the hidden bath.
//!
//! Every spin starts in the `+1/2` eigenstate of `S1`. Expanded in the `S3`
//! basis each of the 2^N configurations carries probability `2^-N`, and the
//! coupling only sees `m_s = sum_i s3_i`. Configurations with `j` up-spins
//! share `m_s = j - N/2`, so the bath reduces to `N + 1` sectors with weights
//! `C(N, j) / 2^N`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Above this spin count the binomial weights are built in log space.
const LINEAR_RECURRENCE_MAX_SPINS: u32 = 1000;

/// Mass `m`, coupling `mu` and spin count `N` (hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub mass: f64,
    pub coupling: f64,
    pub spins: u32,
}

impl ModelParams {
    pub fn new(mass: f64, coupling: f64, spins: u32) -> Result<Self> {
        let params = Self {
            mass,
            coupling,
            spins,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(invalid(
                "mass",
                format!("must be positive, got {}", self.mass),
            ));
        }
        if !self.coupling.is_finite() {
            return Err(invalid("coupling", "must be finite"));
        }
        if self.spins == 0 {
            return Err(invalid("spins", "the bath needs at least one spin"));
        }
        Ok(())
    }

    /// Same model with `mu -> -mu`.
    pub fn with_flipped_coupling(&self) -> Self {
        Self {
            coupling: -self.coupling,
            ..*self
        }
    }
}

/// One eigenvalue class of the net bath spin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinSector {
    /// Number of up-spins `j`.
    pub up: u32,
    /// `2 * m_s = 2j - N`, kept as an integer so half-integers are exact.
    pub twice_net_spin: i64,
    /// `C(N, j) / 2^N`. Flushes to zero in the far tails for N beyond ~1070.
    pub weight: f64,
    /// Natural log of `weight`; finite for every sector at any N.
    pub ln_weight: f64,
    /// Natural log of `C(N, j)`.
    pub ln_multiplicity: f64,
}

impl SpinSector {
    pub fn net_spin(&self) -> f64 {
        self.twice_net_spin as f64 / 2.0
    }

    /// `C(N, j)` as an exact integer when it fits in a `u128`.
    pub fn multiplicity_exact(&self, spins: u32) -> Option<u128> {
        binomial_exact(spins, self.up)
    }
}

fn binomial_exact(n: u32, k: u32) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// The `N + 1` sectors ordered by `m_s` ascending.
pub fn enumerate_sectors(params: &ModelParams) -> Result<Vec<SpinSector>> {
    if params.spins == 0 {
        return Err(invalid("spins", "the bath needs at least one spin"));
    }
    let n = params.spins;
    let half = (n / 2) as usize;
    let len = n as usize + 1;

    // ln C(N, j) for j <= N/2 by the multiplicative recurrence, mirrored so that
    // w(j) == w(N - j) bit for bit.
    let mut ln_mult = vec![0.0_f64; len];
    for j in 0..half {
        ln_mult[j + 1] = ln_mult[j] + f64::from(n - j as u32).ln() - f64::from(j as u32 + 1).ln();
    }
    for j in 0..=half {
        ln_mult[len - 1 - j] = ln_mult[j];
    }

    let weights: Vec<f64> = if n <= LINEAR_RECURRENCE_MAX_SPINS {
        let mut raw = vec![1.0_f64; len];
        for j in 0..half {
            raw[j + 1] = raw[j] * f64::from(n - j as u32) / f64::from(j as u32 + 1);
        }
        for j in 0..=half {
            raw[len - 1 - j] = raw[j];
        }
        let total = mirror_sum(&raw);
        raw.iter().map(|w| w / total).collect()
    } else {
        Vec::new()
    };

    let ln_total = log_sum_exp(&ln_mult);
    let sectors = (0..len)
        .map(|j| {
            let ln_weight = ln_mult[j] - ln_total;
            let weight = if weights.is_empty() {
                ln_weight.exp()
            } else {
                weights[j]
            };
            SpinSector {
                up: j as u32,
                twice_net_spin: 2 * j as i64 - i64::from(n),
                weight,
                ln_weight,
                ln_multiplicity: ln_mult[j],
            }
        })
        .collect();
    Ok(sectors)
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Sum of a mirror-symmetric sequence, adding `(x[i] + x[len-1-i])` pairs.
fn mirror_sum(values: &[f64]) -> f64 {
    mirror_pair_fold(values.len(), 0.0, |i| values[i], |acc, x| acc + x)
}

/// Folds `term(i) + term(len-1-i)` pairs from the outside in, visiting the
/// self-mirrored middle element alone. Because IEEE addition commutes, any
/// quantity whose terms swap under `i -> len-1-i` sums to the same bits.
pub(crate) fn mirror_pair_fold<T, A>(
    len: usize,
    init: A,
    term: impl Fn(usize) -> T,
    mut add: impl FnMut(A, T) -> A,
) -> A
where
    T: std::ops::Add<Output = T>,
{
    let mut acc = init;
    let (mut lo, mut hi) = (0usize, len);
    while lo + 1 < hi {
        hi -= 1;
        acc = add(acc, term(lo) + term(hi));
        lo += 1;
    }
    if lo + 1 == hi {
        acc = add(acc, term(lo));
    }
    acc
}

/// `sum_j weight_j * m_s^p`. Odd moments vanish exactly.
pub fn sector_moment(sectors: &[SpinSector], p: u32) -> f64 {
    mirror_pair_fold(
        sectors.len(),
        0.0,
        |i| {
            let s = &sectors[i];
            s.weight * s.net_spin().powi(p as i32)
        },
        |acc, x| acc + x,
    )
}
