// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid momentum k = {0}: scattering momenta must be positive")]
    InvalidMomentum(f64),

    #[error("reflected phase is undefined in the m_s = 0 sector (A = 0)")]
    UndefinedPhase,

    #[error("momentum grid reaches |k| = {available}, but the packet needs |k| up to {required}")]
    Coverage { required: f64, available: f64 },

    #[error(
        "narrow-packet regime requires sigma0*k0 >= {threshold}, got {product}; use the full-density assembly instead"
    )]
    NotNarrow { product: f64, threshold: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("boundary leak: edge probability {probability:e} exceeds {threshold:e} at t = {time}")]
    BoundaryLeak {
        probability: f64,
        threshold: f64,
        time: f64,
    },

    #[error("non-convergence: norm drift {drift:e} exceeds {threshold:e}")]
    NonConvergence { drift: f64, threshold: f64 },

    #[error("scattering not complete: probability {remaining:e} still within |y| < {radius} of the origin")]
    Stale { remaining: f64, radius: f64 },

    #[error("integration unstable: {0}")]
    Unstable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
