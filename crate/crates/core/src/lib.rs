// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! Energy-constrained ergotropy for finite-dimensional quantum systems.
//!
//! Given a Hamiltonian spectrum and a mean energy `E`, the crate computes the
//! smallest ergotropy (and anti-ergotropy) over every state at that energy,
//! the worst-case performance of fixed extraction protocols, the qutrit
//! protocol family that attains the bound, and brute-force oracles that check
//! all of it independently.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64` for the common case.

pub mod curve;
pub mod ergotropy;
pub mod error;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod protocols;
pub mod scalar;
pub mod spectrum;
pub mod state;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Direction of energy transfer: extraction lowers the state's energy,
/// injection raises it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Extract,
    Inject,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "extract" => Ok(Mode::Extract),
            "inject" => Ok(Mode::Inject),
            other => Err(Error::InvalidArgument(format!("unknown mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Extract => "extract",
            Mode::Inject => "inject",
        })
    }
}

pub type Spectrum = spectrum::Spectrum<f64>;
pub type DensityMatrix = state::DensityMatrix<f64>;
pub type DiagonalState = state::DiagonalState<f64>;
pub type EnergyCurve = curve::EnergyCurve<f64>;
pub type MinimumStateWitness = curve::MinimumStateWitness<f64>;
pub type UnitaryChannel = protocols::UnitaryChannel<f64>;
pub type RandomUnitaryChannel = protocols::RandomUnitaryChannel<f64>;
pub type WorstCaseResult = protocols::WorstCaseResult<f64>;
pub type ErgotropyReport = ergotropy::ErgotropyReport<f64>;

pub type Spectrum32 = spectrum::Spectrum<f32>;
pub type DensityMatrix32 = state::DensityMatrix<f32>;
pub type DiagonalState32 = state::DiagonalState<f32>;
pub type EnergyCurve32 = curve::EnergyCurve<f32>;
