// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spectrum must contain at least one level")]
    EmptySpectrum,
    #[error("energy level {index} is not finite")]
    NonFiniteLevel { index: usize },
    #[error("invalid qutrit parameters: {0}")]
    InvalidQutrit(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("state is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("state trace deviates from one by {0:e}")]
    TraceNotOne(f64),
    #[error("state is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("probability {value:e} at level {index} is negative")]
    NegativeProbability { index: usize, value: f64 },
    #[error("energy {energy} outside the admissible range [{min}, {max}]")]
    EnergyOutOfRange { energy: f64, min: f64, max: f64 },
    #[error("index {index} outside 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("Hermitian eigensolver did not converge")]
    Eigensolver,
    #[error("numerical consistency check failed: {0}")]
    Numerical(String),
    #[error("spectrum is not antisymmetric within tolerance")]
    NotAntisymmetric,
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("invalid channel weights: {0}")]
    InvalidWeights(String),
    #[error("dual bracket still open after {0} doublings")]
    UnboundedDual(usize),
    #[error("could not reconstruct a witness state: {0}")]
    DegenerateDual(String),
    #[error("dimension {dim} exceeds the oracle limit of {limit}")]
    OracleTooLarge { dim: usize, limit: usize },
    #[error("no grid point lies on the energy slice E = {energy}; refine the grid")]
    EmptySlice { energy: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySpectrum => "empty_spectrum",
            Error::NonFiniteLevel { .. } => "non_finite_level",
            Error::InvalidQutrit(_) => "invalid_qutrit",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotSquare { .. } => "not_square",
            Error::NotHermitian(_) => "not_hermitian",
            Error::TraceNotOne(_) => "trace_not_one",
            Error::NotPositive(_) => "not_positive",
            Error::NegativeProbability { .. } => "negative_probability",
            Error::EnergyOutOfRange { .. } => "energy_out_of_range",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::Eigensolver => "eigensolver",
            Error::Numerical(_) => "numerical",
            Error::NotAntisymmetric => "not_antisymmetric",
            Error::NotUnitary(_) => "not_unitary",
            Error::InvalidWeights(_) => "invalid_weights",
            Error::UnboundedDual(_) => "unbounded_dual",
            Error::DegenerateDual(_) => "degenerate_dual",
            Error::OracleTooLarge { .. } => "oracle_too_large",
            Error::EmptySlice { .. } => "empty_slice",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
