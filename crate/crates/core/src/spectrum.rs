// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! Hamiltonian spectra expressed in their own (ordered) eigenbasis.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{diagonal_matrix, CMatrix};
use crate::scalar::Scalar;

/// Energy levels of a finite-dimensional Hamiltonian, sorted non-decreasing.
///
/// Degenerate levels are kept as given. Construction sorts its input, so two
/// reorderings of the same multiset produce identical spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T: Scalar> {
    levels: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumStats<T> {
    pub eps_min: T,
    pub eps_mean: T,
    pub eps_max: T,
}

impl<T: Scalar> Spectrum<T> {
    pub fn new(mut levels: Vec<T>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        if let Some(index) = levels.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteLevel { index });
        }
        levels.sort_by(|a, b| a.partial_cmp(b).expect("finite levels"));
        Ok(Self { levels })
    }

    /// Three-level system with levels `(0, (1 + delta) eps, 2 eps)`.
    pub fn qutrit(eps: T, delta: T) -> Result<Self> {
        if !(eps.is_finite() && eps > T::zero()) {
            return Err(Error::InvalidQutrit(format!("eps must be positive, got {}", eps)));
        }
        if !(delta.is_finite() && delta.abs() <= T::one()) {
            return Err(Error::InvalidQutrit(format!(
                "delta must lie in [-1, 1], got {}",
                delta
            )));
        }
        Self::new(vec![T::zero(), (T::one() + delta) * eps, T::lit(2.0) * eps])
    }

    pub fn levels(&self) -> &[T] {
        &self.levels
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn min(&self) -> T {
        self.levels[0]
    }

    pub fn max(&self) -> T {
        self.levels[self.levels.len() - 1]
    }

    pub fn mean(&self) -> T {
        let sum = self.levels.iter().fold(T::zero(), |acc, &x| acc + x);
        sum / T::count(self.dim())
    }

    pub fn span(&self) -> T {
        self.max() - self.min()
    }

    pub fn stats(&self) -> SpectrumStats<T> {
        SpectrumStats {
            eps_min: self.min(),
            eps_mean: self.mean(),
            eps_max: self.max(),
        }
    }

    /// `1e-9 * (eps_max - eps_min + 1)`.
    pub fn default_antisymmetry_tol(&self) -> T {
        T::lit(1e-9) * (self.span() + T::one())
    }

    /// Returns the pair-sum constant `c` when every `levels[k] + levels[d-1-k]`
    /// lies within `tol` of it.
    pub fn is_antisymmetric(&self, tol: T) -> Option<T> {
        let c = self.min() + self.max();
        let d = self.dim();
        let paired = (0..d / 2 + d % 2).all(|k| (self.levels[k] + self.levels[d - 1 - k] - c).abs() <= tol);
        paired.then_some(c)
    }

    /// Smallest positive gap between distinct levels, if any.
    pub fn min_gap(&self) -> Option<T> {
        self.levels
            .windows(2)
            .map(|w| w[1] - w[0])
            .filter(|g| *g > T::zero())
            .fold(None, |acc: Option<T>, g| Some(acc.map_or(g, |a| a.min(g))))
    }

    /// Checks `min <= energy <= max`.
    pub fn check_energy(&self, energy: T) -> Result<()> {
        if energy.is_finite() && energy >= self.min() && energy <= self.max() {
            Ok(())
        } else {
            Err(self.out_of_range(energy))
        }
    }

    pub(crate) fn out_of_range(&self, energy: T) -> Error {
        Error::EnergyOutOfRange {
            energy: energy.as_f64(),
            min: self.min().as_f64(),
            max: self.max().as_f64(),
        }
    }

    pub fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            })
        }
    }

    /// The Hamiltonian as a diagonal complex matrix.
    pub fn hamiltonian(&self) -> CMatrix<T> {
        diagonal_matrix(&self.levels)
    }

    /// Spectrum of `-H`, i.e. levels reflected and re-sorted.
    pub fn negated(&self) -> Self {
        Self {
            levels: self.levels.iter().rev().map(|&x| -x).collect(),
        }
    }
}
