// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! Density matrices and diagonal states in the ordered energy eigenbasis.

use nalgebra::{Complex, ComplexField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    eigh, hermitian_part, hermiticity_defect, outer, real, trace_with_diagonal, CMatrix, CVector,
};
use crate::scalar::Scalar;
use crate::spectrum::Spectrum;

/// Probability vector over the energy levels.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalState<T: Scalar> {
    probs: Vec<T>,
}

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Scalar> {
    matrix: CMatrix<T>,
}

/// Eigenvalues of a state, clipped to `[0, 1]`, in both orders.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum<T> {
    pub ascending: Vec<T>,
    pub descending: Vec<T>,
}

fn sum<T: Scalar>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |acc, &x| acc + x)
}

/// Shannon entropy in bits with `0 log 0 = 0`.
pub(crate) fn shannon_bits<T: Scalar>(probs: &[T]) -> T {
    probs.iter().fold(T::zero(), |acc, &p| {
        if p > T::zero() {
            acc - p * p.ln() / T::ln_2()
        } else {
            acc
        }
    })
}

/// Indices that sort `values` descending; ties keep their original order.
fn descending_order<T: Scalar>(values: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    idx
}

fn ascending_order<T: Scalar>(values: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    idx
}

impl<T: Scalar> DiagonalState<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        let psd = T::lit(T::PSD_TOL);
        for (index, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < -psd {
                return Err(Error::NegativeProbability {
                    index,
                    value: p.as_f64(),
                });
            }
        }
        let total = sum(&probs);
        if (total - T::one()).abs() > T::lit(T::STATE_TOL) {
            return Err(Error::TraceNotOne((total - T::one()).abs().as_f64()));
        }
        Ok(Self { probs })
    }

    pub fn uniform(dim: usize) -> Self {
        let p = T::one() / T::count(dim);
        Self { probs: vec![p; dim] }
    }

    /// `|e_k><e_k|`, 0-based level index.
    pub fn pure_level(dim: usize, level: usize) -> Self {
        let mut probs = vec![T::zero(); dim];
        probs[level] = T::one();
        Self { probs }
    }

    /// `weight * a + (1 - weight) * b`.
    pub fn mix(weight: T, a: &Self, b: &Self) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        let probs = a
            .probs
            .iter()
            .zip(&b.probs)
            .map(|(&x, &y)| weight * x + (T::one() - weight) * y)
            .collect();
        Self::new(probs)
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn mean_energy(&self, spec: &Spectrum<T>) -> Result<T> {
        spec.check_dim(self.dim())?;
        Ok(self
            .probs
            .iter()
            .zip(spec.levels())
            .fold(T::zero(), |acc, (&p, &e)| acc + p * e))
    }

    /// Populations sorted descending onto ascending energies.
    pub fn passive_rearrangement(&self) -> Self {
        let order = descending_order(&self.probs);
        Self {
            probs: order.iter().map(|&k| self.probs[k]).collect(),
        }
    }

    /// Populations sorted ascending onto ascending energies.
    pub fn antipassive_rearrangement(&self) -> Self {
        let order = ascending_order(&self.probs);
        Self {
            probs: order.iter().map(|&k| self.probs[k]).collect(),
        }
    }

    pub fn entropy_bits(&self) -> T {
        shannon_bits(&self.probs)
    }

    pub fn to_density_matrix(&self) -> DensityMatrix<T> {
        DensityMatrix {
            matrix: crate::linalg::diagonal_matrix(&self.probs),
        }
    }

    /// Eigenvalues clipped to `[0, 1]`; the populations themselves.
    pub fn eigen_spectrum(&self) -> EigenSpectrum<T> {
        clipped_spectrum(self.probs.clone())
    }
}

fn clipped_spectrum<T: Scalar>(mut values: Vec<T>) -> EigenSpectrum<T> {
    for v in values.iter_mut() {
        *v = v.max(T::zero()).min(T::one());
    }
    let total = sum(&values);
    if total > T::zero() {
        for v in values.iter_mut() {
            *v /= total;
        }
    }
    let mut ascending = values;
    ascending.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let descending = ascending.iter().rev().copied().collect();
    EigenSpectrum {
        ascending,
        descending,
    }
}

impl<T: Scalar> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptySpectrum);
        }
        if matrix.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Parse("non-finite matrix entry".into()));
        }
        let herm = hermiticity_defect(&matrix);
        if herm > T::lit(T::STATE_TOL) {
            return Err(Error::NotHermitian(herm.as_f64()));
        }
        let trace = matrix.trace().re;
        if (trace - T::one()).abs() > T::lit(T::STATE_TOL) {
            return Err(Error::TraceNotOne((trace - T::one()).abs().as_f64()));
        }
        let matrix = hermitian_part(&matrix);
        let lowest = eigh(&matrix)?.values[0];
        if lowest < -T::lit(T::PSD_TOL) {
            return Err(Error::NotPositive(lowest.as_f64()));
        }
        Ok(Self { matrix })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_trusted(matrix: CMatrix<T>) -> Self {
        Self {
            matrix: hermitian_part(&matrix),
        }
    }

    /// `|psi><psi|` for a normalized vector.
    pub fn pure(psi: &CVector<T>) -> Result<Self> {
        let norm = psi.norm();
        if !norm.is_finite() || norm <= T::zero() {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        Self::new(outer(&(psi / real(norm))))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DiagonalState::uniform(dim).to_density_matrix()
    }

    /// `weight * a + (1 - weight) * b`.
    pub fn mix(weight: T, a: &Self, b: &Self) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        Self::new(&a.matrix * real(weight) + &b.matrix * real(T::one() - weight))
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn mean_energy(&self, spec: &Spectrum<T>) -> Result<T> {
        spec.check_dim(self.dim())?;
        Ok(trace_with_diagonal(&self.matrix, spec.levels()))
    }

    pub fn eigen_spectrum(&self) -> Result<EigenSpectrum<T>> {
        let values = eigh(&self.matrix)?.values;
        if values[0] < -T::lit(T::PSD_TOL) {
            return Err(Error::NotPositive(values[0].as_f64()));
        }
        Ok(clipped_spectrum(values))
    }

    /// Removes every coherence in the energy eigenbasis.
    pub fn dephase(&self) -> DiagonalState<T> {
        let probs = (0..self.dim()).map(|k| self.matrix[(k, k)].re).collect();
        DiagonalState { probs }
    }

    pub fn passive_rearrangement(&self) -> Result<DiagonalState<T>> {
        Ok(DiagonalState {
            probs: self.eigen_spectrum()?.descending,
        })
    }

    pub fn antipassive_rearrangement(&self) -> Result<DiagonalState<T>> {
        Ok(DiagonalState {
            probs: self.eigen_spectrum()?.ascending,
        })
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> Result<T> {
        Ok(shannon_bits(&self.eigen_spectrum()?.ascending))
    }

    /// Relative entropy of coherence `S(dephase(rho)) - S(rho)` in bits.
    pub fn coherence_rel_entropy_bits(&self) -> Result<T> {
        let dephased = clipped_spectrum(self.dephase().probs);
        Ok(shannon_bits(&dephased.ascending) - self.entropy_bits()?)
    }

    /// Rank-one state with amplitudes `sqrt(p_k)` on each level.
    pub fn pure_from_amplitudes(probs: &DiagonalState<T>) -> Self {
        let amps = CVector::<T>::from_iterator(
            probs.dim(),
            probs.probs.iter().map(|&p| real(p.max(T::zero()).sqrt())),
        );
        Self::from_trusted(outer(&amps))
    }

    /// `U rho U^dagger`.
    pub fn conjugate(&self, unitary: &CMatrix<T>) -> Self {
        Self::from_trusted(unitary * &self.matrix * unitary.adjoint())
    }

    pub fn is_diagonal(&self, tol: T) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)].modulus() <= tol))
    }

    /// Deterministic test-ensemble state with mean energy `energy`.
    ///
    /// Draws a Haar-random pure state, a Hilbert-Schmidt mixed state or a
    /// random diagonal state, then mixes it with the ground or top level at
    /// the unique ratio that hits `energy`.
    pub fn sample_at_energy(spec: &Spectrum<T>, energy: T, seed: u64) -> Result<Self> {
        spec.check_energy(energy)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = spec.dim();
        let base = match rng.random_range(0..3u8) {
            0 => haar_pure(&mut rng, d),
            1 => hilbert_schmidt(&mut rng, d),
            _ => random_diagonal(&mut rng, d),
        };
        Ok(match_energy(base, spec, energy))
    }
}

fn gaussian<T: Scalar, R: Rng>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

fn haar_pure<T: Scalar, R: Rng>(rng: &mut R, d: usize) -> CMatrix<T> {
    let v = CVector::<T>::from_fn(d, |_, _| gaussian(rng));
    let n = v.norm();
    outer(&(v / real(n)))
}

fn hilbert_schmidt<T: Scalar, R: Rng>(rng: &mut R, d: usize) -> CMatrix<T> {
    let g = CMatrix::<T>::from_fn(d, d, |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    hermitian_part(&(m / real(tr)))
}

fn random_diagonal<T: Scalar, R: Rng>(rng: &mut R, d: usize) -> CMatrix<T> {
    let w: Vec<f64> = (0..d).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    let probs: Vec<T> = w.iter().map(|x| T::lit(x / total)).collect();
    crate::linalg::diagonal_matrix(&probs)
}

fn match_energy<T: Scalar>(base: CMatrix<T>, spec: &Spectrum<T>, energy: T) -> DensityMatrix<T> {
    let d = spec.dim();
    let e_base = trace_with_diagonal(&base, spec.levels());
    let (t, anchor) = if e_base >= energy {
        let den = e_base - spec.min();
        (
            if den > T::zero() {
                (energy - spec.min()) / den
            } else {
                T::one()
            },
            0,
        )
    } else {
        let den = spec.max() - e_base;
        (
            if den > T::zero() {
                (spec.max() - energy) / den
            } else {
                T::one()
            },
            d - 1,
        )
    };
    let t = t.max(T::zero()).min(T::one());
    let mut m = base * real(t);
    m[(anchor, anchor)] += real(T::one() - t);
    DensityMatrix::from_trusted(m)
}
