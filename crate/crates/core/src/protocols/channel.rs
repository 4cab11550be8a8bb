// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::linalg::{trace_with_diagonal, unitarity_defect, CMatrix};
use crate::scalar::Scalar;
use crate::spectrum::Spectrum;
use crate::state::DensityMatrix;

/// A single unitary acting as `rho -> U rho U^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryChannel<T: Scalar> {
    matrix: CMatrix<T>,
}

/// Convex mixture `rho -> sum_i w_i U_i rho U_i^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomUnitaryChannel<T: Scalar> {
    members: Vec<(T, UnitaryChannel<T>)>,
}

/// Anything that can be written as a weighted list of unitaries.
pub trait Channel<T: Scalar> {
    fn dim(&self) -> usize;

    fn members(&self) -> Vec<(T, &CMatrix<T>)>;

    fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        let d = self.dim();
        let mut out = CMatrix::<T>::zeros(d, d);
        for (w, u) in self.members() {
            out += (u * rho.matrix() * u.adjoint()) * Complex::new(w, T::zero());
        }
        Ok(DensityMatrix::from_trusted(out))
    }

    /// `sum_i w_i U_i^dagger H U_i`, the Heisenberg-picture energy.
    fn heisenberg_energy(&self, spec: &Spectrum<T>) -> Result<CMatrix<T>> {
        spec.check_dim(self.dim())?;
        let h = spec.hamiltonian();
        let d = self.dim();
        let mut out = CMatrix::<T>::zeros(d, d);
        for (w, u) in self.members() {
            out += (u.adjoint() * &h * u) * Complex::new(w, T::zero());
        }
        Ok(out)
    }
}

impl<T: Scalar> UnitaryChannel<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::InvalidArgument("empty unitary".into()));
        }
        let defect = unitarity_defect(&matrix);
        if !defect.is_finite() || defect > T::lit(T::UNITARY_TOL) {
            return Err(Error::NotUnitary(defect.as_f64()));
        }
        Ok(Self { matrix })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: CMatrix::identity(d, d),
        }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// `U V` as a channel: `V` acts first.
    pub fn compose(&self, first: &Self) -> Result<Self> {
        if self.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: first.dim(),
            });
        }
        Ok(Self {
            matrix: &self.matrix * &first.matrix,
        })
    }
}

impl<T: Scalar> Channel<T> for UnitaryChannel<T> {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn members(&self) -> Vec<(T, &CMatrix<T>)> {
        vec![(T::one(), &self.matrix)]
    }
}

impl<T: Scalar> RandomUnitaryChannel<T> {
    pub fn new(members: Vec<(T, UnitaryChannel<T>)>) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(Error::InvalidWeights("no members".into()));
        };
        let d = first.dim();
        if let Some((_, u)) = members.iter().find(|(_, u)| u.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: u.dim(),
            });
        }
        if let Some((w, _)) = members.iter().find(|(w, _)| !(w.is_finite() && *w >= T::zero())) {
            return Err(Error::InvalidWeights(format!(
                "negative or non-finite weight {w}"
            )));
        }
        let total = members.iter().fold(T::zero(), |acc, (w, _)| acc + *w);
        if (total - T::one()).abs() > T::lit(T::WEIGHT_TOL) {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        Ok(Self { members })
    }

    pub fn entries(&self) -> &[(T, UnitaryChannel<T>)] {
        &self.members
    }
}

impl<T: Scalar> From<UnitaryChannel<T>> for RandomUnitaryChannel<T> {
    fn from(u: UnitaryChannel<T>) -> Self {
        Self {
            members: vec![(T::one(), u)],
        }
    }
}

impl<T: Scalar> Channel<T> for RandomUnitaryChannel<T> {
    fn dim(&self) -> usize {
        self.members[0].1.dim()
    }

    fn members(&self) -> Vec<(T, &CMatrix<T>)> {
        self.members.iter().map(|(w, u)| (*w, u.matrix())).collect()
    }
}

pub fn apply<T: Scalar, C: Channel<T> + ?Sized>(
    channel: &C,
    rho: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    channel.apply(rho)
}

/// `Tr[rho H] - Tr[channel(rho) H]`: positive when energy is extracted.
pub fn delta_e<T: Scalar, C: Channel<T> + ?Sized>(
    rho: &DensityMatrix<T>,
    channel: &C,
    spec: &Spectrum<T>,
) -> Result<T> {
    spec.check_dim(rho.dim())?;
    let out = channel.apply(rho)?;
    Ok(rho.mean_energy(spec)? - trace_with_diagonal(out.matrix(), spec.levels()))
}

/// Anti-diagonal permutation sending level `k` to level `d + 1 - k`.
pub fn u_rev<T: Scalar>(d: usize) -> UnitaryChannel<T> {
    let matrix = CMatrix::from_fn(d, d, |i, j| {
        if i + j + 1 == d {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    UnitaryChannel { matrix }
}
