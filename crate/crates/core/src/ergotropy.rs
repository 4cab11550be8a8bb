// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! Ergotropy, anti-ergotropy and the unitaries that attain them.
//!
//! Everything here is computed from sorted spectra: the passive energy of a
//! state is the dot product of its descending eigenvalues with the ascending
//! energy levels, the anti-passive energy uses ascending eigenvalues.

use nalgebra::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh, unitarity_defect, CMatrix};
use crate::scalar::Scalar;
use crate::spectrum::Spectrum;
use crate::state::{DensityMatrix, DiagonalState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErgotropyReport<T> {
    pub ergotropy: T,
    pub anti_ergotropy: T,
    pub coherent_ergotropy: T,
    pub coherent_anti_ergotropy: T,
    pub mean_energy: T,
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Clips `[-CLIP_TOL, 0)` to zero and rejects anything more negative.
pub(crate) fn clip_nonnegative<T: Scalar>(value: T, what: &str) -> Result<T> {
    if value >= T::zero() {
        Ok(value)
    } else if value >= -T::lit(T::CLIP_TOL) {
        Ok(T::zero())
    } else {
        Err(Error::Numerical(format!(
            "{what} evaluated to {}",
            value.as_f64()
        )))
    }
}

fn from_spectra<T: Scalar>(
    mean_energy: T,
    ascending: &[T],
    descending: &[T],
    spec: &Spectrum<T>,
) -> Result<(T, T)> {
    let passive = dot(descending, spec.levels());
    let antipassive = dot(ascending, spec.levels());
    Ok((
        clip_nonnegative(mean_energy - passive, "ergotropy")?,
        clip_nonnegative(antipassive - mean_energy, "anti-ergotropy")?,
    ))
}

pub fn ergotropy<T: Scalar>(rho: &DensityMatrix<T>, spec: &Spectrum<T>) -> Result<T> {
    Ok(ergotropy_pair(rho, spec)?.0)
}

pub fn anti_ergotropy<T: Scalar>(rho: &DensityMatrix<T>, spec: &Spectrum<T>) -> Result<T> {
    Ok(ergotropy_pair(rho, spec)?.1)
}

/// `(ergotropy, anti_ergotropy)` from a single eigendecomposition.
pub fn ergotropy_pair<T: Scalar>(rho: &DensityMatrix<T>, spec: &Spectrum<T>) -> Result<(T, T)> {
    let e = rho.mean_energy(spec)?;
    let eig = rho.eigen_spectrum()?;
    from_spectra(e, &eig.ascending, &eig.descending, spec)
}

pub fn diagonal_ergotropy<T: Scalar>(p: &DiagonalState<T>, spec: &Spectrum<T>) -> Result<T> {
    Ok(diagonal_pair(p, spec)?.0)
}

pub fn diagonal_anti_ergotropy<T: Scalar>(p: &DiagonalState<T>, spec: &Spectrum<T>) -> Result<T> {
    Ok(diagonal_pair(p, spec)?.1)
}

fn diagonal_pair<T: Scalar>(p: &DiagonalState<T>, spec: &Spectrum<T>) -> Result<(T, T)> {
    let e = p.mean_energy(spec)?;
    let eig = p.eigen_spectrum();
    from_spectra(e, &eig.ascending, &eig.descending, spec)
}

/// Ergotropy of `rho` minus that of its dephased version.
pub fn coherent_ergotropy<T: Scalar>(rho: &DensityMatrix<T>, spec: &Spectrum<T>) -> Result<T> {
    let total = ergotropy(rho, spec)?;
    let incoherent = diagonal_ergotropy(&rho.dephase(), spec)?;
    clip_nonnegative(total - incoherent, "coherent ergotropy")
}

pub fn coherent_anti_ergotropy<T: Scalar>(rho: &DensityMatrix<T>, spec: &Spectrum<T>) -> Result<T> {
    let total = anti_ergotropy(rho, spec)?;
    let incoherent = diagonal_anti_ergotropy(&rho.dephase(), spec)?;
    clip_nonnegative(total - incoherent, "coherent anti-ergotropy")
}

pub fn report<T: Scalar>(rho: &DensityMatrix<T>, spec: &Spectrum<T>) -> Result<ErgotropyReport<T>> {
    let (ergotropy, anti_ergotropy) = ergotropy_pair(rho, spec)?;
    let (erg_inc, anti_inc) = diagonal_pair(&rho.dephase(), spec)?;
    Ok(ErgotropyReport {
        ergotropy,
        anti_ergotropy,
        coherent_ergotropy: clip_nonnegative(ergotropy - erg_inc, "coherent ergotropy")?,
        coherent_anti_ergotropy: clip_nonnegative(anti_ergotropy - anti_inc, "coherent anti-ergotropy")?,
        mean_energy: rho.mean_energy(spec)?,
    })
}

/// Unitary mapping the eigenvectors of `rho` (eigenvalues descending) onto
/// the energy levels in ascending order; it leaves `rho` passive.
pub fn optimal_extraction_unitary<T: Scalar>(
    rho: &DensityMatrix<T>,
    spec: &Spectrum<T>,
) -> Result<CMatrix<T>> {
    eigenbasis_unitary(rho, spec, false)
}

/// Unitary mapping the eigenvectors of `rho` (eigenvalues descending) onto
/// the energy levels in descending order; it leaves `rho` anti-passive.
pub fn optimal_charging_unitary<T: Scalar>(rho: &DensityMatrix<T>, spec: &Spectrum<T>) -> Result<CMatrix<T>> {
    eigenbasis_unitary(rho, spec, true)
}

fn eigenbasis_unitary<T: Scalar>(
    rho: &DensityMatrix<T>,
    spec: &Spectrum<T>,
    reversed: bool,
) -> Result<CMatrix<T>> {
    spec.check_dim(rho.dim())?;
    let d = rho.dim();
    let eig = eigh(rho.matrix())?;
    // eigh is ascending; a stable descending order keeps ties deterministic
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eig.values[b]
            .partial_cmp(&eig.values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut u = CMatrix::<T>::zeros(d, d);
    for (k, &col) in order.iter().enumerate() {
        let target = if reversed { d - 1 - k } else { k };
        for j in 0..d {
            let phi: Complex<T> = eig.vectors[(j, col)];
            u[(target, j)] = phi.conj();
        }
    }
    let defect = unitarity_defect(&u);
    if defect > T::lit(T::UNITARY_TOL) {
        return Err(Error::NotUnitary(defect.as_f64()));
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{real, trace_with_diagonal, CVector};

    fn qutrit() -> Spectrum<f64> {
        Spectrum::new(vec![0.0, 0.6, 2.0]).unwrap()
    }

    fn diag(p: &[f64]) -> DensityMatrix<f64> {
        DiagonalState::new(p.to_vec()).unwrap().to_density_matrix()
    }

    fn superposition_13() -> DensityMatrix<f64> {
        let s = 0.5_f64.sqrt();
        DensityMatrix::pure(&CVector::from_vec(vec![real(s), real(0.0), real(s)])).unwrap()
    }

    fn delta_e(rho: &DensityMatrix<f64>, u: &CMatrix<f64>, spec: &Spectrum<f64>) -> f64 {
        let after = rho.conjugate(u);
        rho.mean_energy(spec).unwrap() - trace_with_diagonal(after.matrix(), spec.levels())
    }

    #[test]
    fn ergotropy_examples() {
        let spec = qutrit();
        assert!((ergotropy(&diag(&[0.2, 0.3, 0.5]), &spec).unwrap() - 0.6).abs() < 1e-12);
        assert!((ergotropy(&superposition_13(), &spec).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(ergotropy(&diag(&[0.5, 0.3, 0.2]), &spec).unwrap(), 0.0);
    }

    #[test]
    fn anti_ergotropy_examples() {
        let spec = qutrit();
        assert_eq!(anti_ergotropy(&diag(&[0.2, 0.3, 0.5]), &spec).unwrap(), 0.0);
        assert!((anti_ergotropy(&diag(&[0.5, 0.3, 0.2]), &spec).unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn coherent_parts() {
        let spec = qutrit();
        assert_eq!(coherent_ergotropy(&diag(&[0.2, 0.3, 0.5]), &spec).unwrap(), 0.0);
        // dephased state (0.5, 0, 0.5) keeps 0.7 of the 1.0 total
        let dephased = diag(&[0.5, 0.0, 0.5]);
        assert!((ergotropy(&dephased, &spec).unwrap() - 0.7).abs() < 1e-12);
        let c = coherent_ergotropy(&superposition_13(), &spec).unwrap();
        assert!((c - 0.3).abs() < 1e-12, "{c}");
        let r = report(&superposition_13(), &spec).unwrap();
        assert!((r.mean_energy - 1.0).abs() < 1e-12);
        assert!((r.coherent_ergotropy - 0.3).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let two = Spectrum::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            ergotropy(&diag(&[0.2, 0.3, 0.5]), &two),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn clipping_rules() {
        assert_eq!(clip_nonnegative(-5e-11, "x").unwrap(), 0.0);
        assert!(clip_nonnegative(-1e-9, "x").is_err());
    }

    #[test]
    fn extraction_unitary_reverses_populations() {
        let spec = qutrit();
        let rho = diag(&[0.2, 0.3, 0.5]);
        let u = optimal_extraction_unitary(&rho, &spec).unwrap();
        assert!((delta_e(&rho, &u, &spec) - 0.6).abs() < 1e-12);
        let after = rho.conjugate(&u).dephase();
        for (x, y) in after.probs().iter().zip([0.5, 0.3, 0.2]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn charging_unitary_attains_anti_ergotropy() {
        let spec = qutrit();
        let rho = diag(&[0.5, 0.3, 0.2]);
        let u = optimal_charging_unitary(&rho, &spec).unwrap();
        assert!((delta_e(&rho, &u, &spec) + 0.6).abs() < 1e-12);
    }

    #[test]
    fn passive_state_has_zero_change() {
        let spec = qutrit();
        let rho = diag(&[0.6, 0.3, 0.1]);
        let u = optimal_extraction_unitary(&rho, &spec).unwrap();
        assert!(delta_e(&rho, &u, &spec).abs() < 1e-12);
    }
}
