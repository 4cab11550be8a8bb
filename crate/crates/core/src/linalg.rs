// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! Small complex-matrix helpers on top of nalgebra.

use nalgebra::{Complex, ComplexField, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

const MAX_SWEEPS: usize = 10_000;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Scalar> {
    pub values: Vec<T>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix<T>,
}

pub fn eigh<T: Scalar>(m: &CMatrix<T>) -> Result<HermitianEigen<T>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::NotSquare {
            rows: n,
            cols: m.ncols(),
        });
    }
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: m.clone(),
        });
    }
    let sym = hermitian_part(m);
    let eig = SymmetricEigen::try_new(sym, T::default_epsilon(), MAX_SWEEPS).ok_or(Error::Eigensolver)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// `(M + M^dagger) / 2`.
pub fn hermitian_part<T: Scalar>(m: &CMatrix<T>) -> CMatrix<T> {
    let half = Complex::new(T::lit(0.5), T::zero());
    (m + m.adjoint()) * half
}

pub fn max_abs_entry<T: Scalar>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

/// Largest entry of `|M - M^dagger|`.
pub fn hermiticity_defect<T: Scalar>(m: &CMatrix<T>) -> T {
    max_abs_entry(&(m - m.adjoint()))
}

/// Largest entry of `|U^dagger U - I|`.
pub fn unitarity_defect<T: Scalar>(u: &CMatrix<T>) -> T {
    let n = u.nrows();
    max_abs_entry(&(u.adjoint() * u - CMatrix::<T>::identity(n, n)))
}

pub fn diagonal_matrix<T: Scalar>(diag: &[T]) -> CMatrix<T> {
    let n = diag.len();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex::new(diag[i], T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

/// Real part of `Tr[A B]` without forming the product.
pub fn trace_product_re<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    let n = a.nrows();
    let mut acc = T::zero();
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// Real part of `Tr[rho diag(d)]`.
pub fn trace_with_diagonal<T: Scalar>(rho: &CMatrix<T>, diag: &[T]) -> T {
    diag.iter()
        .enumerate()
        .fold(T::zero(), |acc, (k, &e)| acc + rho[(k, k)].re * e)
}

pub fn outer<T: Scalar>(v: &CVector<T>) -> CMatrix<T> {
    v * v.adjoint()
}

pub fn cis<T: Scalar>(phase: T) -> Complex<T> {
    Complex::new(phase.cos(), phase.sin())
}

pub fn real<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
