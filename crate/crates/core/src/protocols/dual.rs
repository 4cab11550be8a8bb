// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact worst-case energy change of a fixed channel over all states at a
//! given mean energy.
//!
//! The inner problem `min Tr[rho A]` subject to `Tr rho = 1`, `Tr[rho H] = E`
//! and `rho >= 0` has the Lagrange dual
//!
//! ```text
//! g(lambda) = lambda E + lambda_min(A - lambda H)
//! ```
//!
//! which is concave in `lambda` and has no duality gap, so a one-dimensional
//! golden-section search gives the primal optimum.

use nalgebra::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh, hermitian_part, max_abs_entry, outer, real, CMatrix, CVector};
use crate::scalar::Scalar;
use crate::spectrum::Spectrum;
use crate::state::DensityMatrix;
use crate::Mode;

use super::channel::Channel;

const MAX_DOUBLINGS: usize = 60;
const MAX_GOLDEN_STEPS: usize = 400;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstCaseResult<T: Scalar> {
    /// `min` over states at energy `E` of `+-Delta E` (sign set by the mode).
    pub value: T,
    /// Optimal multiplier of the energy constraint; zero at the spectrum
    /// endpoints, where no finite multiplier exists.
    pub dual_multiplier: T,
    pub witness_state: DensityMatrix<T>,
}

/// `+-(H - sum_i w_i U_i^dagger H U_i)`; its expectation is the (signed)
/// energy change of a state under the channel.
pub fn energy_change_operator<T: Scalar, C: Channel<T> + ?Sized>(
    channel: &C,
    spec: &Spectrum<T>,
    mode: Mode,
) -> Result<CMatrix<T>> {
    let a = spec.hamiltonian() - channel.heisenberg_energy(spec)?;
    Ok(hermitian_part(&match mode {
        Mode::Extract => a,
        Mode::Inject => -a,
    }))
}

pub fn worst_case_delta_e<T: Scalar, C: Channel<T> + ?Sized>(
    channel: &C,
    spec: &Spectrum<T>,
    energy: T,
    mode: Mode,
) -> Result<WorstCaseResult<T>> {
    spec.check_dim(channel.dim())?;
    spec.check_energy(energy)?;
    let a = energy_change_operator(channel, spec, mode)?;
    if energy == spec.min() || energy == spec.max() {
        return boundary(&a, spec, energy);
    }
    DualScan::new(a, spec, energy).solve()
}

/// At an endpoint every admissible state lives in the extreme eigenspace.
fn boundary<T: Scalar>(a: &CMatrix<T>, spec: &Spectrum<T>, energy: T) -> Result<WorstCaseResult<T>> {
    let idx: Vec<usize> = spec
        .levels()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e == energy)
        .map(|(i, _)| i)
        .collect();
    let sub = CMatrix::from_fn(idx.len(), idx.len(), |i, j| a[(idx[i], idx[j])]);
    let eig = eigh(&sub)?;
    let mut psi = CVector::<T>::zeros(spec.dim());
    for (i, &k) in idx.iter().enumerate() {
        psi[k] = eig.vectors[(i, 0)];
    }
    Ok(WorstCaseResult {
        value: eig.values[0],
        dual_multiplier: T::zero(),
        witness_state: DensityMatrix::from_trusted(outer(&psi)),
    })
}

struct DualScan<'a, T: Scalar> {
    a: CMatrix<T>,
    h: CMatrix<T>,
    spec: &'a Spectrum<T>,
    energy: T,
}

impl<'a, T: Scalar> DualScan<'a, T> {
    fn new(a: CMatrix<T>, spec: &'a Spectrum<T>, energy: T) -> Self {
        Self {
            a,
            h: spec.hamiltonian(),
            spec,
            energy,
        }
    }

    fn pencil(&self, lambda: T) -> CMatrix<T> {
        &self.a - &self.h * Complex::new(lambda, T::zero())
    }

    fn g(&self, lambda: T) -> Result<T> {
        Ok(lambda * self.energy + eigh(&self.pencil(lambda))?.values[0])
    }

    fn initial_half_width(&self) -> T {
        let span = self.spec.span();
        let gap = self.spec.min_gap().unwrap_or(span).max(T::lit(1e-6) * span);
        T::one() + T::lit(10.0) * max_abs_entry(&self.a) / gap
    }

    fn bracket(&self) -> Result<T> {
        let two = T::lit(2.0);
        let mut l = self.initial_half_width();
        for _ in 0..=MAX_DOUBLINGS {
            let right = self.g(l / two)? >= self.g(l)?;
            let left = self.g(-l / two)? >= self.g(-l)?;
            if right && left {
                return Ok(l);
            }
            l *= two;
        }
        Err(Error::UnboundedDual(MAX_DOUBLINGS))
    }

    fn solve(&self) -> Result<WorstCaseResult<T>> {
        let half = self.bracket()?;
        let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
        let rel = T::lit(5.0) * T::default_epsilon();

        let (mut lo, mut hi) = (-half, half);
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let mut g1 = self.g(x1)?;
        let mut g2 = self.g(x2)?;
        let mut best = if g1 >= g2 { (x1, g1) } else { (x2, g2) };
        for _ in 0..MAX_GOLDEN_STEPS {
            if hi - lo <= rel * T::one().max(lo.abs()).max(hi.abs()) {
                break;
            }
            if g1 >= g2 {
                hi = x2;
                x2 = x1;
                g2 = g1;
                x1 = hi - inv_phi * (hi - lo);
                g1 = self.g(x1)?;
            } else {
                lo = x1;
                x1 = x2;
                g1 = g2;
                x2 = lo + inv_phi * (hi - lo);
                g2 = self.g(x2)?;
            }
            for (x, gx) in [(x1, g1), (x2, g2)] {
                if gx > best.1 {
                    best = (x, gx);
                }
            }
        }
        let lambda = self.polish(best.0)?;
        let g_polished = self.g(lambda)?;
        let (lambda, value) = if g_polished >= best.1 {
            (lambda, g_polished)
        } else {
            (lambda, best.1)
        };
        let witness_state = self.witness(lambda)?;
        Ok(WorstCaseResult {
            value,
            dual_multiplier: lambda,
            witness_state,
        })
    }

    /// `E - <H>` on the lowest eigenvector: a supergradient of `g`.
    fn slope(&self, lambda: T) -> Result<T> {
        let eig = eigh(&self.pencil(lambda))?;
        let v = eig.vectors.column(0);
        Ok(self.energy - (v.adjoint() * &self.h * v)[(0, 0)].re)
    }

    /// Golden section only resolves a smooth maximum to about `sqrt(eps)`;
    /// bisection on the supergradient sign takes it to machine precision.
    fn polish(&self, lambda: T) -> Result<T> {
        let two = T::lit(2.0);
        let mut step = T::lit(1e-6) * T::one().max(lambda.abs());
        let (mut lo, mut hi) = (lambda - step, lambda + step);
        for _ in 0..MAX_DOUBLINGS {
            if self.slope(lo)? >= T::zero() && self.slope(hi)? <= T::zero() {
                break;
            }
            step *= two;
            lo = lambda - step;
            hi = lambda + step;
        }
        if !(self.slope(lo)? >= T::zero() && self.slope(hi)? <= T::zero()) {
            return Ok(lambda);
        }
        for _ in 0..MAX_GOLDEN_STEPS {
            let mid = (lo + hi) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            if self.slope(mid)? > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo + hi) / two)
    }

    /// Mixes the two extreme-energy vectors of the optimal eigenspace so
    /// that the mean energy is exactly `E`.
    fn witness(&self, lambda: T) -> Result<DensityMatrix<T>> {
        let eig = eigh(&self.pencil(lambda))?;
        let spec = self.spec;
        let reach = spec.min().abs().max(spec.max().abs());
        let scale = max_abs_entry(&self.a) + lambda.abs() * reach + spec.span();
        let miss = T::lit(1e-10) * spec.span().max(T::one());
        let d = spec.dim();

        let mut tol = T::lit(1e-11) * scale;
        while tol <= T::lit(1.000_001e-4) * scale {
            let cluster: Vec<usize> = (0..d).filter(|&i| eig.values[i] <= eig.values[0] + tol).collect();
            let v = CMatrix::from_fn(d, cluster.len(), |i, j| eig.vectors[(i, cluster[j])]);
            let projected = eigh(&(v.adjoint() * &self.h * &v))?;
            let m = cluster.len();
            let (h_lo, h_hi) = (projected.values[0], projected.values[m - 1]);
            if h_lo - miss <= self.energy && self.energy <= h_hi + miss {
                let x_lo = &v * projected.vectors.column(0);
                let x_hi = &v * projected.vectors.column(m - 1);
                let t = if h_hi - h_lo > T::zero() {
                    ((h_hi - self.energy) / (h_hi - h_lo))
                        .max(T::zero())
                        .min(T::one())
                } else {
                    T::one()
                };
                let rho = outer(&x_lo) * real(t) + outer(&x_hi) * real(T::one() - t);
                return Ok(DensityMatrix::from_trusted(rho));
            }
            tol *= T::lit(10.0);
        }
        Err(Error::DegenerateDual(format!(
            "no eigenspace of the optimal pencil reaches E = {} (multiplier {})",
            self.energy.as_f64(),
            lambda.as_f64()
        )))
    }
}
