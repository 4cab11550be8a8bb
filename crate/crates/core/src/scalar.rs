// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! Floating-point scalar abstraction shared by every numeric module.

use nalgebra::RealField;
use num_traits::ToPrimitive;

/// Real scalar type the library is generic over (`f32` or `f64`).
///
/// Tolerances are attached to the type so that single-precision builds get
/// thresholds that are reachable at their machine epsilon.
pub trait Scalar: RealField + Copy + ToPrimitive + Default {
    /// Hermiticity and unit-trace tolerance for density matrices.
    const STATE_TOL: f64;
    /// Smallest eigenvalue a state may have before it is rejected as non-PSD.
    const PSD_TOL: f64;
    /// Negative ergotropy noise that is silently clipped to zero.
    const CLIP_TOL: f64;
    /// Maximum entry of `U^dagger U - I` accepted for a unitary.
    const UNITARY_TOL: f64;
    /// Probability-weight tolerance for random-unitary mixtures.
    const WEIGHT_TOL: f64;

    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn count(n: usize) -> Self {
        nalgebra::convert(n as f64)
    }
}

impl Scalar for f64 {
    const STATE_TOL: f64 = 1e-10;
    const PSD_TOL: f64 = 1e-9;
    const CLIP_TOL: f64 = 1e-10;
    const UNITARY_TOL: f64 = 1e-10;
    const WEIGHT_TOL: f64 = 1e-12;
}

impl Scalar for f32 {
    const STATE_TOL: f64 = 1e-5;
    const PSD_TOL: f64 = 1e-4;
    const CLIP_TOL: f64 = 1e-5;
    const UNITARY_TOL: f64 = 1e-5;
    const WEIGHT_TOL: f64 = 1e-6;
}
