// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form protocols for the qutrit `(0, (1 + delta) eps, 2 eps)`.
//!
//! The diagonal-optimal unitary is the population reversal preceded by a
//! rotation `U_23` (for `delta >= 0`) or `U_12` (for `delta < 0`) with mixing
//! weight `q_bar`. It extracts exactly the minimum ergotropy from every
//! diagonal state in its segment, but coherences between the rotated levels
//! shift the outcome by up to the coherence penalty. Averaging two copies with
//! opposite `alpha` phases cancels that shift.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cis, real, CMatrix};
use crate::scalar::Scalar;
use crate::spectrum::Spectrum;
use crate::state::DensityMatrix;

use super::channel::{u_rev, RandomUnitaryChannel, UnitaryChannel};

/// Free phases of the rotation block; none of them changes the outcome on
/// diagonal states.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Phases<T> {
    pub alpha: T,
    pub theta: T,
    pub phi: T,
}

impl<T: Scalar> Phases<T> {
    pub fn shifted_alpha(self) -> Self {
        Self {
            alpha: self.alpha + T::pi(),
            ..self
        }
    }
}

struct Qutrit<T: Scalar> {
    spec: Spectrum<T>,
    delta: T,
    e2: T,
    e3: T,
}

impl<T: Scalar> Qutrit<T> {
    fn new(eps: T, delta: T) -> Result<Self> {
        let spec = Spectrum::qutrit(eps, delta)?;
        let (e2, e3) = (spec.levels()[1], spec.levels()[2]);
        Ok(Self { spec, delta, e2, e3 })
    }

    fn mean(&self) -> T {
        self.spec.mean()
    }

    fn upper_regime(&self) -> bool {
        self.delta >= T::zero()
    }

    /// Where the rotated unitary is used and the coherence penalty applies.
    fn segment(&self) -> (T, T) {
        if self.upper_regime() {
            (self.mean(), T::lit(1.5) * self.mean())
        } else {
            (self.mean(), self.e3)
        }
    }

    fn check_segment(&self, energy: T) -> Result<()> {
        let (lo, hi) = self.segment();
        if energy.is_finite() && lo <= energy && energy <= hi {
            Ok(())
        } else {
            Err(Error::EnergyOutOfRange {
                energy: energy.as_f64(),
                min: lo.as_f64(),
                max: hi.as_f64(),
            })
        }
    }
}

/// Optimal rotation weight: `(2s - 1)/(s(s + 1))` for `delta >= 0` and
/// `(1 - 2s)/((1 - s)(2 - s))` otherwise, with `s = eps_2/eps_3`.
pub fn qutrit_q_bar<T: Scalar>(delta: T) -> Result<T> {
    if !(delta.is_finite() && delta.abs() <= T::one()) {
        return Err(Error::InvalidQutrit(format!(
            "delta must lie in [-1, 1], got {delta}"
        )));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let s = (one + delta) / two;
    Ok(if delta >= T::zero() {
        (two * s - one) / (s * (s + one))
    } else {
        (one - two * s) / ((one - s) * (two - s))
    })
}

/// Closed-form minimum ergotropy of the qutrit.
pub fn qutrit_min_ergotropy<T: Scalar>(eps: T, delta: T, energy: T) -> Result<T> {
    let q = Qutrit::new(eps, delta)?;
    q.spec.check_energy(energy)?;
    let mean = q.mean();
    if energy <= mean {
        return Ok(T::zero());
    }
    let two_eps = T::lit(2.0) * eps;
    if !q.upper_regime() {
        return Ok(two_eps / (two_eps - mean) * (energy - mean));
    }
    let knee = T::lit(1.5) * mean;
    Ok(if energy <= knee {
        two_eps / mean * (energy - mean)
    } else {
        eps + eps / (two_eps - knee) * (energy - knee)
    })
}

/// Worst-case extraction of the population reversal, zero below the point
/// where it starts to pay off.
pub fn qutrit_worst_rev<T: Scalar>(eps: T, delta: T, energy: T) -> Result<T> {
    let q = Qutrit::new(eps, delta)?;
    q.spec.check_energy(energy)?;
    Ok(if delta <= T::zero() {
        if energy <= eps {
            T::zero()
        } else {
            T::lit(2.0) * (energy - eps)
        }
    } else if energy <= q.e2 {
        T::zero()
    } else {
        q.e3 / (q.e3 - q.e2) * (energy - q.e2)
    })
}

/// Unitary with columns `[fixed, psi, psi_perp]` placed on `(fixed, a, b)`.
fn rotation<T: Scalar>(q: T, a: usize, b: usize, fixed: usize, ph: &Phases<T>) -> CMatrix<T> {
    let (c, s) = ((T::one() - q).sqrt(), q.sqrt());
    let mut u = CMatrix::<T>::zeros(3, 3);
    u[(fixed, fixed)] = real(T::one());
    // psi = e^{i theta} (c |a> + e^{i phi} s |b>)
    let psi_col = if fixed == 0 { 1 } else { 0 };
    let perp_col = if fixed == 2 { 1 } else { 2 };
    u[(a, psi_col)] = cis(ph.theta) * real(c);
    u[(b, psi_col)] = cis(ph.theta + ph.phi) * real(s);
    // psi_perp = e^{i alpha} (s |a> - e^{i phi} c |b>)
    u[(a, perp_col)] = cis(ph.alpha) * real(s);
    u[(b, perp_col)] = -cis(ph.alpha + ph.phi) * real(c);
    u
}

/// Diagonal-optimal unitary at energy `E`: identity below `eps_mean`, the
/// rotated reversal inside the segment and the plain reversal above it.
pub fn qutrit_diag_optimal_unitary<T: Scalar>(
    eps: T,
    delta: T,
    energy: T,
    phases: &Phases<T>,
) -> Result<UnitaryChannel<T>> {
    let q = Qutrit::new(eps, delta)?;
    q.spec.check_energy(energy)?;
    if energy <= q.mean() {
        return Ok(UnitaryChannel::identity(3));
    }
    let rev = u_rev::<T>(3);
    let (_, hi) = q.segment();
    if energy > hi {
        return Ok(rev);
    }
    let q_bar = qutrit_q_bar(delta)?;
    let block = if q.upper_regime() {
        rotation(q_bar, 1, 2, 0, phases)
    } else {
        rotation(q_bar, 0, 1, 2, phases)
    };
    rev.compose(&UnitaryChannel::new(block)?)
}

/// Largest energy the coherences can cost the diagonal-optimal unitary.
pub fn qutrit_coherence_penalty<T: Scalar>(eps: T, delta: T, energy: T) -> Result<T> {
    let q = Qutrit::new(eps, delta)?;
    q.check_segment(energy)?;
    let q_bar = qutrit_q_bar(delta)?;
    let spread = (q_bar * (T::one() - q_bar)).sqrt();
    let (e2, e3) = (q.e2, q.e3);
    if q.upper_regime() {
        let knee = e2 * e3 / (T::lit(1.5) * q.mean());
        let f = if energy <= knee {
            energy / (T::lit(2.0) * (e2 * e3).sqrt())
        } else {
            ((energy - e2) * (e3 - energy)).max(T::zero()).sqrt() / (e3 - e2)
        };
        Ok(T::lit(2.0) * e2 * spread * f)
    } else {
        let s = e2 / e3;
        Ok(e3 * (T::one() - s) * spread * (e3 - energy) / (e3 * (e3 - e2)).sqrt())
    }
}

/// State at energy `E` whose coherences cost the diagonal-optimal unitary
/// (with the same `alpha`, `theta`) the full coherence penalty.
pub fn adversarial_coherent_state<T: Scalar>(
    eps: T,
    delta: T,
    energy: T,
    phases: &Phases<T>,
) -> Result<DensityMatrix<T>> {
    let q = Qutrit::new(eps, delta)?;
    q.check_segment(energy)?;
    let (e2, e3) = (q.e2, q.e3);
    let two = T::lit(2.0);
    let (pops, pair) = if q.upper_regime() {
        let knee = e2 * e3 / (T::lit(1.5) * q.mean());
        let (l2, l3) = if energy <= knee {
            (energy / (two * e2), energy / (two * e3))
        } else {
            ((e3 - energy) / (e3 - e2), (energy - e2) / (e3 - e2))
        };
        ([T::one() - l2 - l3, l2, l3], (1, 2))
    } else {
        let a = T::one() - energy / e3;
        let b = T::one() - e2 / e3;
        let l2 = a / (two * b);
        let l1 = a / two;
        ([l1, l2, (energy - l2 * e2) / e3], (0, 1))
    };
    let pops = pops.map(|p| p.max(T::zero()));
    let mut m = CMatrix::<T>::zeros(3, 3);
    for k in 0..3 {
        m[(k, k)] = real(pops[k]);
    }
    let (i, j) = pair;
    let c: Complex<T> = cis(phases.alpha - phases.theta) * real((pops[i] * pops[j]).sqrt());
    m[(i, j)] = c;
    m[(j, i)] = c.conj();
    DensityMatrix::new(m)
}

/// Equal mixture of the diagonal-optimal unitary at `alpha` and `alpha + pi`.
pub fn qutrit_random_unitary_channel<T: Scalar>(
    eps: T,
    delta: T,
    energy: T,
    phases: &Phases<T>,
) -> Result<RandomUnitaryChannel<T>> {
    let half = T::lit(0.5);
    let first = qutrit_diag_optimal_unitary(eps, delta, energy, phases)?;
    let second = qutrit_diag_optimal_unitary(eps, delta, energy, &phases.shifted_alpha())?;
    RandomUnitaryChannel::new(vec![(half, first), (half, second)])
}

/// Closed-form worst case of the diagonal-optimal unitary: zero up to
/// `eps_mean`, minimum ergotropy minus the coherence penalty inside the
/// segment, and the reversal's worst case above it.
pub fn qutrit_worst_diag_optimal<T: Scalar>(eps: T, delta: T, energy: T) -> Result<T> {
    let q = Qutrit::new(eps, delta)?;
    q.spec.check_energy(energy)?;
    let (lo, hi) = q.segment();
    if energy <= lo {
        Ok(T::zero())
    } else if energy <= hi {
        Ok(qutrit_min_ergotropy(eps, delta, energy)? - qutrit_coherence_penalty(eps, delta, energy)?)
    } else {
        qutrit_worst_rev(eps, delta, energy)
    }
}

/// Energy interval on which the rotated unitary and the penalty apply.
pub fn qutrit_penalty_segment<T: Scalar>(eps: T, delta: T) -> Result<(T, T)> {
    Ok(Qutrit::new(eps, delta)?.segment())
}
