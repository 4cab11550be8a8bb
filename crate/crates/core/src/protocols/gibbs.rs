// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! Gibbs states at prescribed mean energy and the entropy-based lower bound
//! on what a fixed protocol extracts.

use serde::Serialize;

use crate::curve::min_curve;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::spectrum::Spectrum;
use crate::state::DiagonalState;
use crate::Mode;

const MAX_BISECTIONS: usize = 400;
const MAX_EXPANSIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsState<T: Scalar> {
    /// Inverse temperature; negative above `eps_mean`.
    pub beta: T,
    #[serde(serialize_with = "probs")]
    pub state: DiagonalState<T>,
}

fn probs<T: Scalar + Serialize, S: serde::Serializer>(
    state: &DiagonalState<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    state.probs().serialize(s)
}

/// Boltzmann weights, shifted so the largest exponent is zero.
fn weights<T: Scalar>(spec: &Spectrum<T>, beta: T) -> Vec<T> {
    let anchor = if beta >= T::zero() { spec.min() } else { spec.max() };
    let raw: Vec<T> = spec
        .levels()
        .iter()
        .map(|&e| (-beta * (e - anchor)).exp())
        .collect();
    let z = raw.iter().fold(T::zero(), |acc, &w| acc + w);
    raw.into_iter().map(|w| w / z).collect()
}

fn energy_at<T: Scalar>(spec: &Spectrum<T>, beta: T) -> T {
    weights(spec, beta)
        .iter()
        .zip(spec.levels())
        .fold(T::zero(), |acc, (&p, &e)| acc + p * e)
}

/// Solves `E(beta) = E` by bisection on the decreasing map `beta -> E(beta)`.
pub fn gibbs_state<T: Scalar>(spec: &Spectrum<T>, energy: T) -> Result<GibbsState<T>> {
    spec.check_energy(energy)?;
    if energy == spec.min() || energy == spec.max() {
        return Err(spec.out_of_range(energy));
    }
    if energy == spec.mean() {
        return Ok(GibbsState {
            beta: T::zero(),
            state: DiagonalState::uniform(spec.dim()),
        });
    }
    let two = T::lit(2.0);
    let step = T::one() / spec.span();
    let (mut lo, mut hi) = if energy < spec.mean() {
        let mut hi = step;
        for _ in 0..MAX_EXPANSIONS {
            if energy_at(spec, hi) <= energy {
                break;
            }
            hi *= two;
        }
        (T::zero(), hi)
    } else {
        let mut lo = -step;
        for _ in 0..MAX_EXPANSIONS {
            if energy_at(spec, lo) >= energy {
                break;
            }
            lo *= two;
        }
        (lo, T::zero())
    };
    for _ in 0..MAX_BISECTIONS {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if energy_at(spec, mid) > energy {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (e_lo, e_hi) = (energy_at(spec, lo), energy_at(spec, hi));
    let beta = if (e_lo - energy).abs() <= (e_hi - energy).abs() {
        lo
    } else {
        hi
    };
    Ok(GibbsState {
        beta,
        state: DiagonalState::new(weights(spec, beta))?,
    })
}

/// `curve(E) - sqrt(2 ln 2) eps_max sqrt(S(gibbs(E)))` with `S` in bits; the
/// curve is the minimum ergotropy (extract) or anti-ergotropy (inject).
/// Not clipped: the bound may be negative.
pub fn pinsker_lower_bound<T: Scalar>(spec: &Spectrum<T>, energy: T, mode: Mode) -> Result<T> {
    let gibbs = gibbs_state(spec, energy)?;
    let entropy = gibbs.state.entropy_bits().max(T::zero());
    let curve = min_curve(spec, mode).evaluate(energy)?;
    Ok(curve - (T::lit(2.0) * T::ln_2()).sqrt() * spec.max() * entropy.sqrt())
}
