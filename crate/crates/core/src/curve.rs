// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! Minimum ergotropy and anti-ergotropy as functions of mean energy.
//!
//! The minimum over all states at energy `E` is attained on the boundary of
//! the anti-passive (passive) simplex, so the curve is the lower convex
//! envelope of the `d` simplex vertices in the `(E, value)` plane. The
//! envelope is built by gift-wrapping from the maximally mixed vertex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectrum::Spectrum;
use crate::state::DiagonalState;
use crate::Mode;

/// Convex piecewise-linear function of mean energy.
///
/// Outside the breakpoint domain but inside `range` the function is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "CurveRepr<T>",
    bound(deserialize = "T: Scalar + Deserialize<'de>")
)]
pub struct EnergyCurve<T: Scalar> {
    breakpoints: Vec<[T; 2]>,
    range: [T; 2],
}

#[derive(Deserialize)]
struct CurveRepr<T> {
    breakpoints: Vec<[T; 2]>,
    range: Option<[T; 2]>,
}

impl<T: Scalar> TryFrom<CurveRepr<T>> for EnergyCurve<T> {
    type Error = Error;

    fn try_from(r: CurveRepr<T>) -> Result<Self> {
        EnergyCurve::from_breakpoints(r.breakpoints, r.range)
    }
}

/// Two-vertex decomposition of a minimum-achieving state.
///
/// Vertex indices are 1-based; `state = p * vertex_low + (1 - p) * vertex_high`
/// with `p = mix_probability`. At a breakpoint both indices coincide.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimumStateWitness<T: Scalar> {
    pub vertex_low: usize,
    pub vertex_high: usize,
    pub mix_probability: T,
    #[serde(serialize_with = "serialize_probs")]
    pub state: DiagonalState<T>,
}

fn serialize_probs<T: Scalar + Serialize, S: serde::Serializer>(
    state: &DiagonalState<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    state.probs().serialize(s)
}

/// Envelope breakpoint with the vertex index it came from.
#[derive(Debug, Clone, Copy)]
struct Node<T> {
    vertex: usize,
    energy: T,
    value: T,
}

impl<T: Scalar> EnergyCurve<T> {
    /// Validates strictly increasing energies, non-negative values and
    /// non-decreasing slopes. `range` defaults to the breakpoint domain.
    pub fn from_breakpoints(breakpoints: Vec<[T; 2]>, range: Option<[T; 2]>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidArgument(
                "curve needs at least one breakpoint".into(),
            ));
        }
        if breakpoints.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite breakpoint".into()));
        }
        if breakpoints.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(Error::InvalidArgument("breakpoint energies must increase".into()));
        }
        if breakpoints.iter().any(|b| b[1] < T::zero()) {
            return Err(Error::InvalidArgument("curve values must be non-negative".into()));
        }
        let first = breakpoints[0][0];
        let last = breakpoints[breakpoints.len() - 1][0];
        let range = range.unwrap_or([first, last]);
        if !(range[0] <= first && last <= range[1]) {
            return Err(Error::InvalidArgument(
                "range must contain every breakpoint".into(),
            ));
        }
        let curve = Self { breakpoints, range };
        if !curve.is_convex() {
            return Err(Error::InvalidArgument(
                "segment slopes must be non-decreasing".into(),
            ));
        }
        Ok(curve)
    }

    pub fn breakpoints(&self) -> &[[T; 2]] {
        &self.breakpoints
    }

    /// Energy interval `[eps_min, eps_max]` of the originating spectrum.
    pub fn range(&self) -> [T; 2] {
        self.range
    }

    /// Breakpoint domain, where the curve may be non-zero.
    pub fn domain(&self) -> [T; 2] {
        [
            self.breakpoints[0][0],
            self.breakpoints[self.breakpoints.len() - 1][0],
        ]
    }

    pub fn slopes(&self) -> Vec<T> {
        self.breakpoints
            .windows(2)
            .map(|w| (w[1][1] - w[0][1]) / (w[1][0] - w[0][0]))
            .collect()
    }

    /// Slopes are non-decreasing, compared exactly.
    pub fn is_convex(&self) -> bool {
        self.slopes().windows(2).all(|w| w[0] <= w[1])
    }

    pub fn evaluate(&self, energy: T) -> Result<T> {
        if !(energy.is_finite() && self.range[0] <= energy && energy <= self.range[1]) {
            return Err(Error::EnergyOutOfRange {
                energy: energy.as_f64(),
                min: self.range[0].as_f64(),
                max: self.range[1].as_f64(),
            });
        }
        let [lo, hi] = self.domain();
        if energy < lo || energy > hi {
            return Ok(T::zero());
        }
        let idx = self.breakpoints.partition_point(|b| b[0] <= energy);
        let [e0, v0] = self.breakpoints[idx - 1];
        if e0 == energy || idx == self.breakpoints.len() {
            return Ok(v0);
        }
        let [e1, v1] = self.breakpoints[idx];
        let p = (e1 - energy) / (e1 - e0);
        Ok(p * v0 + (T::one() - p) * v1)
    }
}

/// Uniform state over levels `k..=d` (1-based).
pub fn antipassive_vertex<T: Scalar>(spec: &Spectrum<T>, k: usize) -> Result<DiagonalState<T>> {
    let d = spec.dim();
    if k == 0 || k > d {
        return Err(Error::IndexOutOfRange { index: k, dim: d });
    }
    let w = T::one() / T::count(d + 1 - k);
    DiagonalState::new((0..d).map(|i| if i + 1 >= k { w } else { T::zero() }).collect())
}

/// Uniform state over levels `1..=k` (1-based).
pub fn passive_vertex<T: Scalar>(spec: &Spectrum<T>, k: usize) -> Result<DiagonalState<T>> {
    let d = spec.dim();
    if k == 0 || k > d {
        return Err(Error::IndexOutOfRange { index: k, dim: d });
    }
    let w = T::one() / T::count(k);
    DiagonalState::new((0..d).map(|i| if i < k { w } else { T::zero() }).collect())
}

/// `(E, ergotropy)` of each anti-passive vertex, in vertex order.
pub fn antipassive_vertex_points<T: Scalar>(spec: &Spectrum<T>) -> Vec<(T, T)> {
    let levels = spec.levels();
    let d = levels.len();
    // separate sums from each end keep the extreme vertices exact
    let mut prefix = vec![T::zero(); d + 1];
    let mut suffix = vec![T::zero(); d + 1];
    for i in 0..d {
        prefix[i + 1] = prefix[i] + levels[i];
        suffix[d - 1 - i] = suffix[d - i] + levels[d - 1 - i];
    }
    (1..=d)
        .map(|k| {
            let n = T::count(d + 1 - k);
            let energy = if k == 1 { spec.mean() } else { suffix[k - 1] / n };
            let passive = prefix[d + 1 - k] / n;
            (energy, energy - passive)
        })
        .collect()
}

fn envelope<T: Scalar>(spec: &Spectrum<T>) -> Vec<Node<T>> {
    let raw = antipassive_vertex_points(spec);
    let scale = spec.min().abs().max(spec.max().abs()).max(spec.span());
    let same_energy = T::lit(16.0) * T::default_epsilon() * scale;

    // collapse equal-energy vertices, keeping the smaller value
    let mut pts: Vec<Node<T>> = Vec::with_capacity(raw.len());
    for (i, &(energy, value)) in raw.iter().enumerate() {
        let node = Node {
            vertex: i + 1,
            energy,
            value: value.max(T::zero()),
        };
        match pts.last_mut() {
            Some(prev) if (node.energy - prev.energy).abs() <= same_energy => {
                if node.value < prev.value {
                    *prev = Node {
                        energy: prev.energy,
                        ..node
                    };
                }
            }
            _ => pts.push(node),
        }
    }

    let tie = T::lit(64.0) * T::default_epsilon();
    let mut hull = vec![pts[0]];
    let mut cur = 0;
    while cur + 1 < pts.len() {
        let c = pts[cur];
        let mut best = cur + 1;
        let mut m = (pts[best].value - c.value) / (pts[best].energy - c.energy);
        for (j, p) in pts.iter().enumerate().skip(cur + 2) {
            let test = (p.value - c.value) / (p.energy - c.energy);
            if test <= m + tie * m.abs().max(T::one()) {
                m = m.min(test);
                best = j;
            }
        }
        hull.push(pts[best]);
        cur = best;
    }

    // drop breakpoints that do not strictly raise the slope
    loop {
        let slope = |a: &Node<T>, b: &Node<T>| (b.value - a.value) / (b.energy - a.energy);
        let bad = (1..hull.len().saturating_sub(1))
            .find(|&i| slope(&hull[i - 1], &hull[i]) >= slope(&hull[i], &hull[i + 1]));
        match bad {
            Some(i) => {
                hull.remove(i);
            }
            None => break,
        }
    }
    hull
}

/// Inject-mode envelope in the original energy axis, indexed by passive vertex.
fn anti_envelope<T: Scalar>(spec: &Spectrum<T>) -> Vec<Node<T>> {
    let d = spec.dim();
    envelope(&spec.negated())
        .into_iter()
        .rev()
        .map(|n| Node {
            vertex: d + 1 - n.vertex,
            energy: -n.energy,
            value: n.value,
        })
        .collect()
}

fn nodes<T: Scalar>(spec: &Spectrum<T>, mode: Mode) -> Vec<Node<T>> {
    match mode {
        Mode::Extract => envelope(spec),
        Mode::Inject => anti_envelope(spec),
    }
}

fn to_curve<T: Scalar>(spec: &Spectrum<T>, nodes: &[Node<T>]) -> EnergyCurve<T> {
    EnergyCurve {
        breakpoints: nodes.iter().map(|n| [n.energy, n.value]).collect(),
        range: [spec.min(), spec.max()],
    }
}

pub fn min_ergotropy_curve<T: Scalar>(spec: &Spectrum<T>) -> EnergyCurve<T> {
    to_curve(spec, &envelope(spec))
}

pub fn min_anti_ergotropy_curve<T: Scalar>(spec: &Spectrum<T>) -> EnergyCurve<T> {
    to_curve(spec, &anti_envelope(spec))
}

pub fn min_curve<T: Scalar>(spec: &Spectrum<T>, mode: Mode) -> EnergyCurve<T> {
    to_curve(spec, &nodes(spec, mode))
}

pub fn min_ergotropy_state<T: Scalar>(spec: &Spectrum<T>, energy: T) -> Result<MinimumStateWitness<T>> {
    witness(spec, energy, Mode::Extract)
}

pub fn min_anti_ergotropy_state<T: Scalar>(spec: &Spectrum<T>, energy: T) -> Result<MinimumStateWitness<T>> {
    witness(spec, energy, Mode::Inject)
}

/// Two-vertex state attaining the minimum at `energy` in the given mode.
pub fn witness<T: Scalar>(spec: &Spectrum<T>, energy: T, mode: Mode) -> Result<MinimumStateWitness<T>> {
    let hull = nodes(spec, mode);
    let lo = hull[0].energy;
    let hi = hull[hull.len() - 1].energy;
    if !(energy.is_finite() && lo <= energy && energy <= hi) {
        return Err(Error::EnergyOutOfRange {
            energy: energy.as_f64(),
            min: lo.as_f64(),
            max: hi.as_f64(),
        });
    }
    let vertex = |k: usize| match mode {
        Mode::Extract => antipassive_vertex(spec, k),
        Mode::Inject => passive_vertex(spec, k),
    };
    let idx = hull.partition_point(|n| n.energy <= energy);
    let a = hull[idx - 1];
    if a.energy == energy || idx == hull.len() {
        return Ok(MinimumStateWitness {
            vertex_low: a.vertex,
            vertex_high: a.vertex,
            mix_probability: T::one(),
            state: vertex(a.vertex)?,
        });
    }
    let b = hull[idx];
    let p = (b.energy - energy) / (b.energy - a.energy);
    let state = DiagonalState::mix(p, &vertex(a.vertex)?, &vertex(b.vertex)?)?;
    Ok(MinimumStateWitness {
        vertex_low: a.vertex,
        vertex_high: b.vertex,
        mix_probability: p,
        state,
    })
}

pub fn max_ergotropy<T: Scalar>(spec: &Spectrum<T>, energy: T) -> Result<T> {
    spec.check_energy(energy)?;
    Ok(energy - spec.min())
}

pub fn max_anti_ergotropy<T: Scalar>(spec: &Spectrum<T>, energy: T) -> Result<T> {
    spec.check_energy(energy)?;
    Ok(spec.max() - energy)
}

/// Largest coherent ergotropy and coherent anti-ergotropy at `energy`.
pub fn coherent_max<T: Scalar>(spec: &Spectrum<T>, energy: T) -> Result<(T, T)> {
    let erg = max_ergotropy(spec, energy)? - min_ergotropy_curve(spec).evaluate(energy)?;
    let anti = max_anti_ergotropy(spec, energy)? - min_anti_ergotropy_curve(spec).evaluate(energy)?;
    Ok((erg.max(T::zero()), anti.max(T::zero())))
}

/// `max(0, 2(E - eps_mean))` for extraction, `max(0, 2(eps_mean - E))` for
/// injection; only valid for antisymmetric spectra.
pub fn antisymmetric_closed_form<T: Scalar>(spec: &Spectrum<T>, energy: T, mode: Mode) -> Result<T> {
    let c = spec
        .is_antisymmetric(spec.default_antisymmetry_tol())
        .ok_or(Error::NotAntisymmetric)?;
    spec.check_energy(energy)?;
    let mean = c / T::lit(2.0);
    let two = T::lit(2.0);
    Ok(match mode {
        Mode::Extract => (two * (energy - mean)).max(T::zero()),
        Mode::Inject => (two * (mean - energy)).max(T::zero()),
    })
}
