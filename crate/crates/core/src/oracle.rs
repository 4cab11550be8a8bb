// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force checks that share no code path with the analytic modules.
//!
//! Every oracle here evaluates ergotropy with its own sort and never calls
//! into the curve construction, the ergotropy module or the dual scan.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curve::min_ergotropy_curve;
use crate::ergotropy::diagonal_ergotropy;
use crate::error::{Error, Result};
use crate::protocols::{delta_e, u_rev, worst_case_delta_e, Channel, UnitaryChannel};
use crate::scalar::Scalar;
use crate::spectrum::Spectrum;
use crate::state::{DensityMatrix, DiagonalState};
use crate::Mode;

pub const PERMUTATION_LIMIT: usize = 8;
pub const GRID_LIMIT: usize = 4;
pub const MIN_GRID_CELLS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    Permutation,
    Grid,
    RegionEnumeration,
    Sampling,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport<T> {
    pub oracle_value: T,
    pub analytic_value: T,
    pub abs_gap: T,
    pub method: OracleMethod,
    pub samples_or_cells: usize,
}

impl<T: Scalar> OracleReport<T> {
    pub fn new(oracle_value: T, analytic_value: T, method: OracleMethod, samples_or_cells: usize) -> Self {
        Self {
            oracle_value,
            analytic_value,
            abs_gap: (oracle_value - analytic_value).abs(),
            method,
            samples_or_cells,
        }
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// `E - p_sorted_desc . eps`, by the oracle's own sort.
fn sorted_ergotropy<T: Scalar>(p: &[T], levels: &[T]) -> T {
    let mut desc = p.to_vec();
    desc.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    dot(p, levels) - dot(&desc, levels)
}

/// `E - min over all d! rearrangements of the populations`.
pub fn ergotropy_permutation_oracle<T: Scalar>(probs: &DiagonalState<T>, spec: &Spectrum<T>) -> Result<T> {
    let d = spec.dim();
    spec.check_dim(probs.dim())?;
    if d > PERMUTATION_LIMIT {
        return Err(Error::OracleTooLarge {
            dim: d,
            limit: PERMUTATION_LIMIT,
        });
    }
    let p = probs.probs();
    let levels = spec.levels();
    let energy = dot(p, levels);
    let lowest = (0..d)
        .permutations(d)
        .map(|perm| {
            perm.iter()
                .zip(levels)
                .fold(T::zero(), |acc, (&i, &e)| acc + p[i] * e)
        })
        .fold(energy, |m, x| m.min(x));
    Ok(energy - lowest)
}

/// Minimum ergotropy over a regular grid on the probability simplex.
///
/// Grid points within half a cell's energy width of `E` are kept and then
/// mixed with the ground (or top) level so that they sit exactly at `E`;
/// the result is the ergotropy of a genuine state, hence never below the
/// true minimum.
pub fn min_ergotropy_grid_oracle<T: Scalar>(spec: &Spectrum<T>, energy: T, cells: usize) -> Result<T> {
    let d = spec.dim();
    if d > GRID_LIMIT {
        return Err(Error::OracleTooLarge {
            dim: d,
            limit: GRID_LIMIT,
        });
    }
    if cells < MIN_GRID_CELLS {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least {MIN_GRID_CELLS} cells, got {cells}"
        )));
    }
    spec.check_energy(energy)?;
    let mut grid = Grid {
        levels: spec.levels(),
        inv: T::one() / T::count(cells),
        energy,
        half_width: spec.span() / (T::lit(2.0) * T::count(cells)),
        counts: vec![0; d],
        best: None,
    };
    grid.descend(0, cells, T::zero());
    grid.best.ok_or(Error::EmptySlice {
        energy: energy.as_f64(),
    })
}

struct Grid<'a, T> {
    levels: &'a [T],
    inv: T,
    energy: T,
    half_width: T,
    counts: Vec<usize>,
    best: Option<T>,
}

impl<T: Scalar> Grid<'_, T> {
    /// Assigns counts to level `k..` with `left` cells remaining and `partial`
    /// the energy (in cell units) of the levels already fixed.
    fn descend(&mut self, k: usize, left: usize, partial: T) {
        let d = self.levels.len();
        let target_lo = (self.energy - self.half_width) / self.inv;
        let target_hi = (self.energy + self.half_width) / self.inv;
        let rest = T::count(left);
        if partial + rest * self.levels[k] > target_hi || partial + rest * self.levels[d - 1] < target_lo {
            return;
        }
        if k == d - 1 {
            self.counts[k] = left;
            self.visit();
            return;
        }
        for n in 0..=left {
            self.counts[k] = n;
            self.descend(k + 1, left - n, partial + T::count(n) * self.levels[k]);
        }
    }

    fn visit(&mut self) {
        let d = self.levels.len();
        let mut p: Vec<T> = self.counts.iter().map(|&n| T::count(n) * self.inv).collect();
        let e = dot(&p, self.levels);
        if (e - self.energy).abs() > self.half_width {
            return;
        }
        let (lo, hi) = (self.levels[0], self.levels[d - 1]);
        if e > self.energy && e > lo {
            let t = (self.energy - lo) / (e - lo);
            p.iter_mut().for_each(|x| *x *= t);
            p[0] += T::one() - t;
        } else if e < self.energy && e < hi {
            let t = (hi - self.energy) / (hi - e);
            p.iter_mut().for_each(|x| *x *= t);
            p[d - 1] += T::one() - t;
        }
        let value = sorted_ergotropy(&p, self.levels).max(T::zero());
        self.best = Some(self.best.map_or(value, |b| b.min(value)));
    }
}

/// Exact minimum over diagonal states at `E`.
///
/// On the region where the populations follow a fixed order `pi`, ergotropy
/// is linear; the region is the simplex spanned by `u_j` (uniform over the
/// first `j` levels of `pi`), and its slice at energy `E` has its vertices on
/// edges `u_a - u_b`. Enumerating every order and edge gives the minimum.
pub fn min_ergotropy_region_oracle<T: Scalar>(spec: &Spectrum<T>, energy: T) -> Result<T> {
    let d = spec.dim();
    if d > PERMUTATION_LIMIT {
        return Err(Error::OracleTooLarge {
            dim: d,
            limit: PERMUTATION_LIMIT,
        });
    }
    spec.check_energy(energy)?;
    let levels = spec.levels();
    let mut best: Option<T> = None;
    for perm in (0..d).permutations(d) {
        let mut verts: Vec<(Vec<T>, T)> = Vec::with_capacity(d);
        for j in 1..=d {
            let w = T::one() / T::count(j);
            let mut u = vec![T::zero(); d];
            perm[..j].iter().for_each(|&i| u[i] = w);
            let e = dot(&u, levels);
            verts.push((u, e));
        }
        for a in 0..d {
            for b in a..d {
                let (ua, ea) = &verts[a];
                let (ub, eb) = &verts[b];
                let (ea, eb) = (*ea, *eb);
                let p: Vec<T> = if ea == eb {
                    if ea != energy {
                        continue;
                    }
                    ua.clone()
                } else {
                    let t = (energy - eb) / (ea - eb);
                    if t < T::zero() || t > T::one() {
                        continue;
                    }
                    ua.iter()
                        .zip(ub)
                        .map(|(&x, &y)| t * x + (T::one() - t) * y)
                        .collect()
                };
                let value = sorted_ergotropy(&p, levels).max(T::zero());
                best = Some(best.map_or(value, |m| m.min(value)));
            }
        }
    }
    best.ok_or(Error::EmptySlice {
        energy: energy.as_f64(),
    })
}

fn sample_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Minimum of `+-Delta E` over `n` sampled states at `E`; an upper bound on
/// the true worst case.
pub fn worst_case_sampling_oracle<T: Scalar, C: Channel<T> + ?Sized>(
    channel: &C,
    spec: &Spectrum<T>,
    energy: T,
    mode: Mode,
    n: usize,
    seed: u64,
) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let sign = match mode {
        Mode::Extract => T::one(),
        Mode::Inject => -T::one(),
    };
    let mut best: Option<T> = None;
    for i in 0..n {
        let rho = DensityMatrix::sample_at_energy(spec, energy, sample_seed(seed, i))?;
        let v = sign * delta_e(&rho, channel, spec)?;
        best = Some(best.map_or(v, |b| b.min(v)));
    }
    Ok(best.expect("n >= 1"))
}

pub fn permutation_report<T: Scalar>(
    probs: &DiagonalState<T>,
    spec: &Spectrum<T>,
) -> Result<OracleReport<T>> {
    let oracle = ergotropy_permutation_oracle(probs, spec)?;
    let analytic = diagonal_ergotropy(probs, spec)?;
    let n = (1..=spec.dim()).product();
    Ok(OracleReport::new(oracle, analytic, OracleMethod::Permutation, n))
}

pub fn grid_report<T: Scalar>(spec: &Spectrum<T>, energy: T, cells: usize) -> Result<OracleReport<T>> {
    let oracle = min_ergotropy_grid_oracle(spec, energy, cells)?;
    let analytic = min_ergotropy_curve(spec).evaluate(energy)?;
    Ok(OracleReport::new(oracle, analytic, OracleMethod::Grid, cells))
}

pub fn region_report<T: Scalar>(spec: &Spectrum<T>, energy: T) -> Result<OracleReport<T>> {
    let oracle = min_ergotropy_region_oracle(spec, energy)?;
    let analytic = min_ergotropy_curve(spec).evaluate(energy)?;
    let n: usize = (1..=spec.dim()).product();
    Ok(OracleReport::new(
        oracle,
        analytic,
        OracleMethod::RegionEnumeration,
        n,
    ))
}

/// Compares sampling with the dual scan; `abs_gap` is how far the samples
/// stay above the exact worst case.
pub fn sampling_report<T: Scalar, C: Channel<T> + ?Sized>(
    channel: &C,
    spec: &Spectrum<T>,
    energy: T,
    mode: Mode,
    n: usize,
    seed: u64,
) -> Result<OracleReport<T>> {
    let oracle = worst_case_sampling_oracle(channel, spec, energy, mode, n, seed)?;
    let analytic = worst_case_delta_e(channel, spec, energy, mode)?.value;
    Ok(OracleReport::new(oracle, analytic, OracleMethod::Sampling, n))
}

/// A report together with the tolerance it was judged against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckedReport {
    pub check: String,
    #[serde(flatten)]
    pub report: OracleReport<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckedReport {
    fn two_sided(check: impl Into<String>, report: OracleReport<f64>, tolerance: f64) -> Self {
        let passed = report.abs_gap <= tolerance;
        Self {
            check: check.into(),
            report,
            tolerance,
            passed,
        }
    }

    /// Passes when the oracle does not undercut the analytic value.
    fn one_sided(check: impl Into<String>, report: OracleReport<f64>, tolerance: f64) -> Self {
        let passed = report.oracle_value >= report.analytic_value - tolerance;
        Self {
            check: check.into(),
            report,
            tolerance,
            passed,
        }
    }
}

pub const GRID_CELLS: usize = 400;
pub const GRID_TOL: f64 = 2e-3;
pub const EXACT_TOL: f64 = 1e-10;
pub const PERMUTATION_TOL: f64 = 1e-12;
pub const SAMPLING_TOL: f64 = 1e-8;

/// Random sorted spectrum with `d` levels uniform in `[0, scale)`.
pub fn random_spectrum<R: Rng>(rng: &mut R, d: usize, scale: f64) -> Spectrum<f64> {
    Spectrum::new((0..d).map(|_| scale * rng.random::<f64>()).collect()).expect("finite levels")
}

/// Random population vector (uniform on the simplex).
pub fn random_probs<R: Rng>(rng: &mut R, d: usize) -> DiagonalState<f64> {
    let w: Vec<f64> = (0..d).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    DiagonalState::new(w.iter().map(|x| x / total).collect()).expect("valid probabilities")
}

/// Interior energy in `(eps_mean, eps_max)`, where the curve is non-trivial.
pub fn random_interior_energy<R: Rng>(rng: &mut R, spec: &Spectrum<f64>) -> f64 {
    let t = 0.02 + 0.96 * rng.random::<f64>();
    spec.mean() + t * (spec.max() - spec.mean())
}

/// Full oracle suite over `spectra` random spectra with `d` in `2..=6`.
///
/// For `d <= 4` the grid oracle runs at 400 cells per dimension; every
/// spectrum also gets the exact region enumeration, a permutation check on
/// random populations and a sampling check of the reversal's worst case.
pub fn verify_suite(seed: u64, spectra: usize) -> Result<Vec<CheckedReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for s in 0..spectra {
        let d = rng.random_range(2..=6usize);
        let spec = random_spectrum(&mut rng, d, 1.0);
        if spec.span() < 1e-3 {
            continue;
        }
        let e = random_interior_energy(&mut rng, &spec);
        if d <= GRID_LIMIT {
            let r = grid_report(&spec, e, GRID_CELLS)?;
            out.push(CheckedReport::two_sided(format!("grid[{s}] d={d}"), r, GRID_TOL));
        }
        let r = region_report(&spec, e)?;
        out.push(CheckedReport::two_sided(
            format!("region[{s}] d={d}"),
            r,
            EXACT_TOL,
        ));
        let p = random_probs(&mut rng, d);
        let r = permutation_report(&p, &spec)?;
        out.push(CheckedReport::two_sided(
            format!("permutation[{s}] d={d}"),
            r,
            PERMUTATION_TOL,
        ));
        let u: UnitaryChannel<f64> = u_rev(d);
        let r = sampling_report(&u, &spec, e, Mode::Extract, 50, rng.random())?;
        out.push(CheckedReport::one_sided(
            format!("sampling[{s}] d={d}"),
            r,
            SAMPLING_TOL,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(levels: &[f64]) -> Spectrum<f64> {
        Spectrum::new(levels.to_vec()).unwrap()
    }

    #[test]
    fn permutation_examples() {
        let s = spec(&[0.0, 0.6, 2.0]);
        let p = DiagonalState::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert!((ergotropy_permutation_oracle(&p, &s).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(
            ergotropy_permutation_oracle(&DiagonalState::uniform(3), &s).unwrap(),
            0.0
        );
        let shuffled = DiagonalState::new(vec![0.5, 0.2, 0.3]).unwrap();
        let a = ergotropy_permutation_oracle(&shuffled, &s).unwrap();
        let b = ergotropy_permutation_oracle(&DiagonalState::new(vec![0.3, 0.5, 0.2]).unwrap(), &s).unwrap();
        let e_a = 0.2 * 0.6 + 0.3 * 2.0;
        let e_b = 0.5 * 0.6 + 0.2 * 2.0;
        assert!(((e_a - a) - (e_b - b)).abs() < 1e-15);
        let big = Spectrum::new((0..9).map(f64::from).collect()).unwrap();
        assert!(matches!(
            ergotropy_permutation_oracle(&DiagonalState::uniform(9), &big),
            Err(Error::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn grid_examples() {
        let s = spec(&[0.0, 0.6, 2.0]);
        let g = min_ergotropy_grid_oracle(&s, 1.3, 400).unwrap();
        assert!((g - 0.764706).abs() < 2e-3, "{g}");
        assert!(g >= 0.7647058823529 - 1e-12);
        assert!(min_ergotropy_grid_oracle(&s, s.mean(), 300).unwrap() < 1e-12);
        let qubit = spec(&[0.0, 1.0]);
        for e in [0.1, 0.5, 0.8] {
            let g = min_ergotropy_grid_oracle(&qubit, e, 100).unwrap();
            assert!((g - (2.0 * (e - 0.5)).max(0.0)).abs() < 1.0 / 100.0, "E={e}: {g}");
        }
        assert!(min_ergotropy_grid_oracle(&s, 1.3, 10).is_err());
        assert!(min_ergotropy_grid_oracle(&spec(&[0.0, 1.0, 2.0, 3.0, 4.0]), 2.0, 60).is_err());
    }

    #[test]
    fn region_oracle_matches_examples() {
        let s = spec(&[0.0, 0.6, 2.0]);
        let v = min_ergotropy_region_oracle(&s, 1.3).unwrap();
        assert!((v - 0.39 / 0.51).abs() < 1e-12, "{v}");
        let skew = spec(&[0.0, 1.5, 2.0]);
        assert!((min_ergotropy_region_oracle(&skew, 1.75).unwrap() - 1.0).abs() < 1e-12);
        let anti = spec(&[0.0, 0.6, 2.0, 3.4, 4.0]);
        assert!((min_ergotropy_region_oracle(&anti, 3.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_oracle_examples() {
        let anti = spec(&[0.0, 0.6, 2.0, 3.4, 4.0]);
        let id = UnitaryChannel::identity(5);
        assert_eq!(
            worst_case_sampling_oracle(&id, &anti, 2.5, Mode::Extract, 20, 1).unwrap(),
            0.0
        );
        let u: UnitaryChannel<f64> = u_rev(5);
        let v = worst_case_sampling_oracle(&u, &anti, 2.5, Mode::Extract, 50, 1).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_tracks_curve_on_wide_spectra() {
        // levels in [0, 10]: the slack grows with the span
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..40 {
            let d = rng.random_range(2..=4usize);
            let s = random_spectrum(&mut rng, d, 10.0);
            if s.span() < 1e-3 {
                continue;
            }
            let e = random_interior_energy(&mut rng, &s);
            let cells = 120;
            let r = grid_report(&s, e, cells).unwrap();
            let slack = s.span() * d as f64 / cells as f64;
            assert!(r.oracle_value >= r.analytic_value - 1e-12, "{r:?}");
            assert!(r.abs_gap <= slack, "{:?} {r:?}", s.levels());
        }
    }

    #[test]
    fn region_oracle_is_exact_on_random_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let d = rng.random_range(2..=6usize);
            let s = random_spectrum(&mut rng, d, 10.0);
            let e = s.min() + rng.random::<f64>() * s.span();
            let r = region_report(&s, e).unwrap();
            assert!(r.abs_gap <= 1e-10, "{:?} E={e}: {r:?}", s.levels());
        }
    }

    #[test]
    fn suite_passes_and_is_deterministic() {
        let a = verify_suite(7, 12).unwrap();
        assert!(a.iter().all(|c| c.passed), "{a:#?}");
        assert_eq!(a, verify_suite(7, 12).unwrap());
    }
}
