// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

use ergokit::curve::{
    antipassive_vertex, antisymmetric_closed_form, min_anti_ergotropy_curve, min_ergotropy_curve,
    min_ergotropy_state, passive_vertex,
};
use ergokit::ergotropy::{anti_ergotropy, diagonal_ergotropy, ergotropy};
use ergokit::linalg::{cis, CMatrix};
use ergokit::oracle::{
    ergotropy_permutation_oracle, min_ergotropy_grid_oracle, min_ergotropy_region_oracle,
    worst_case_sampling_oracle,
};
use ergokit::protocols::{delta_e, u_rev, worst_case_delta_e};
use ergokit::{DensityMatrix, DiagonalState, Mode, RandomUnitaryChannel, Spectrum, UnitaryChannel};
use itertools::Itertools;
use nalgebra::Complex;
use proptest::prelude::*;

fn levels(max_dim: usize, scale: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..scale, 2..=max_dim)
}

fn spectrum(max_dim: usize, scale: f64) -> impl Strategy<Value = Spectrum> {
    levels(max_dim, scale)
        .prop_filter("non-degenerate span", |l| {
            let (lo, hi) = l
                .iter()
                .fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
            hi - lo > 1e-3
        })
        .prop_map(|l| Spectrum::new(l).unwrap())
}

fn antisymmetric(max_half: usize) -> impl Strategy<Value = Spectrum> {
    (
        prop::collection::vec(0.0..1.0f64, 1..=max_half),
        1.0..10.0f64,
        any::<bool>(),
    )
        .prop_map(|(xs, c, odd)| {
            let mut l: Vec<f64> = xs.iter().map(|x| x * c / 2.0).collect();
            l.extend(xs.iter().map(|x| c - x * c / 2.0));
            l.push(0.0);
            l.push(c);
            if odd {
                l.push(c / 2.0);
            }
            Spectrum::new(l).unwrap()
        })
}

fn energy_in(spec: &Spectrum, t: f64) -> f64 {
    spec.min() + spec.span() * (0.01 + 0.98 * t)
}

fn probs(d: usize) -> impl Strategy<Value = DiagonalState> {
    prop::collection::vec(0.001..1.0f64, d).prop_map(|w| {
        let s: f64 = w.iter().sum();
        DiagonalState::new(w.iter().map(|x| x / s).collect()).unwrap()
    })
}

fn spectrum_and_probs(max_dim: usize) -> impl Strategy<Value = (Spectrum, DiagonalState)> {
    spectrum(max_dim, 10.0).prop_flat_map(|s| {
        let d = s.dim();
        (Just(s), probs(d))
    })
}

fn sample(spec: &Spectrum, t: f64, seed: u64) -> DensityMatrix {
    DensityMatrix::sample_at_energy(spec, energy_in(spec, t), seed).unwrap()
}

fn shuffled(l: &[f64], key: u64) -> Vec<f64> {
    let mut v: Vec<(u64, f64)> = l
        .iter()
        .enumerate()
        .map(|(i, &x)| ((i as u64 + 1).wrapping_mul(key | 1).rotate_left(17), x))
        .collect();
    v.sort_by_key(|p| p.0);
    v.into_iter().map(|p| p.1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stats_ignore_level_order(l in levels(8, 10.0), key in any::<u64>()) {
        let a = Spectrum::new(l.clone()).unwrap();
        let b = Spectrum::new(shuffled(&l, key)).unwrap();
        prop_assert_eq!(a.stats(), b.stats());
    }

    #[test]
    fn antisymmetric_mean_is_midpoint(spec in antisymmetric(4)) {
        prop_assert!(spec.is_antisymmetric(spec.default_antisymmetry_tol()).is_some());
        prop_assert!((spec.mean() - (spec.min() + spec.max()) / 2.0).abs() <= 1e-12 * (1.0 + spec.max()));
    }

    #[test]
    fn dephasing_keeps_energy(spec in spectrum(6, 10.0), t in 0.0..1.0f64, seed in any::<u64>()) {
        let rho = sample(&spec, t, seed);
        let e = rho.mean_energy(&spec).unwrap();
        let d = rho.dephase().mean_energy(&spec).unwrap();
        prop_assert!((e - d).abs() <= 1e-12 * (1.0 + spec.max()));
    }

    #[test]
    fn rearrangements_are_extreme((spec, p) in spectrum_and_probs(6)) {
        let rho = p.to_density_matrix();
        let lo = rho.passive_rearrangement().unwrap().mean_energy(&spec).unwrap();
        let hi = rho.antipassive_rearrangement().unwrap().mean_energy(&spec).unwrap();
        let d = spec.dim();
        for perm in (0..d).permutations(d) {
            let e: f64 = perm.iter().zip(spec.levels()).map(|(&i, &x)| p.probs()[i] * x).sum();
            prop_assert!(lo <= e + 1e-12 && e <= hi + 1e-12);
        }
    }

    #[test]
    fn coherence_is_nonnegative(spec in spectrum(5, 10.0), t in 0.0..1.0f64, seed in any::<u64>()) {
        let rho = sample(&spec, t, seed);
        let c = rho.coherence_rel_entropy_bits().unwrap();
        prop_assert!(c >= -1e-10);
        if rho.is_diagonal(1e-12) {
            prop_assert!(c.abs() <= 1e-10);
        }
        let diag = rho.dephase().to_density_matrix();
        prop_assert!(diag.coherence_rel_entropy_bits().unwrap().abs() <= 1e-10);
    }

    #[test]
    fn amplitude_construction_is_idempotent(p in (2usize..7).prop_flat_map(probs)) {
        let psi = DensityMatrix::pure_from_amplitudes(&p);
        let again = DensityMatrix::pure_from_amplitudes(&psi.dephase());
        let gap = (psi.matrix() - again.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(gap <= 1e-12);
    }

    #[test]
    fn ergotropy_is_convex(
        spec in spectrum(5, 10.0),
        (t1, t2, w) in (0.0..1.0f64, 0.0..1.0f64, 0.0..=1.0f64),
        (s1, s2) in (any::<u64>(), any::<u64>()),
    ) {
        let a = sample(&spec, t1, s1);
        let b = sample(&spec, t2, s2);
        let m = DensityMatrix::mix(w, &a, &b).unwrap();
        for f in [ergotropy::<f64>, anti_ergotropy::<f64>] {
            let lhs = f(&m, &spec).unwrap();
            let rhs = w * f(&a, &spec).unwrap() + (1.0 - w) * f(&b, &spec).unwrap();
            prop_assert!(lhs <= rhs + 1e-9, "{} > {}", lhs, rhs);
        }
    }

    #[test]
    fn dephasing_never_adds_ergotropy(spec in spectrum(5, 10.0), t in 0.0..1.0f64, seed in any::<u64>()) {
        let rho = sample(&spec, t, seed);
        let diag = rho.dephase().to_density_matrix();
        prop_assert!(ergotropy(&diag, &spec).unwrap() <= ergotropy(&rho, &spec).unwrap() + 1e-9);
        prop_assert!(anti_ergotropy(&diag, &spec).unwrap() <= anti_ergotropy(&rho, &spec).unwrap() + 1e-9);
    }

    #[test]
    fn ergotropy_plus_passive_energy(spec in spectrum(6, 10.0), t in 0.0..1.0f64, seed in any::<u64>()) {
        let rho = sample(&spec, t, seed);
        let passive = rho.passive_rearrangement().unwrap().mean_energy(&spec).unwrap();
        let total = ergotropy(&rho, &spec).unwrap() + passive;
        prop_assert!((total - rho.mean_energy(&spec).unwrap()).abs() <= 1e-12 * (1.0 + spec.max()));
    }

    #[test]
    fn degenerate_level_swaps_keep_ergotropy(
        base in prop::collection::vec(0.0..5.0f64, 1..4),
        phase in 0.0..std::f64::consts::TAU,
        t in 0.0..1.0f64,
        seed in any::<u64>(),
    ) {
        let mut l = base.clone();
        l.push(base[0]);
        let spec = Spectrum::new(l).unwrap();
        prop_assume!(spec.span() > 1e-3);
        let d = spec.dim();
        let (i, j) = {
            let k = spec.levels().iter().position(|&x| x == base[0]).unwrap();
            (k, k + 1)
        };
        let u = CMatrix::from_fn(d, d, |r, c| match (r, c) {
            (r, c) if r == i && c == j => cis(phase),
            (r, c) if r == j && c == i => cis(-phase),
            (r, c) if r == c && r != i && r != j => Complex::new(1.0, 0.0),
            _ => Complex::new(0.0, 0.0),
        });
        let rho = sample(&spec, t, seed);
        let moved = rho.conjugate(&u);
        prop_assert!((ergotropy(&moved, &spec).unwrap() - ergotropy(&rho, &spec).unwrap()).abs() <= 1e-10);
        prop_assert!((moved.mean_energy(&spec).unwrap() - rho.mean_energy(&spec).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn curves_are_convex_and_bounded(spec in spectrum(8, 10.0), t in 0.0..1.0f64) {
        for c in [min_ergotropy_curve(&spec), min_anti_ergotropy_curve(&spec)] {
            prop_assert!(c.is_convex());
            let e = energy_in(&spec, t);
            let v = c.evaluate(e).unwrap();
            prop_assert!(v >= 0.0);
        }
        let top = min_ergotropy_curve(&spec).evaluate(spec.max()).unwrap();
        prop_assert!((top - spec.span()).abs() <= 1e-12 * (1.0 + spec.max()));
    }

    #[test]
    fn curve_matches_exact_enumeration(spec in spectrum(6, 10.0), ts in prop::collection::vec(0.0..1.0f64, 10)) {
        let curve = min_ergotropy_curve(&spec);
        for t in ts {
            let e = spec.min() + spec.span() * t;
            let exact = min_ergotropy_region_oracle(&spec, e).unwrap();
            prop_assert!((curve.evaluate(e).unwrap() - exact).abs() <= 1e-10);
        }
    }

    #[test]
    fn curve_below_every_state(spec in spectrum(5, 10.0), t in 0.0..1.0f64, seed in any::<u64>()) {
        let rho = sample(&spec, t, seed);
        let e = rho.mean_energy(&spec).unwrap().clamp(spec.min(), spec.max());
        prop_assert!(min_ergotropy_curve(&spec).evaluate(e).unwrap() <= ergotropy(&rho, &spec).unwrap() + 1e-9);
        prop_assert!(min_anti_ergotropy_curve(&spec).evaluate(e).unwrap() <= anti_ergotropy(&rho, &spec).unwrap() + 1e-9);
    }

    #[test]
    fn witness_attains_curve(spec in spectrum(8, 10.0), t in 0.0..=1.0f64) {
        let [lo, hi] = min_ergotropy_curve(&spec).domain();
        let e = lo + (hi - lo) * t;
        let w = min_ergotropy_state(&spec, e).unwrap();
        prop_assert!((w.state.mean_energy(&spec).unwrap() - e).abs() <= 1e-10 * (1.0 + spec.max()));
        let v = diagonal_ergotropy(&w.state, &spec).unwrap();
        prop_assert!((v - min_ergotropy_curve(&spec).evaluate(e).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn antisymmetric_curve_has_two_breakpoints(spec in antisymmetric(4), t in 0.0..=1.0f64) {
        let curve = min_ergotropy_curve(&spec);
        prop_assert_eq!(curve.breakpoints().len(), 2);
        let e = spec.min() + spec.span() * t;
        let closed = antisymmetric_closed_form(&spec, e, Mode::Extract).unwrap();
        prop_assert!((curve.evaluate(e).unwrap() - closed).abs() <= 1e-12 * (1.0 + spec.max()));
    }

    #[test]
    fn vertex_ergotropy_is_energy_gap(spec in spectrum(8, 10.0), k in 1usize..=8) {
        let d = spec.dim();
        let k = (k - 1) % d + 1;
        let v = antipassive_vertex(&spec, k).unwrap();
        let mirror = passive_vertex(&spec, d + 1 - k).unwrap();
        let expected = v.mean_energy(&spec).unwrap() - mirror.mean_energy(&spec).unwrap();
        prop_assert!((diagonal_ergotropy(&v, &spec).unwrap() - expected).abs() <= 1e-12 * (1.0 + spec.max()));
    }

    #[test]
    fn permutation_oracle_matches((spec, p) in spectrum_and_probs(7)) {
        let a = ergotropy_permutation_oracle(&p, &spec).unwrap();
        let b = diagonal_ergotropy(&p, &spec).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + spec.max()), "{} vs {}", a, b);
    }
}

fn random_channel(spec: &Spectrum, seeds: (u64, u64), w: f64) -> RandomUnitaryChannel {
    let rho = DensityMatrix::sample_at_energy(spec, spec.mean(), seeds.0).unwrap();
    let first =
        UnitaryChannel::new(ergokit::ergotropy::optimal_extraction_unitary(&rho, spec).unwrap()).unwrap();
    let other = DensityMatrix::sample_at_energy(spec, spec.mean(), seeds.1).unwrap();
    let second =
        UnitaryChannel::new(ergokit::ergotropy::optimal_charging_unitary(&other, spec).unwrap()).unwrap();
    RandomUnitaryChannel::new(vec![(w, first), (1.0 - w, second)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn worst_case_is_below_samples_and_curve(
        spec in spectrum(4, 5.0),
        t in 0.0..1.0f64,
        seeds in (any::<u64>(), any::<u64>()),
        w in 0.0..=1.0f64,
        seed in any::<u64>(),
    ) {
        let ch = random_channel(&spec, seeds, w);
        let e = energy_in(&spec, t);
        for (mode, sign) in [(Mode::Extract, 1.0), (Mode::Inject, -1.0)] {
            let r = worst_case_delta_e(&ch, &spec, e, mode).unwrap();
            let curve = match mode {
                Mode::Extract => min_ergotropy_curve(&spec),
                Mode::Inject => min_anti_ergotropy_curve(&spec),
            };
            prop_assert!(r.value <= curve.evaluate(e).unwrap() + 1e-8);
            prop_assert!((r.witness_state.mean_energy(&spec).unwrap() - e).abs() <= 1e-8);
            prop_assert!((sign * delta_e(&r.witness_state, &ch, &spec).unwrap() - r.value).abs() <= 1e-8);
            let sampled = worst_case_sampling_oracle(&ch, &spec, e, mode, 2000, seed).unwrap();
            prop_assert!(sampled >= r.value - 1e-8, "{} < {}", sampled, r.value);
        }
    }

    #[test]
    fn mixture_is_linear(spec in spectrum(5, 5.0), seeds in (any::<u64>(), any::<u64>()), w in 0.0..=1.0f64, t in 0.0..1.0f64, seed in any::<u64>()) {
        let ch = random_channel(&spec, seeds, w);
        let rho = sample(&spec, t, seed);
        let total = delta_e(&rho, &ch, &spec).unwrap();
        let parts: f64 = ch.entries().iter().map(|(w, u)| w * delta_e(&rho, u, &spec).unwrap()).sum();
        prop_assert!((total - parts).abs() <= 1e-12 * (1.0 + spec.max()));
    }

    #[test]
    fn reversal_is_state_independent(spec in antisymmetric(3), t in 0.0..1.0f64, seed in any::<u64>()) {
        let e = energy_in(&spec, t);
        let u: UnitaryChannel = u_rev(spec.dim());
        let values: Vec<f64> = (0..1000u64)
            .map(|i| {
                let rho = DensityMatrix::sample_at_energy(&spec, e, seed.wrapping_add(i)).unwrap();
                delta_e(&rho, &u, &spec).unwrap()
            })
            .collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
        prop_assert!(var <= 1e-16, "variance {}", var);
        prop_assert!((mean - 2.0 * (e - spec.mean())).abs() <= 1e-9);
    }

    #[test]
    fn grid_oracle_within_slack(spec in spectrum(4, 10.0), t in 0.0..1.0f64) {
        let e = spec.mean() + (spec.max() - spec.mean()) * (0.02 + 0.96 * t);
        let cells = 150;
        let grid = min_ergotropy_grid_oracle(&spec, e, cells).unwrap();
        let curve = min_ergotropy_curve(&spec).evaluate(e).unwrap();
        let slack = spec.span() * spec.dim() as f64 / cells as f64;
        prop_assert!(grid >= curve - 1e-12);
        prop_assert!(grid - curve <= slack, "{} vs {} (slack {})", grid, curve, slack);
    }

    #[test]
    fn grid_oracle_matches_curve_on_unit_spectra(spec in spectrum(4, 1.0), t in 0.0..1.0f64) {
        let e = spec.mean() + (spec.max() - spec.mean()) * (0.02 + 0.96 * t);
        let grid = min_ergotropy_grid_oracle(&spec, e, 400).unwrap();
        let curve = min_ergotropy_curve(&spec).evaluate(e).unwrap();
        prop_assert!((grid - curve).abs() <= 2e-3);
    }
}
