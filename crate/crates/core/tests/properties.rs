use std::collections::BTreeMap;
use std::sync::Arc;

use faer::Mat;
use num_complex::Complex64;
use proptest::prelude::*;

use subspec::floquet::{floquet_spectrum, nu_exact_periodic};
use subspec::lowernorm::{nu_n, smallest_singular_value, LowerNormOptions, LowerNormSkeleton};
use subspec::operators::{boundary_block, column_blocks, BandOperatorSpec, DiagonalSpec};
use subspec::spectra::{hausdorff, resolvent_field, FieldOptions, GridSpec, Provenance, SpectralSet};
use subspec::words::{
    check_full_alphabet, de_bruijn, gap_profile, substitution_prefix, subword_set, Alphabet, Gap, PotentialSource,
    RotationParams, ScanRange, SubstitutionRules, Word,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b))
}

fn alphabet(k: usize) -> impl Strategy<Value = Alphabet> {
    proptest::collection::vec(complex(), k).prop_map(|v| Alphabet::new(v).unwrap())
}

fn letters(k: u8, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(0..k, len)
}

/// Periodic operator: random constants on `-w..=w` plus a potential on the main diagonal.
fn periodic_spec(w: i64) -> impl Strategy<Value = BandOperatorSpec> {
    (alphabet(3), letters(3, 1..=6), proptest::collection::vec(complex(), 2 * w as usize)).prop_map(
        move |(a, word, l)| {
            let source = Arc::new(PotentialSource::periodic(a, Word::new(word)).unwrap());
            let offsets = (-w..=w).filter(|&k| k != 0);
            let mut diagonals: Vec<DiagonalSpec> = offsets.zip(l).map(|(k, v)| DiagonalSpec::constant(k, v)).collect();
            diagonals.push(DiagonalSpec::potential(0, source));
            BandOperatorSpec::multi_diagonal(diagonals).unwrap()
        },
    )
}

/// Operators `H(b)` and `H(c)` with `b = x^∞`, `c = (x^K y)^∞`, so `W_n(b) ⊆ W_n(c)` for `n ≤ limit`.
fn nested_pair(limit: usize) -> impl Strategy<Value = (BandOperatorSpec, BandOperatorSpec)> {
    (alphabet(3), letters(3, 1..=4), letters(3, 1..=5), complex(), complex()).prop_map(move |(a, x, y, l1, l2)| {
        let reps = (limit + x.len()).div_ceil(x.len()) + 1;
        let mut cw: Vec<u8> = x.iter().copied().cycle().take(reps * x.len()).collect();
        cw.extend(&y);
        let l = BTreeMap::from([(-1, l1), (1, l2)]);
        let b = PotentialSource::periodic(a.clone(), Word::new(x)).unwrap();
        let cs = PotentialSource::periodic(a, Word::new(cw)).unwrap();
        (BandOperatorSpec::schrodinger(&l, 0, Arc::new(b)), BandOperatorSpec::schrodinger(&l, 0, Arc::new(cs)))
    })
}

/// Real potential, γ = 0, symmetric real `L`: a self-adjoint operator.
fn self_adjoint_spec() -> impl Strategy<Value = BandOperatorSpec> {
    (proptest::collection::vec(-3.0..3.0f64, 3), letters(3, 1..=6), -2.0..2.0f64, -1.0..1.0f64).prop_map(
        |(vals, word, t1, t2)| {
            let source = PotentialSource::periodic(Alphabet::real(&vals).unwrap(), Word::new(word)).unwrap();
            let l = BTreeMap::from([(-2, c(t2, 0.0)), (-1, c(t1, 0.0)), (1, c(t1, 0.0)), (2, c(t2, 0.0))]);
            BandOperatorSpec::schrodinger(&l, 0, Arc::new(source))
        },
    )
}

fn same_matrix(a: &Mat<Complex64>, b: &Mat<Complex64>) -> bool {
    a.nrows() == b.nrows()
        && a.ncols() == b.ncols()
        && (0..a.nrows()).all(|i| (0..a.ncols()).all(|j| a[(i, j)] == b[(i, j)]))
}

// Word invariants.

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subword_count_is_bounded(word in letters(3, 1..=20), n in 1usize..8) {
        let p = word.len();
        let source = PotentialSource::periodic(Alphabet::indices(3).unwrap(), Word::new(word)).unwrap();
        let s = subword_set(&source, n, None).unwrap();
        prop_assert!(s.len() <= 3usize.pow(n as u32).min(p));
    }

    #[test]
    fn periodic_gaps_are_at_most_the_period(word in letters(2, 1..=16), n in 1usize..6) {
        let p = word.len() as u64;
        let source = PotentialSource::periodic(Alphabet::indices(2).unwrap(), Word::new(word)).unwrap();
        let g = gap_profile(&source, n, None).unwrap();
        for gap in g.per_word.values() {
            prop_assert!(matches!(gap, Gap::Finite(x) if *x <= p));
        }
    }

    #[test]
    fn rational_rotation_is_periodic(p in 1i128..12, q in 2i128..20, start in -500i64..500) {
        prop_assume!(p < q);
        let params = RotationParams::new(
            subspec::words::QuadSurd::rational(p, q).unwrap(),
            subspec::words::QuadSurd::rational(q - p, q).unwrap(),
            subspec::words::QuadSurd::integer(1),
        ).unwrap();
        let period = params.period().unwrap() as i64;
        for n in start..start + 100 {
            prop_assert_eq!(params.letter(n), params.letter(n + period));
        }
    }
}

#[test]
fn de_bruijn_words_are_complete() {
    for k in 2..=4usize {
        for n in 1..=12usize {
            let Some(len) = k.checked_pow(n as u32).filter(|&l| l <= 4096) else { continue };
            let w = de_bruijn(k, n).unwrap();
            assert_eq!(w.len(), len);
            let source = PotentialSource::periodic(Alphabet::indices(k).unwrap(), w).unwrap();
            assert_eq!(subword_set(&source, n, None).unwrap().len(), len);
        }
    }
}

#[test]
fn de_bruijn_surrogates_carry_every_shorter_word() {
    for k in [2usize, 3] {
        for m in 1..=8usize {
            let source = PotentialSource::periodic(Alphabet::indices(k).unwrap(), de_bruijn(k, m).unwrap()).unwrap();
            for n in 1..=m {
                assert!(check_full_alphabet(&source, n, None).unwrap().equal, "k={k} m={m} n={n}");
            }
        }
    }
}

#[test]
fn substitution_prefixes_are_nested() {
    for rules in [SubstitutionRules::fibonacci(), SubstitutionRules::thue_morse(), SubstitutionRules::period_doubling()]
    {
        for s in 0..12 {
            let a = substitution_prefix(&rules, s).unwrap();
            let b = substitution_prefix(&rules, s + 1).unwrap();
            assert!(b.letters().starts_with(a.letters()));
        }
    }
}

// Operator and block invariants.

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn blocks_match_subwords(word in letters(3, 1..=10), a in alphabet(3), n in 1usize..=8) {
        let source = Arc::new(PotentialSource::periodic(a, Word::new(word)).unwrap());
        let spec = BandOperatorSpec::schrodinger(&BTreeMap::from([(-1, c(1.0, 0.0)), (1, c(1.0, 0.0))]), 0, Arc::clone(&source));
        prop_assert_eq!(column_blocks(&spec, n, None).unwrap().len(), subword_set(&source, n, None).unwrap().len());
    }

    #[test]
    fn adjoint_is_an_involution(spec in periodic_spec(2), n in 1usize..=6) {
        let back = spec.adjoint().adjoint();
        let (a, b) = (column_blocks(&spec, n, None).unwrap(), column_blocks(&back, n, None).unwrap());
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.blocks.iter().zip(&b.blocks) {
            prop_assert!(same_matrix(&x.matrix, &y.matrix));
        }
    }

    #[test]
    fn adjoint_blocks_nest((a, b) in nested_pair(8), n in 1usize..=4) {
        let (aa, bb) = (column_blocks(&a.adjoint(), n, None).unwrap(), column_blocks(&b.adjoint(), n, None).unwrap());
        for x in &aa.blocks {
            prop_assert!(bb.blocks.iter().any(|y| same_matrix(&x.matrix, &y.matrix)));
        }
    }

    #[test]
    fn shift_lambda_subtracts_on_the_diagonal(spec in periodic_spec(1), lambda in complex(), n in 1usize..=5) {
        let shifted = column_blocks(&spec.shift_lambda(lambda), n, None).unwrap();
        let plain = column_blocks(&spec, n, None).unwrap();
        prop_assert_eq!(shifted.len(), plain.len());
        for (s, p) in shifted.blocks.iter().zip(&plain.blocks) {
            prop_assert!(same_matrix(&s.matrix, &p.shifted(lambda)));
        }
    }

    #[test]
    fn half_axis_interior_blocks_are_full_axis_blocks(spec in periodic_spec(2), n in 1usize..=5) {
        let half = spec.half_axis();
        let w = spec.band_width() as i64;
        for j in w + 1..=w + 10 {
            let b = boundary_block(&half, j, n).unwrap();
            prop_assert_eq!(b.first_row, j - w);
            for i in 0..b.nrows() {
                for q in 0..b.ncols() {
                    prop_assert_eq!(b.matrix[(i, q)], spec.entry(b.first_row + i as i64, j + q as i64).unwrap());
                }
            }
        }
    }
}

// Lower-norm invariants.

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lower_norm_decreases_in_n(spec in periodic_spec(2), lambda in complex()) {
        let mut prev = f64::INFINITY;
        for n in [1, 2, 4, 8, 16, 32] {
            let v = nu_n(&spec, n, lambda, LowerNormOptions::default()).unwrap().combined;
            prop_assert!(v <= prev + 1e-12, "N = {}: {} > {}", n, v, prev);
            prev = v;
        }
    }

    #[test]
    fn lower_norm_respects_subword_inclusion((b, cs) in nested_pair(8), lambda in complex(), n in 1usize..=8) {
        let opts = LowerNormOptions::default();
        let (vb, vc) = (nu_n(&b, n, lambda, opts).unwrap(), nu_n(&cs, n, lambda, opts).unwrap());
        prop_assert!(vb.nu_n >= vc.nu_n - 1e-12);
        prop_assert!(vb.combined >= vc.combined - 1e-12);
    }

    #[test]
    fn lower_norm_never_undershoots_the_oracle(spec in periodic_spec(2), lambda in complex(), n in 1usize..=24) {
        let exact = nu_exact_periodic(&spec, lambda, 256).unwrap().refined;
        let opts = LowerNormOptions { skip_adjoint: true, scan: None };
        prop_assert!(nu_n(&spec, n, lambda, opts).unwrap().nu_n >= exact - 1e-10);
    }

    #[test]
    fn half_axis_value_is_the_explicit_minimum(spec in periodic_spec(2), lambda in complex(), n in 1usize..=6) {
        let parts = LowerNormSkeleton::new(&spec.half_axis(), n, LowerNormOptions::default())
            .unwrap()
            .evaluate_parts(lambda)
            .unwrap();
        let primal = parts.boundary.iter().copied().fold(parts.interior, f64::min);
        prop_assert_eq!(parts.result.nu_n, primal);
        let adj = parts.boundary_adjoint.unwrap().iter().copied().fold(parts.interior_adjoint.unwrap(), f64::min);
        prop_assert_eq!(parts.result.combined, primal.min(adj));
        let full = nu_n(&spec, n, lambda, LowerNormOptions::default()).unwrap();
        prop_assert!((parts.interior - full.nu_n).abs() <= 1e-12);
    }

    #[test]
    fn square_blocks_have_equal_adjoint_sigma(entries in proptest::collection::vec(complex(), 16)) {
        let m = Mat::from_fn(4, 4, |i, j| entries[4 * i + j]);
        let t = Mat::from_fn(4, 4, |i, j| entries[4 * j + i].conj());
        let (a, b) = (smallest_singular_value(m.as_ref()).unwrap(), smallest_singular_value(t.as_ref()).unwrap());
        prop_assert!((a.value - b.value).abs() <= 1e-12);
    }
}

// Field, Hausdorff and Floquet invariants.

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn field_bound_grows_with_n(spec in periodic_spec(1)) {
        let grid = GridSpec::new(-4.0, 4.0, -3.0, 3.0, 9, 7).unwrap();
        let fields: Vec<_> = [4, 8, 16]
            .iter()
            .map(|&n| resolvent_field(&spec, &grid, n, FieldOptions::default()).unwrap())
            .collect();
        for w in fields.windows(2) {
            for (a, b) in w[0].nodes.iter().zip(&w[1].nodes) {
                prop_assert!(a.bound().unwrap() <= b.bound().unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn field_bounds_nest_under_subword_inclusion((b, cs) in nested_pair(6)) {
        let grid = GridSpec::new(-5.0, 5.0, -4.0, 4.0, 11, 9).unwrap();
        let fb = resolvent_field(&b, &grid, 6, FieldOptions::default()).unwrap();
        let fc = resolvent_field(&cs, &grid, 6, FieldOptions::default()).unwrap();
        for (x, y) in fb.nodes.iter().zip(&fc.nodes) {
            prop_assert!(x.bound().unwrap() <= y.bound().unwrap() + 1e-12);
        }
    }

    #[test]
    fn self_adjoint_fields_are_conjugation_symmetric(spec in self_adjoint_spec(), z in complex()) {
        let sk = LowerNormSkeleton::new(&spec, 6, LowerNormOptions::default()).unwrap();
        let (a, b) = (sk.evaluate(z).unwrap(), sk.evaluate(z.conj()).unwrap());
        prop_assert!((a.combined - b.combined).abs() <= 1e-12);
    }

    #[test]
    fn self_adjoint_symbols_have_real_spectra(spec in self_adjoint_spec()) {
        let s = floquet_spectrum(&spec, 64).unwrap();
        prop_assert!(s.points.iter().all(|z| z.im.abs() <= 1e-10));
    }

    #[test]
    fn real_spectra_are_conjugation_symmetric(
        vals in proptest::collection::vec(-2.0..2.0f64, 3),
        word in letters(3, 1..=5),
        l in proptest::collection::vec(-2.0..2.0f64, 2),
    ) {
        let source = PotentialSource::periodic(Alphabet::real(&vals).unwrap(), Word::new(word)).unwrap();
        let spec = BandOperatorSpec::schrodinger(&BTreeMap::from([(-1, c(l[0], 0.0)), (2, c(l[1], 0.0))]), 0, Arc::new(source));
        let s = floquet_spectrum(&spec, 32).unwrap();
        for z in &s.points {
            prop_assert!(s.points.iter().any(|w| (w - z.conj()).norm() <= 1e-10));
        }
    }

    #[test]
    fn symbol_matches_wrap_around_matrix(spec in periodic_spec(2), phases in prop_oneof![Just(8usize), Just(16)]) {
        let p = spec.period().unwrap();
        let size = p * phases;
        let mut a = Mat::<Complex64>::zeros(size, size);
        for (&k, d) in spec.diagonals() {
            for j in 0..size {
                a[((j as i64 + k).rem_euclid(size as i64) as usize, j)] += d.at(j as i64).unwrap();
            }
        }
        let dense = SpectralSet::new(a.eigenvalues().unwrap(), Provenance::File);
        let symbol = floquet_spectrum(&spec, phases).unwrap();
        prop_assert!(hausdorff(&dense, &symbol).unwrap().distance <= 1e-8);
    }

    #[test]
    fn hausdorff_is_a_metric(
        x in proptest::collection::vec(complex(), 1..30),
        y in proptest::collection::vec(complex(), 1..30),
        z in proptest::collection::vec(complex(), 1..30),
    ) {
        let (x, y, z) = (
            SpectralSet::new(x, Provenance::File),
            SpectralSet::new(y, Provenance::File),
            SpectralSet::new(z, Provenance::File),
        );
        let d = |a: &SpectralSet, b: &SpectralSet| hausdorff(a, b).unwrap().distance;
        prop_assert_eq!(d(&x, &x), 0.0);
        prop_assert!((d(&x, &y) - d(&y, &x)).abs() <= 1e-12);
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-12);
    }
}

#[test]
fn normal_operators_are_inner_bounded() {
    let grid = GridSpec::new(-3.0, 3.0, -2.0, 2.0, 31, 21).unwrap();
    let f = resolvent_field(&BandOperatorSpec::laplacian(), &grid, 16, FieldOptions::default()).unwrap();
    for (i, v) in f.nodes.iter().enumerate() {
        let z = grid.point(i);
        let dist = if z.re.abs() <= 2.0 { z.im.abs() } else { c(z.re.abs() - 2.0, z.im).norm() };
        assert!(v.bound().unwrap() <= 1.0 / dist + 1e-8, "{z}");
    }
}

#[test]
fn scan_ranges_cover_non_periodic_sources() {
    let fib = PotentialSource::fibonacci();
    let s = subword_set(&fib, 5, Some(ScanRange::symmetric(2000))).unwrap();
    assert_eq!(s.len(), 6);
    assert!(!s.exact);
}
