//! Band operators with constant and potential-valued diagonals.
//!
//! Entries follow the column convention `A[j+k, j] = v_k(j)`: the diagonal at
//! offset `k` stores its value at column `j`. With this convention the shift
//! `S` sits at offset `+1`, and `S^γ M_b` places `b(j)` in column `j` of the
//! `γ`-th diagonal.

mod blocks;
mod file;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::words::PotentialSource;

pub use blocks::{boundary_block, column_blocks, BlockSet, ColumnBlock};
pub use file::{parse_spec, write_spec};

/// Where the operator acts: `ℓ²(ℤ)` or the compression to `ℓ²(ℕ)`, `ℕ = {1, 2, …}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Axis,
    HalfAxis,
}

/// The entries of one diagonal.
#[derive(Debug, Clone, PartialEq)]
pub enum DiagonalValue {
    Constant(Complex64),
    /// Value at column `j` is `table[b(j + shift)]`.
    Potential {
        source: Arc<PotentialSource>,
        shift: i64,
        table: Vec<Complex64>,
    },
}

impl DiagonalValue {
    /// The letter values of `source` themselves.
    pub fn potential(source: Arc<PotentialSource>) -> Self {
        let table = source.alphabet().letters().to_vec();
        DiagonalValue::Potential { source, shift: 0, table }
    }

    /// Adds a constant to every entry.
    pub fn plus(self, c: Complex64) -> Self {
        match self {
            DiagonalValue::Constant(v) => DiagonalValue::Constant(v + c),
            DiagonalValue::Potential { source, shift, table } => {
                DiagonalValue::Potential { source, shift, table: table.into_iter().map(|v| v + c).collect() }
            }
        }
    }

    pub fn at(&self, column: i64) -> Result<Complex64> {
        match self {
            DiagonalValue::Constant(c) => Ok(*c),
            DiagonalValue::Potential { source, shift, table } => Ok(table[usize::from(source.letter(column + shift)?)]),
        }
    }

    /// Conjugated values read from column `j + new_offset`.
    fn conj_reindexed(&self, new_offset: i64) -> Self {
        match self {
            DiagonalValue::Constant(c) => DiagonalValue::Constant(c.conj()),
            DiagonalValue::Potential { source, shift, table } => DiagonalValue::Potential {
                source: Arc::clone(source),
                shift: shift + new_offset,
                table: table.iter().map(|v| v.conj()).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSpec {
    pub offset: i64,
    pub value: DiagonalValue,
}

impl DiagonalSpec {
    pub fn constant(offset: i64, c: Complex64) -> Self {
        DiagonalSpec { offset, value: DiagonalValue::Constant(c) }
    }

    pub fn potential(offset: i64, source: Arc<PotentialSource>) -> Self {
        DiagonalSpec { offset, value: DiagonalValue::potential(source) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandOperatorSpec {
    diagonals: BTreeMap<i64, DiagonalValue>,
    domain: Domain,
    lambda: Complex64,
}

impl BandOperatorSpec {
    /// `L + S^γ M_b` for a translation-invariant `L` given as offset → constant.
    pub fn schrodinger(l: &BTreeMap<i64, Complex64>, gamma: i64, potential: Arc<PotentialSource>) -> Self {
        let mut diagonals: BTreeMap<i64, DiagonalValue> =
            l.iter().map(|(&k, &c)| (k, DiagonalValue::Constant(c))).collect();
        let lg = l.get(&gamma).copied().unwrap_or_default();
        diagonals.insert(gamma, DiagonalValue::potential(potential).plus(lg));
        BandOperatorSpec { diagonals, domain: Domain::Axis, lambda: Complex64::default() }
    }

    pub fn multi_diagonal(diagonals: Vec<DiagonalSpec>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for d in diagonals {
            if map.insert(d.offset, d.value).is_some() {
                return Err(Error::validation("diagonals", format!("offset {} given twice", d.offset)));
            }
        }
        Ok(BandOperatorSpec { diagonals: map, domain: Domain::Axis, lambda: Complex64::default() })
    }

    /// The shift `S`: ones on offset `+1`.
    pub fn shift() -> Self {
        Self::constant_band(&[(1, Complex64::new(1.0, 0.0))])
    }

    /// The free Laplacian `S + S⁻¹`.
    pub fn laplacian() -> Self {
        Self::constant_band(&[(-1, Complex64::new(1.0, 0.0)), (1, Complex64::new(1.0, 0.0))])
    }

    pub fn constant_band(entries: &[(i64, Complex64)]) -> Self {
        BandOperatorSpec {
            diagonals: entries.iter().map(|&(k, c)| (k, DiagonalValue::Constant(c))).collect(),
            domain: Domain::Axis,
            lambda: Complex64::default(),
        }
    }

    pub fn diagonals(&self) -> &BTreeMap<i64, DiagonalValue> {
        &self.diagonals
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Cumulative spectral shift applied through [`shift_lambda`](Self::shift_lambda).
    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn band_width(&self) -> usize {
        self.diagonals.keys().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// All potentials are self-contained (constant diagonals trivially are).
    pub fn self_contained(&self) -> bool {
        self.potentials().all(|(_, s)| s.self_contained())
    }

    /// `(offset, source)` for every potential-valued diagonal, by offset.
    pub fn potentials(&self) -> impl Iterator<Item = (i64, &Arc<PotentialSource>)> + '_ {
        self.diagonals.iter().filter_map(|(&k, d)| match d {
            DiagonalValue::Potential { source, .. } => Some((k, source)),
            DiagonalValue::Constant(_) => None,
        })
    }

    /// Least common period of all potentials, `Some(1)` without potentials,
    /// `None` if any potential is not periodic.
    pub fn period(&self) -> Option<usize> {
        self.potentials().try_fold(1usize, |acc, (_, s)| {
            let p = s.period()?;
            let g = gcd(acc, p);
            (acc / g).checked_mul(p)
        })
    }

    /// Conjugate transpose: offset `m` of the result holds `conj(v_{−m}(j+m))`.
    pub fn adjoint(&self) -> Self {
        BandOperatorSpec {
            diagonals: self.diagonals.iter().map(|(&k, d)| (-k, d.conj_reindexed(-k))).collect(),
            domain: self.domain,
            lambda: self.lambda.conj(),
        }
    }

    /// `A − λ`: subtracts `λ` on the main diagonal.
    pub fn shift_lambda(&self, lambda: Complex64) -> Self {
        let mut out = self.clone();
        if lambda == Complex64::default() {
            return out;
        }
        let d = out.diagonals.remove(&0).unwrap_or(DiagonalValue::Constant(Complex64::default()));
        out.diagonals.insert(0, d.plus(-lambda));
        out.lambda += lambda;
        out
    }

    /// The compression to `ℓ²(ℕ)`.
    pub fn half_axis(&self) -> Self {
        BandOperatorSpec { domain: Domain::HalfAxis, ..self.clone() }
    }

    /// The same operator on the full axis.
    pub fn full_axis(&self) -> Self {
        BandOperatorSpec { domain: Domain::Axis, ..self.clone() }
    }

    /// `A[row, col]`; zero outside the band and, on the half-axis, for indices below 1.
    pub fn entry(&self, row: i64, col: i64) -> Result<Complex64> {
        if self.domain == Domain::HalfAxis && (row < 1 || col < 1) {
            return Ok(Complex64::default());
        }
        match self.diagonals.get(&(row - col)) {
            Some(d) => d.at(col),
            None => Ok(Complex64::default()),
        }
    }

    /// Dense section `A[rows, cols]` for `rows, cols` in `first..first+n`.
    pub fn section(&self, first: i64, n: usize) -> Result<faer::Mat<Complex64>> {
        let mut m = faer::Mat::<Complex64>::zeros(n, n);
        for c in 0..n {
            for (&k, d) in &self.diagonals {
                let r = c as i64 + k;
                if (0..n as i64).contains(&r) {
                    let (row, col) = (first + r, first + c as i64);
                    if self.domain == Domain::Axis || (row >= 1 && col >= 1) {
                        m[(r as usize, c)] = d.at(col)?;
                    }
                }
            }
        }
        Ok(m)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{Alphabet, Word};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pm_one(word: &str) -> Arc<PotentialSource> {
        Arc::new(
            PotentialSource::periodic(Alphabet::real(&[-1.0, 1.0]).unwrap(), word.parse::<Word>().unwrap()).unwrap(),
        )
    }

    fn dense(spec: &BandOperatorSpec, first: i64, n: usize) -> Vec<Vec<Complex64>> {
        let m = spec.section(first, n).unwrap();
        (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect()
    }

    #[test]
    fn schrodinger_places_potential_on_gamma() {
        let b = pm_one("0111");
        let l = BTreeMap::from([(1, c(1.0))]);
        let h = BandOperatorSpec::schrodinger(&l, -1, b.clone());
        assert_eq!(h.band_width(), 1);
        // A[j-1, j] = b(j)
        for j in 0..8 {
            assert_eq!(h.entry(j - 1, j).unwrap(), b.value(j).unwrap());
            assert_eq!(h.entry(j + 1, j).unwrap(), c(1.0));
            assert_eq!(h.entry(j, j).unwrap(), c(0.0));
        }
        let m =
            BandOperatorSpec::multi_diagonal(vec![DiagonalSpec::constant(1, c(1.0)), DiagonalSpec::potential(-1, b)])
                .unwrap();
        assert_eq!(dense(&h, -3, 10), dense(&m, -3, 10));
    }

    #[test]
    fn schrodinger_adds_l_gamma() {
        let l = BTreeMap::from([(0, c(0.5)), (1, c(1.0))]);
        let h = BandOperatorSpec::schrodinger(&l, 0, pm_one("01"));
        assert_eq!(h.entry(0, 0).unwrap(), c(-0.5));
        assert_eq!(h.entry(1, 1).unwrap(), c(1.5));
    }

    #[test]
    fn duplicate_offsets_rejected() {
        let r = BandOperatorSpec::multi_diagonal(vec![
            DiagonalSpec::constant(0, c(1.0)),
            DiagonalSpec::constant(0, c(2.0)),
        ]);
        assert!(matches!(r, Err(Error::Validation { .. })));
    }

    fn conj_transpose(m: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let n = m.len();
        (0..n).map(|i| (0..n).map(|j| m[j][i].conj()).collect()).collect()
    }

    #[test]
    fn adjoint_is_sectional_conjugate_transpose() {
        let b = Arc::new(
            PotentialSource::periodic(
                Alphabet::new(vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25), c(3.0)]).unwrap(),
                "0120210".parse().unwrap(),
            )
            .unwrap(),
        );
        let cc =
            Arc::new(PotentialSource::periodic(Alphabet::real(&[3.0, 4.0]).unwrap(), "011".parse().unwrap()).unwrap());
        let hopping = BandOperatorSpec::schrodinger(&BTreeMap::from([(1, c(1.0))]), -1, b.clone());
        let oneway =
            BandOperatorSpec::multi_diagonal(vec![DiagonalSpec::potential(0, b), DiagonalSpec::potential(1, cc)])
                .unwrap();
        for spec in [hopping, oneway] {
            let a = dense(&spec, 2, 6);
            let adj = dense(&spec.adjoint(), 2, 6);
            assert_eq!(adj, conj_transpose(&a));
            assert_eq!(spec.adjoint().adjoint(), spec);
        }
    }

    #[test]
    fn adjoint_of_hopping_has_expected_diagonals() {
        let b = pm_one("0110");
        let h = BandOperatorSpec::schrodinger(&BTreeMap::from([(1, c(1.0))]), -1, b.clone());
        let a = h.adjoint();
        assert_eq!(a.diagonals()[&-1], DiagonalValue::Constant(c(1.0)));
        for j in -4..8 {
            assert_eq!(a.entry(j + 1, j).unwrap(), b.value(j + 1).unwrap());
        }
    }

    #[test]
    fn shift_lambda_behaviour() {
        let lap = BandOperatorSpec::laplacian();
        assert_eq!(lap.shift_lambda(Complex64::default()), lap);
        let s = lap.shift_lambda(Complex64::new(0.0, 3.0));
        assert_eq!(s.diagonals()[&0], DiagonalValue::Constant(Complex64::new(0.0, -3.0)));
        assert_eq!(s.lambda(), Complex64::new(0.0, 3.0));
        let h = BandOperatorSpec::schrodinger(&BTreeMap::from([(1, c(1.0))]), -1, pm_one("01")).shift_lambda(c(1.0));
        assert_eq!(h.band_width(), 1);
        assert_eq!(h.entry(5, 5).unwrap(), c(-1.0));
    }

    #[test]
    fn half_axis_clips_low_indices() {
        let lap = BandOperatorSpec::laplacian().half_axis();
        assert_eq!(lap.entry(0, 1).unwrap(), c(0.0));
        assert_eq!(lap.entry(2, 1).unwrap(), c(1.0));
    }

    #[test]
    fn period_is_lcm() {
        let spec = BandOperatorSpec::multi_diagonal(vec![
            DiagonalSpec::potential(0, pm_one("0110")),
            DiagonalSpec::potential(1, pm_one("011")),
        ])
        .unwrap();
        assert_eq!(spec.period(), Some(12));
        assert_eq!(BandOperatorSpec::laplacian().period(), Some(1));
        let fib = BandOperatorSpec::schrodinger(&BTreeMap::new(), 0, Arc::new(PotentialSource::fibonacci()));
        assert_eq!(fib.period(), None);
    }
}
