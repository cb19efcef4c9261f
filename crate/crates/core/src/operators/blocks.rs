//! Column submatrices: `N` consecutive columns cut down to their band rows.

use std::collections::BTreeMap;

use faer::Mat;
use num_complex::Complex64;

use super::{BandOperatorSpec, DiagonalValue, Domain};
use crate::error::{Error, Result};
use crate::words::{Letter, ScanRange, Word};

/// Largest common period enumerated exactly.
const PERIOD_CAP: usize = 1 << 22;

/// A dense column block `C[i, q] = A[first_row + i, rep_col + q]`.
#[derive(Debug, Clone)]
pub struct ColumnBlock {
    pub matrix: Mat<Complex64>,
    /// Letters of each potential diagonal under the block's columns, by offset.
    pub window: Vec<Word>,
    /// Absolute index of the block's first column.
    pub rep_col: i64,
    /// Absolute index of the block's first row.
    pub first_row: i64,
}

impl ColumnBlock {
    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    /// The same block of `A − λ`.
    pub fn shifted(&self, lambda: Complex64) -> Mat<Complex64> {
        let mut m = self.matrix.clone();
        if lambda != Complex64::default() {
            for q in 0..self.ncols() {
                let i = self.rep_col + q as i64 - self.first_row;
                if (0..self.nrows() as i64).contains(&i) {
                    m[(i as usize, q)] -= lambda;
                }
            }
        }
        m
    }
}

/// The distinct column blocks of an operator for one `N`.
#[derive(Debug, Clone)]
pub struct BlockSet {
    pub n: usize,
    /// Sorted by window.
    pub blocks: Vec<ColumnBlock>,
    /// `false` when only a scan range of a non-periodic operator was examined.
    pub exact: bool,
    pub scan: Option<ScanRange>,
}

impl BlockSet {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// `C_N(A)`, one block per distinct window of potential letters.
///
/// Periodic operators are enumerated over one common period; otherwise the
/// blocks whose columns lie in `scan` are collected. On the half-axis only
/// interior columns `j ≥ w+1` are used; see [`boundary_block`] for the rest.
pub fn column_blocks(spec: &BandOperatorSpec, n: usize, scan: Option<ScanRange>) -> Result<BlockSet> {
    if n == 0 {
        return Err(Error::validation("N", "window length must be positive"));
    }
    let w = spec.band_width() as i64;
    let first_interior = match spec.domain() {
        Domain::Axis => i64::MIN,
        Domain::HalfAxis => w + 1,
    };
    let (k0, count, exact) = match spec.period() {
        Some(p) if p > PERIOD_CAP => {
            return Err(Error::Resource(format!("common period {p} exceeds {PERIOD_CAP}")));
        }
        Some(p) => (first_interior.max(0), p, true),
        None => {
            let scan = scan.ok_or_else(|| Error::validation("scan-range", "required for non-periodic operators"))?;
            let lo = scan.lo.max(first_interior);
            let last = scan.hi - n as i64 + 1;
            if last < lo {
                return Err(Error::validation("scan-range", format!("holds no block of {n} columns")));
            }
            (lo, (last - lo + 1) as usize, false)
        }
    };

    let mut strips: Vec<Vec<Letter>> = Vec::new();
    for d in spec.diagonals().values() {
        if let DiagonalValue::Potential { source, shift, .. } = d {
            strips.push(source.letters(k0 + shift, count + n - 1)?);
        }
    }
    let mut first_seen: BTreeMap<Vec<Letter>, i64> = BTreeMap::new();
    for t in 0..count {
        let key: Vec<Letter> = strips.iter().flat_map(|s| s[t..t + n].iter().copied()).collect();
        first_seen.entry(key).or_insert(k0 + t as i64);
    }
    let blocks = first_seen
        .into_iter()
        .map(|(key, k)| {
            let window = key.chunks(n).map(Word::from).collect();
            build(spec, k, k - w, k + n as i64 - 1 + w, n, window)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockSet { n, blocks, exact, scan: (!exact).then_some(scan).flatten() })
}

/// Half-axis block on columns `j..j+N−1` with all rows `≥ 1` that meet the band.
///
/// For `j ≤ w` rows above the corner are cut away; from `j = w+1` on the block
/// coincides with the full-axis block.
pub fn boundary_block(spec: &BandOperatorSpec, j: i64, n: usize) -> Result<ColumnBlock> {
    if spec.domain() != Domain::HalfAxis {
        return Err(Error::validation("domain", "boundary blocks need a half-axis operator"));
    }
    if j < 1 {
        return Err(Error::validation("j", format!("column {j} is not on the half-axis")));
    }
    if n == 0 {
        return Err(Error::validation("N", "window length must be positive"));
    }
    let w = spec.band_width() as i64;
    let mut window = Vec::new();
    for d in spec.diagonals().values() {
        if let DiagonalValue::Potential { source, shift, .. } = d {
            window.push(Word::new(source.letters(j + shift, n)?));
        }
    }
    build(spec, j, (j - w).max(1), j + n as i64 - 1 + w, n, window)
}

fn build(
    spec: &BandOperatorSpec,
    k: i64,
    first_row: i64,
    last_row: i64,
    n: usize,
    window: Vec<Word>,
) -> Result<ColumnBlock> {
    let rows = (last_row - first_row + 1) as usize;
    let mut matrix = Mat::<Complex64>::zeros(rows, n);
    for q in 0..n {
        let c = k + q as i64;
        for (&off, d) in spec.diagonals() {
            let r = c + off;
            if r < first_row || r > last_row {
                continue;
            }
            if spec.domain() == Domain::HalfAxis && (r < 1 || c < 1) {
                continue;
            }
            matrix[((r - first_row) as usize, q)] = d.at(c)?;
        }
    }
    Ok(ColumnBlock { matrix, window, rep_col: k, first_row })
}
