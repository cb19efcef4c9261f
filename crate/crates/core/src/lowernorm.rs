//! Local lower norms `ν_N` from smallest singular values of column blocks.
//!
//! `ν_N(A − λ)` is the minimum of `σ_min` over the blocks of `A − λ`, and
//! `1 / min(ν_N(A − λ), ν_N(A* − λ̄))` bounds `‖(A − λ)⁻¹‖` from below.
//! Block skeletons do not depend on `λ`, so a [`LowerNormSkeleton`] is built
//! once and evaluated at many points.

use std::fmt::Write as _;

use faer::MatRef;
use num_complex::Complex64;

use crate::complex::fmt_num;
use crate::error::{Error, Result};
use crate::operators::{boundary_block, column_blocks, BandOperatorSpec, ColumnBlock, Domain};
use crate::words::ScanRange;

/// `σ_min ≤ SINGULAR_RTOL · σ_max` is flagged as numerically singular.
pub const SINGULAR_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaMin {
    pub value: f64,
    pub singular: bool,
}

/// Smallest singular value of a dense matrix, by full SVD.
pub fn smallest_singular_value(m: MatRef<'_, Complex64>) -> Result<SigmaMin> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::validation("block", "empty matrix"));
    }
    let sv = m
        .singular_values()
        .map_err(|e| Error::numerical(format!("{}x{} block", m.nrows(), m.ncols()), format!("{e:?}")))?;
    let max = sv.iter().copied().fold(0.0, f64::max);
    // A tall block has ncols singular values; a wide one has fewer, plus a kernel.
    let value = if m.nrows() < m.ncols() { 0.0 } else { sv.iter().copied().fold(f64::INFINITY, f64::min) };
    if !value.is_finite() {
        return Err(Error::numerical(format!("{}x{} block", m.nrows(), m.ncols()), "non-finite singular value"));
    }
    Ok(SigmaMin { value, singular: value <= SINGULAR_RTOL * max })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LowerNormOptions {
    /// Drop `ν_N(A*)`. Exact only in the limit `N → ∞` and for self-contained operators.
    pub skip_adjoint: bool,
    /// Columns to scan for non-periodic operators.
    pub scan: Option<ScanRange>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerNormResult {
    pub nu_n: f64,
    pub nu_n_adjoint: Option<f64>,
    /// Minimum of the present components.
    pub combined: f64,
    pub n: usize,
    pub lambda: Complex64,
    pub block_count: usize,
    /// `false` when blocks came from a finite scan.
    pub exact: bool,
    /// The minimizing block was numerically singular.
    pub singular: bool,
}

impl LowerNormResult {
    /// `1 / combined`, infinite when the minimizing block is singular.
    pub fn resolvent_bound(&self) -> f64 {
        if self.singular || self.combined == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.combined
        }
    }
}

/// Per-block value, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockValue {
    pub rep_col: i64,
    pub adjoint: bool,
    pub boundary: bool,
    pub sigma_min: SigmaMin,
}

#[derive(Debug, Clone)]
struct Side {
    /// Half-axis boundary blocks for `j = 1..w` come first.
    blocks: Vec<ColumnBlock>,
    boundary: usize,
}

impl Side {
    fn build(spec: &BandOperatorSpec, n: usize, scan: Option<ScanRange>) -> Result<(Side, bool)> {
        let interior = column_blocks(spec, n, scan)?;
        let mut blocks = Vec::new();
        if spec.domain() == Domain::HalfAxis {
            for j in 1..=spec.band_width() as i64 {
                blocks.push(boundary_block(spec, j, n)?);
            }
        }
        let boundary = blocks.len();
        blocks.extend(interior.blocks);
        Ok((Side { blocks, boundary }, interior.exact))
    }

    fn values(&self, lambda: Complex64, adjoint: bool) -> Result<Vec<BlockValue>> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let s = smallest_singular_value(b.shifted(lambda).as_ref()).map_err(|e| match e {
                    Error::Numerical { message, .. } => Error::numerical(
                        format!("block at column {} (window {:?}, λ = {lambda})", b.rep_col, b.window),
                        message,
                    ),
                    other => other,
                })?;
                Ok(BlockValue { rep_col: b.rep_col, adjoint, boundary: i < self.boundary, sigma_min: s })
            })
            .collect()
    }
}

fn minimum(values: &[BlockValue]) -> SigmaMin {
    let mut best = SigmaMin { value: f64::INFINITY, singular: false };
    for v in values {
        if v.sigma_min.value < best.value {
            best = v.sigma_min;
        }
    }
    best
}

/// λ-independent block data for one operator and one `N`.
#[derive(Debug, Clone)]
pub struct LowerNormSkeleton {
    n: usize,
    domain: Domain,
    primal: Side,
    adjoint: Option<Side>,
    exact: bool,
}

impl LowerNormSkeleton {
    pub fn new(spec: &BandOperatorSpec, n: usize, options: LowerNormOptions) -> Result<Self> {
        let (primal, exact) = Side::build(spec, n, options.scan)?;
        let adjoint = if options.skip_adjoint { None } else { Some(Side::build(&spec.adjoint(), n, options.scan)?.0) };
        Ok(LowerNormSkeleton { n, domain: spec.domain(), primal, adjoint, exact })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn block_count(&self) -> usize {
        self.primal.blocks.len()
    }

    /// `σ_min` of every block of `A − λ`, then of `A* − λ̄`.
    pub fn block_values(&self, lambda: Complex64) -> Result<Vec<BlockValue>> {
        let mut out = self.primal.values(lambda, false)?;
        if let Some(adj) = &self.adjoint {
            out.extend(adj.values(lambda.conj(), true)?);
        }
        Ok(out)
    }

    pub fn evaluate(&self, lambda: Complex64) -> Result<LowerNormResult> {
        Ok(self.evaluate_parts(lambda)?.result)
    }

    /// Like [`evaluate`](Self::evaluate), also splitting half-axis values into
    /// boundary and interior minima.
    pub fn evaluate_parts(&self, lambda: Complex64) -> Result<HalfAxisLowerNorm> {
        let p = self.primal.values(lambda, false)?;
        let a = match &self.adjoint {
            Some(adj) => Some(adj.values(lambda.conj(), true)?),
            None => None,
        };
        let nu = minimum(&p);
        let nu_adj = a.as_deref().map(minimum);
        let best = match nu_adj {
            Some(s) if s.value < nu.value => s,
            _ => nu,
        };
        let split = |vals: &[BlockValue], boundary: usize| {
            (vals[..boundary].iter().map(|v| v.sigma_min.value).collect::<Vec<_>>(), minimum(&vals[boundary..]).value)
        };
        let (boundary, interior) = split(&p, self.primal.boundary);
        let (boundary_adjoint, interior_adjoint) = match (&a, &self.adjoint) {
            (Some(vals), Some(adj)) => {
                let (b, i) = split(vals, adj.boundary);
                (Some(b), Some(i))
            }
            _ => (None, None),
        };
        Ok(HalfAxisLowerNorm {
            result: LowerNormResult {
                nu_n: nu.value,
                nu_n_adjoint: nu_adj.map(|s| s.value),
                combined: best.value,
                n: self.n,
                lambda,
                block_count: self.block_count(),
                exact: self.exact,
                singular: best.singular,
            },
            boundary,
            interior,
            boundary_adjoint,
            interior_adjoint,
        })
    }
}

/// `ν_N` of a half-axis operator with its two ingredients: `σ_min` of the
/// boundary blocks `j = 1..w` and the interior minimum over `j ≥ w+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfAxisLowerNorm {
    pub result: LowerNormResult,
    pub boundary: Vec<f64>,
    pub interior: f64,
    pub boundary_adjoint: Option<Vec<f64>>,
    pub interior_adjoint: Option<f64>,
}

/// `ν_N(A − λ)` on the full axis, with the adjoint unless skipped.
pub fn nu_n(
    spec: &BandOperatorSpec,
    n: usize,
    lambda: Complex64,
    options: LowerNormOptions,
) -> Result<LowerNormResult> {
    if spec.domain() != Domain::Axis {
        return Err(Error::validation("domain", "use nu_n_half_axis for half-axis operators"));
    }
    LowerNormSkeleton::new(spec, n, options)?.evaluate(lambda)
}

/// `ν_N(T⁺ − λ)` for a half-axis operator.
pub fn nu_n_half_axis(
    spec: &BandOperatorSpec,
    n: usize,
    lambda: Complex64,
    options: LowerNormOptions,
) -> Result<HalfAxisLowerNorm> {
    if spec.domain() != Domain::HalfAxis {
        return Err(Error::validation("domain", "operator is not a half-axis compression"));
    }
    LowerNormSkeleton::new(spec, n, options)?.evaluate_parts(lambda)
}

/// Lower bound on `‖(A − λ)⁻¹‖`; infinite when the localized lower norm vanishes.
pub fn resolvent_lower_bound(
    spec: &BandOperatorSpec,
    n: usize,
    lambda: Complex64,
    options: LowerNormOptions,
) -> Result<f64> {
    Ok(LowerNormSkeleton::new(spec, n, options)?.evaluate(lambda)?.resolvent_bound())
}

/// CSV `rep_col,sigma_min` (adjoint rows follow the operator's rows).
pub fn block_values_csv(values: &[BlockValue]) -> String {
    let mut out = String::from("rep_col,sigma_min\n");
    for v in values {
        let _ = writeln!(out, "{},{}", v.rep_col, fmt_num(v.sigma_min.value));
    }
    out
}
