use std::fmt::Write as _;
use std::hash::Hasher;

use num_complex::Complex64;
use rayon::prelude::*;

use super::GridSpec;
use crate::complex::fmt_num;
use crate::error::{Error, Result};
use crate::lowernorm::{LowerNormOptions, LowerNormSkeleton};
use crate::operators::BandOperatorSpec;

pub type FieldOptions = LowerNormOptions;

/// Value of a field at one grid node.
#[derive(Debug, Clone, PartialEq)]
pub enum NodeValue {
    Value {
        nu: f64,
        nu_adjoint: Option<f64>,
        /// `min(nu, nu_adjoint)`.
        combined: f64,
        /// `1 / combined`, infinite at numerically singular nodes.
        bound: f64,
    },
    /// The node failed; never interpolated or zeroed.
    Hole(String),
}

impl NodeValue {
    pub fn bound(&self) -> Option<f64> {
        match self {
            NodeValue::Value { bound, .. } => Some(*bound),
            NodeValue::Hole(_) => None,
        }
    }
}

/// Lower bounds on `‖(A − λ)⁻¹‖` at every node of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolventField {
    pub grid: GridSpec,
    pub n: usize,
    /// Hash of the operator spec and options the field was computed from.
    pub fingerprint: u64,
    pub nodes: Vec<NodeValue>,
}

impl ResolventField {
    pub fn holes(&self) -> impl Iterator<Item = (usize, &str)> + '_ {
        self.nodes.iter().enumerate().filter_map(|(i, v)| match v {
            NodeValue::Hole(r) => Some((i, r.as_str())),
            NodeValue::Value { .. } => None,
        })
    }

    /// CSV `re,im,nu,nu_adj,bound`. Skipped adjoints and holes print `nan`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,nu,nu_adj,bound\n");
        for (i, v) in self.nodes.iter().enumerate() {
            let z = self.grid.point(i);
            let (nu, adj, bound) = match v {
                NodeValue::Value { nu, nu_adjoint, bound, .. } => (*nu, nu_adjoint.unwrap_or(f64::NAN), *bound),
                NodeValue::Hole(_) => (f64::NAN, f64::NAN, f64::NAN),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_num(z.re),
                fmt_num(z.im),
                fmt_num(nu),
                fmt_num(adj),
                fmt_num(bound)
            );
        }
        out
    }
}

/// FNV-1a, so fingerprints do not depend on the standard library's hasher.
struct Fnv(u64);

impl Hasher for Fnv {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ u64::from(b)).wrapping_mul(0x100_0000_01b3);
        }
    }
}

pub(crate) fn fingerprint(spec: &BandOperatorSpec, n: usize, options: &FieldOptions) -> u64 {
    let mut h = Fnv(0xcbf2_9ce4_8422_2325);
    h.write(format!("{spec:?}|{n}|{options:?}").as_bytes());
    h.finish()
}

/// Evaluates the resolvent lower bound at every grid node, in parallel.
///
/// Block skeletons are built once; each node only shifts and decomposes them.
/// Numerical failures at a node become holes; other errors abort.
pub fn resolvent_field(
    spec: &BandOperatorSpec,
    grid: &GridSpec,
    n: usize,
    options: FieldOptions,
) -> Result<ResolventField> {
    let skeleton = LowerNormSkeleton::new(spec, n, options)?;
    let nodes =
        (0..grid.len()).into_par_iter().map(|i| node_value(&skeleton, grid.point(i))).collect::<Result<Vec<_>>>()?;
    Ok(ResolventField { grid: *grid, n, fingerprint: fingerprint(spec, n, &options), nodes })
}

fn node_value(skeleton: &LowerNormSkeleton, lambda: Complex64) -> Result<NodeValue> {
    match skeleton.evaluate(lambda) {
        Ok(r) => Ok(NodeValue::Value {
            nu: r.nu_n,
            nu_adjoint: r.nu_n_adjoint,
            combined: r.combined,
            bound: r.resolvent_bound(),
        }),
        Err(Error::Numerical { context, message }) => Ok(NodeValue::Hole(format!("{context}: {message}"))),
        Err(e) => Err(e),
    }
}
