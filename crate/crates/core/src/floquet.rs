//! Spectra and lower norms of periodic band operators through the Bloch symbol.
//!
//! For a `p`-periodic operator the symbol at phase `θ` is the `p × p` matrix
//!
//! ```text
//! M(θ)[i, j] = Σ_k  v_k(j) · e^{iθ·⌊(i−k)/p⌋}   over offsets k with (i−k) mod p = j.
//! ```
//!
//! The spectrum is the union of the eigenvalues of `M(θ)` over `θ ∈ [0, 2π)`,
//! and the lower norm of `A − λ` is the minimum over `θ` of `σ_min(M(θ) − λ)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::complex::{fmt_num, format_complex};
use crate::error::{Error, Result};
use crate::lowernorm::smallest_singular_value;
use crate::operators::{BandOperatorSpec, Domain};
use crate::spectra::{Hole, Provenance, SpectralSet};

pub const DEFAULT_THETA_SAMPLES: usize = 512;

/// Relative tolerance under which a symbol counts as Hermitian.
const HERMITIAN_RTOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct SymbolMatrix {
    pub p: usize,
    pub theta: f64,
    pub matrix: Mat<Complex64>,
}

impl SymbolMatrix {
    /// Plain-text dump: one row per line, entries as complex literals.
    pub fn to_text(&self) -> String {
        let mut out = format!("# p = {}, theta = {}\n", self.p, fmt_num(self.theta));
        for i in 0..self.p {
            let row: Vec<String> = (0..self.p).map(|j| format_complex(self.matrix[(i, j)])).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    fn hermitian_part(&self) -> Option<Mat<Complex64>> {
        let m = &self.matrix;
        let mut scale: f64 = 0.0;
        let mut defect: f64 = 0.0;
        for i in 0..self.p {
            for j in 0..self.p {
                scale = scale.max(m[(i, j)].norm());
                defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        (defect <= HERMITIAN_RTOL * scale.max(1.0))
            .then(|| Mat::from_fn(self.p, self.p, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5))
    }
}

fn periodic_period(spec: &BandOperatorSpec) -> Result<usize> {
    if spec.domain() != Domain::Axis {
        return Err(Error::validation("domain", "Bloch symbols describe full-axis operators"));
    }
    spec.period().ok_or_else(|| Error::validation("potential", "Bloch symbols need periodic potentials"))
}

pub fn symbol_matrix(spec: &BandOperatorSpec, theta: f64) -> Result<SymbolMatrix> {
    let p = periodic_period(spec)?;
    let pi = p as i64;
    let mut matrix = Mat::<Complex64>::zeros(p, p);
    for i in 0..pi {
        for (&k, d) in spec.diagonals() {
            let col = i - k;
            let j = col.rem_euclid(pi);
            let wrap = col.div_euclid(pi);
            matrix[(i as usize, j as usize)] += d.at(j)? * Complex64::from_polar(1.0, theta * wrap as f64);
        }
    }
    Ok(SymbolMatrix { p, theta, matrix })
}

/// `θ_j = 2πj / samples`.
pub fn theta_at(j: usize, samples: usize) -> f64 {
    2.0 * PI * j as f64 / samples as f64
}

fn eigenvalues(symbol: &SymbolMatrix) -> Result<Vec<Complex64>> {
    let mut ev: Vec<Complex64> = match symbol.hermitian_part() {
        Some(h) => h
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .map_err(|e| Error::numerical(format!("symbol at theta = {}", symbol.theta), format!("{e:?}")))?
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect(),
        None => symbol
            .matrix
            .eigenvalues()
            .map_err(|e| Error::numerical(format!("symbol at theta = {}", symbol.theta), format!("{e:?}")))?,
    };
    if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::numerical(format!("symbol at theta = {}", symbol.theta), "non-finite eigenvalue"));
    }
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ev)
}

/// Eigenvalues of `M(θ_j)` for `j = 0..samples`, tagged with `j`.
///
/// A failed eigensolve leaves a hole for that `θ_j`. Hermitian symbols
/// (self-adjoint operators) go through the Hermitian eigensolver.
pub fn floquet_spectrum(spec: &BandOperatorSpec, samples: usize) -> Result<SpectralSet> {
    if samples == 0 {
        return Err(Error::validation("theta-samples", "must be positive"));
    }
    periodic_period(spec)?;
    let per_theta: Vec<Result<Vec<Complex64>>> =
        (0..samples).into_par_iter().map(|j| eigenvalues(&symbol_matrix(spec, theta_at(j, samples))?)).collect();
    let mut points = Vec::new();
    let mut theta_index = Vec::new();
    let mut holes = Vec::new();
    for (j, r) in per_theta.into_iter().enumerate() {
        match r {
            Ok(ev) => {
                theta_index.extend(std::iter::repeat_n(j, ev.len()));
                points.extend(ev);
            }
            Err(Error::Numerical { message, .. }) => holes.push(Hole { index: j, reason: message }),
            Err(e) => return Err(e),
        }
    }
    let mut set = SpectralSet::new(points, Provenance::Floquet);
    set.theta_index = Some(theta_index);
    set.holes = holes;
    Ok(set)
}

/// `min_θ σ_min(M(θ) − λ)`: the lower norm of `A − λ` for periodic `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicLowerNorm {
    /// Minimum over the uniform samples; an overestimate of the true minimum.
    pub sampled: f64,
    pub sampled_theta_index: usize,
    /// After golden-section refinement around the best samples; never above `sampled`.
    pub refined: f64,
    pub theta: f64,
    pub samples: usize,
}

fn sigma_at(spec: &BandOperatorSpec, lambda: Complex64, theta: f64) -> Result<f64> {
    let mut m = symbol_matrix(spec, theta)?.matrix;
    for i in 0..m.nrows() {
        m[(i, i)] -= lambda;
    }
    Ok(smallest_singular_value(m.as_ref())?.value)
}

pub fn nu_exact_periodic(spec: &BandOperatorSpec, lambda: Complex64, samples: usize) -> Result<PeriodicLowerNorm> {
    if samples == 0 {
        return Err(Error::validation("theta-samples", "must be positive"));
    }
    periodic_period(spec)?;
    let values = (0..samples)
        .into_par_iter()
        .map(|j| sigma_at(spec, lambda, theta_at(j, samples)))
        .collect::<Result<Vec<f64>>>()?;
    let (best, &sampled) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("at least one sample");

    // Refine every sampled local minimum within a factor of the best one.
    let h = 2.0 * PI / samples as f64;
    let mut refined = sampled;
    let mut theta = theta_at(best, samples);
    for j in 0..samples {
        let (l, r) = (values[(j + samples - 1) % samples], values[(j + 1) % samples]);
        if values[j] > l || values[j] > r || values[j] > 2.0 * sampled + 1e-12 {
            continue;
        }
        let t0 = theta_at(j, samples);
        let (t, v) = golden_min(|t| sigma_at(spec, lambda, t), t0 - h, t0 + h, values[j])?;
        if v < refined {
            refined = v;
            theta = t.rem_euclid(2.0 * PI);
        }
    }
    Ok(PeriodicLowerNorm { sampled, sampled_theta_index: best, refined, theta, samples })
}

/// Golden-section search on `[a, b]`; returns the best point seen, no worse than `start`.
fn golden_min(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, start: f64) -> Result<(f64, f64)> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = ((a + b) / 2.0, start);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..60 {
        if f1 < best.1 {
            best = (x1, f1);
        }
        if f2 < best.1 {
            best = (x2, f2);
        }
        if (b - a).abs() < 1e-13 {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(best)
}
