//! Resolvent-norm fields on complex grids, sublevel sets, Hausdorff distances,
//! numerical ranges and convergence studies.

mod contour;
mod field;
mod hausdorff;
mod numrange;
mod study;

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::complex::fmt_num;
use crate::error::{Error, Result};

pub use contour::{field_svg, sublevel_set};
pub use field::{resolvent_field, FieldOptions, NodeValue, ResolventField};
pub use hausdorff::{hausdorff, HausdorffReport};
pub use numrange::numerical_range_boundary;
pub use study::{convergence_study, Approximant, Comparison, Study, StudyMode, StudyRow};

/// A uniform grid over a rectangle in ℂ, corners included.
///
/// Nodes are numbered row-major from `(re_min, im_min)` with the real part
/// varying fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(re_min < re_max) || !(im_min < im_max) {
            return Err(Error::validation("grid", "need re_min < re_max and im_min < im_max"));
        }
        if ![re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite()) {
            return Err(Error::validation("grid", "bounds must be finite"));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::validation("grid", "need at least 2 nodes per direction"));
        }
        Ok(GridSpec { re_min, re_max, im_min, im_max, nx, ny })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        (self.re_max - self.re_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.im_max - self.im_min) / (self.ny - 1) as f64
    }

    pub fn node(&self, ix: usize, iy: usize) -> Complex64 {
        Complex64::new(self.re_min + ix as f64 * self.dx(), self.im_min + iy as f64 * self.dy())
    }

    /// Node by row-major index.
    pub fn point(&self, index: usize) -> Complex64 {
        self.node(index % self.nx, index / self.nx)
    }
}

/// Where the points of a [`SpectralSet`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Floquet,
    Sublevel,
    Reference,
    NumericalRange,
    File,
}

/// A sample or θ-index that produced no value, with the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct Hole {
    pub index: usize,
    pub reason: String,
}

/// A finite point set in ℂ, optionally with contour polylines.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSet {
    pub points: Vec<Complex64>,
    pub polylines: Vec<Vec<Complex64>>,
    pub provenance: Provenance,
    /// For Floquet spectra, the phase index of each point.
    pub theta_index: Option<Vec<usize>>,
    pub holes: Vec<Hole>,
}

impl SpectralSet {
    pub fn new(points: Vec<Complex64>, provenance: Provenance) -> Self {
        SpectralSet { points, polylines: Vec::new(), provenance, theta_index: None, holes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(re_min, re_max, im_min, im_max)` of the points, `None` when empty.
    pub fn bounding_box(&self) -> Option<(f64, f64, f64, f64)> {
        let first = self.points.first()?;
        Some(self.points.iter().fold((first.re, first.re, first.im, first.im), |(a, b, c, d), z| {
            (a.min(z.re), b.max(z.re), c.min(z.im), d.max(z.im))
        }))
    }

    /// Samples of the real set `[lo_1, hi_1] ∪ …` at spacing at most `step`, endpoints included.
    pub fn sampled_intervals(intervals: &[(f64, f64)], step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::validation("step", "must be positive"));
        }
        let mut points = Vec::new();
        for &(lo, hi) in intervals {
            if !(lo <= hi) {
                return Err(Error::validation("interval", format!("[{lo}, {hi}] is empty")));
            }
            let k = ((hi - lo) / step).ceil().max(1.0) as usize;
            points.extend((0..=k).map(|i| Complex64::new(lo + (hi - lo) * i as f64 / k as f64, 0.0)));
        }
        Ok(SpectralSet::new(points, Provenance::Reference))
    }

    /// CSV `re,im`, or `re,im,theta_index` for Floquet spectra.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.theta_index {
            Some(t) => {
                out.push_str("re,im,theta_index\n");
                for (z, j) in self.points.iter().zip(t) {
                    let _ = writeln!(out, "{},{},{}", fmt_num(z.re), fmt_num(z.im), j);
                }
            }
            None => {
                out.push_str("re,im\n");
                for z in &self.points {
                    let _ = writeln!(out, "{},{}", fmt_num(z.re), fmt_num(z.im));
                }
            }
        }
        out
    }

    /// Reads the first two columns of a CSV with a `re,im` header.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "header", "empty file"))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.len() < 2 || cols[0] != "re" || cols[1] != "im" {
            return Err(Error::parse(1, "header", "expected columns re,im"));
        }
        let mut points = Vec::new();
        for (i, line) in lines {
            let mut f = line.split(',').map(str::trim);
            let mut num = |field: &str| -> Result<f64> {
                let tok = f.next().ok_or_else(|| Error::parse(i + 1, field, "missing"))?;
                tok.parse::<f64>().map_err(|_| Error::parse(i + 1, field, format!("bad number `{tok}`")))
            };
            let (re, im) = (num("re")?, num("im")?);
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::parse(i + 1, "re", "points must be finite"));
            }
            points.push(Complex64::new(re, im));
        }
        Ok(SpectralSet::new(points, Provenance::File))
    }
}
