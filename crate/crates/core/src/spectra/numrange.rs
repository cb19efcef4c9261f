use std::f64::consts::PI;

use faer::{Mat, MatRef};
use num_complex::Complex64;

use super::{Provenance, SpectralSet};
use crate::error::{Error, Result};

/// Support points of the numerical range `W(A)` of a square matrix, one per direction.
///
/// For direction `φ` the point is `v*Av`, where `v` is a top eigenvector of
/// `Re(e^{-iφ}A)`. The points lie on the boundary of `W(A)` and, in order,
/// form an inscribed polygon that is returned as one closed polyline.
pub fn numerical_range_boundary(a: MatRef<'_, Complex64>, angle_samples: usize) -> Result<SpectralSet> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::validation("matrix", "must be square and non-empty"));
    }
    if angle_samples < 3 {
        return Err(Error::validation("angle_samples", "need at least 3"));
    }
    let mut points = Vec::with_capacity(angle_samples);
    for k in 0..angle_samples {
        let phi = 2.0 * PI * k as f64 / angle_samples as f64;
        let rot = Complex64::from_polar(1.0, -phi);
        let h = Mat::from_fn(n, n, |i, j| (rot * a[(i, j)] + (rot * a[(j, i)]).conj()) * 0.5);
        let evd = h
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|e| Error::numerical("numerical range", format!("eigensolver failed at φ = {phi}: {e:?}")))?;
        let v = evd.U().col(n - 1);
        let mut z = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                z += v[i].conj() * a[(i, j)] * v[j];
            }
        }
        points.push(z);
    }
    let mut set = SpectralSet::new(points.clone(), Provenance::NumericalRange);
    points.push(points[0]);
    set.polylines = vec![points];
    Ok(set)
}
