use num_complex::Complex64;

use super::SpectralSet;
use crate::complex::fmt_num;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HausdorffReport {
    /// `max_{p ∈ a} min_{q ∈ b} |p − q|`.
    pub directed_ab: f64,
    pub directed_ba: f64,
    pub distance: f64,
}

impl HausdorffReport {
    /// One CSV row `m,eps,d_ab,d_ba,d`.
    pub fn csv_row(&self, m: usize, eps: f64) -> String {
        format!(
            "{m},{},{},{},{}",
            fmt_num(eps),
            fmt_num(self.directed_ab),
            fmt_num(self.directed_ba),
            fmt_num(self.distance)
        )
    }
}

pub const HAUSDORFF_CSV_HEADER: &str = "m,eps,d_ab,d_ba,d";

/// Exact Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &SpectralSet, b: &SpectralSet) -> Result<HausdorffReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::validation("set", "Hausdorff distance needs non-empty sets"));
    }
    let directed_ab = Buckets::new(&b.points).directed_from(&a.points);
    let directed_ba = Buckets::new(&a.points).directed_from(&b.points);
    Ok(HausdorffReport { directed_ab, directed_ba, distance: directed_ab.max(directed_ba) })
}

/// Uniform bucket grid over the bounding box of a point set, for nearest-point queries.
struct Buckets<'a> {
    points: &'a [Complex64],
    origin: Complex64,
    cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
}

impl<'a> Buckets<'a> {
    fn new(points: &'a [Complex64]) -> Self {
        let (mut lo, mut hi) = (points[0], points[0]);
        for z in points {
            lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let (w, h) = (hi.re - lo.re, hi.im - lo.im);
        let side = (points.len() as f64).sqrt().ceil().max(1.0);
        let cell = match w.max(h) / side {
            c if c > 0.0 && c.is_finite() => c,
            _ => 1.0,
        };
        let nx = ((w / cell).floor() as usize + 1).min(4096);
        let ny = ((h / cell).floor() as usize + 1).min(4096);
        let mut b = Buckets { points, origin: lo, cell, nx, ny, cells: vec![Vec::new(); nx * ny] };
        for (i, z) in points.iter().enumerate() {
            let (cx, cy) = b.cell_of(*z);
            b.cells[cy * nx + cx].push(i as u32);
        }
        b
    }

    fn cell_of(&self, z: Complex64) -> (usize, usize) {
        let fx = ((z.re - self.origin.re) / self.cell).floor();
        let fy = ((z.im - self.origin.im) / self.cell).floor();
        (fx.clamp(0.0, (self.nx - 1) as f64) as usize, fy.clamp(0.0, (self.ny - 1) as f64) as usize)
    }

    /// Distance from `z` to the nearest stored point. Rings of cells around the
    /// cell of `z` (clamped into the grid) are searched until no closer point can remain.
    fn nearest(&self, z: Complex64) -> f64 {
        let (cx, cy) = self.cell_of(z);
        let mut best = f64::INFINITY;
        let max_ring = self.nx.max(self.ny);
        for r in 0..=max_ring {
            // Cells in ring r are at least (r − 1)·cell away from the clamped cell,
            // and clamping only moves z closer to the grid.
            if r >= 1 && (r - 1) as f64 * self.cell > best {
                break;
            }
            let (x0, x1) = (cx as i64 - r as i64, cx as i64 + r as i64);
            let (y0, y1) = (cy as i64 - r as i64, cy as i64 + r as i64);
            for y in y0..=y1 {
                if y < 0 || y >= self.ny as i64 {
                    continue;
                }
                let step = if y == y0 || y == y1 { 1 } else { (x1 - x0).max(1) as usize };
                for x in (x0..=x1).step_by(step) {
                    if x < 0 || x >= self.nx as i64 {
                        continue;
                    }
                    for &i in &self.cells[y as usize * self.nx + x as usize] {
                        best = best.min((self.points[i as usize] - z).norm());
                    }
                }
            }
        }
        best
    }

    fn directed_from(&self, from: &[Complex64]) -> f64 {
        from.iter().map(|&z| self.nearest(z)).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::Provenance;

    fn set(points: &[(f64, f64)]) -> SpectralSet {
        SpectralSet::new(points.iter().map(|&(x, y)| Complex64::new(x, y)).collect(), Provenance::File)
    }

    fn brute(a: &SpectralSet, b: &SpectralSet) -> f64 {
        a.points
            .iter()
            .map(|p| b.points.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }

    #[test]
    fn examples() {
        let x = set(&[(0.0, 0.0), (1.0, 2.0), (-3.0, 0.5)]);
        assert_eq!(hausdorff(&x, &x).unwrap().distance, 0.0);
        let r = hausdorff(&set(&[(0.0, 0.0)]), &set(&[(3.0, 0.0), (4.0, 0.0)])).unwrap();
        assert_eq!((r.directed_ab, r.directed_ba, r.distance), (3.0, 4.0, 4.0));
        let r = hausdorff(&set(&[(0.0, 0.0), (10.0, 0.0)]), &set(&[(0.0, 0.0)])).unwrap();
        assert_eq!(r.distance, 10.0);
        assert!(hausdorff(&set(&[]), &x).is_err());
    }

    #[test]
    fn matches_brute_force_on_spread_sets() {
        // Deterministic pseudo-random points, clustered and spread.
        let mut s = 12345u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for round in 0..20 {
            let scale = if round % 2 == 0 { 1.0 } else { 100.0 };
            let a =
                SpectralSet::new((0..200).map(|_| Complex64::new(next() * scale, next())).collect(), Provenance::File);
            let b = SpectralSet::new(
                (0..50).map(|_| Complex64::new(next() - 5.0, next() * scale)).collect(),
                Provenance::File,
            );
            let r = hausdorff(&a, &b).unwrap();
            assert_eq!(r.directed_ab, brute(&a, &b));
            assert_eq!(r.directed_ba, brute(&b, &a));
        }
    }

    #[test]
    fn csv_row() {
        let r = HausdorffReport { directed_ab: 1.0, directed_ba: 0.5, distance: 1.0 };
        assert_eq!(r.csv_row(4, 0.1).split(',').count(), 5);
        assert!(r.csv_row(4, 0.1).starts_with("4,"));
    }
}
