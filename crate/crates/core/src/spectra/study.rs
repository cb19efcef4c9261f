use std::fmt::Write as _;

use super::{hausdorff, resolvent_field, sublevel_set, FieldOptions, GridSpec, HausdorffReport, SpectralSet};
use crate::error::{Error, Result};
use crate::floquet::floquet_spectrum;
use crate::operators::BandOperatorSpec;

/// One member `spec_m` of an approximant sequence, with its lower-norm order `N(m)`.
#[derive(Debug, Clone)]
pub struct Approximant {
    pub m: usize,
    pub spec: BandOperatorSpec,
    pub n: usize,
    /// Set when the approximant failed its subword check; the study still runs.
    pub warning: Option<String>,
}

/// How each approximant is turned into a point set.
#[derive(Debug, Clone)]
pub enum StudyMode {
    /// Floquet spectrum of a periodic approximant. Rows carry `eps = 0`.
    Floquet { theta_samples: usize },
    /// Sublevel sets of the resolvent field, one per `ε`.
    Sublevel { grid: GridSpec, eps: Vec<f64>, options: FieldOptions },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Reference,
    /// The previous approximant in the sequence.
    Previous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub m: usize,
    pub eps: f64,
    pub report: HausdorffReport,
    pub against: Comparison,
}

#[derive(Debug, Clone)]
pub struct Study {
    pub rows: Vec<StudyRow>,
    /// Point set of every `(m, ε)`, in sequence order.
    pub sets: Vec<(usize, f64, SpectralSet)>,
    /// Whether distances are non-increasing in `m` for every `ε`. Reported, not enforced.
    pub monotone: bool,
    pub warnings: Vec<String>,
}

impl Study {
    /// CSV `m,eps,d_ab,d_ba,d`, one line per row.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", super::hausdorff::HAUSDORFF_CSV_HEADER);
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.report.csv_row(r.m, r.eps));
        }
        out
    }
}

/// Distances of each approximant's set to `reference`, or to the previous
/// approximant's set when there is no reference.
///
/// An empty set is at distance 0 from another empty set and infinitely far
/// from a non-empty one.
pub fn convergence_study(
    approximants: &[Approximant],
    reference: Option<&SpectralSet>,
    mode: &StudyMode,
) -> Result<Study> {
    if approximants.is_empty() {
        return Err(Error::validation("approximants", "need at least one"));
    }
    let eps_list = match mode {
        StudyMode::Floquet { .. } => vec![0.0],
        StudyMode::Sublevel { eps, .. } if eps.is_empty() => {
            return Err(Error::validation("eps", "need at least one value"))
        }
        StudyMode::Sublevel { eps, .. } => eps.clone(),
    };
    let mut warnings: Vec<String> =
        approximants.iter().filter_map(|a| a.warning.as_ref().map(|w| format!("m = {}: {w}", a.m))).collect();

    let mut sets = Vec::new();
    for a in approximants {
        match mode {
            StudyMode::Floquet { theta_samples } => {
                let s = floquet_spectrum(&a.spec, *theta_samples)?;
                if !s.holes.is_empty() {
                    warnings.push(format!("m = {}: {} θ samples failed", a.m, s.holes.len()));
                }
                sets.push((a.m, 0.0, s));
            }
            StudyMode::Sublevel { grid, eps, options } => {
                let field = resolvent_field(&a.spec, grid, a.n, *options)?;
                let holes = field.holes().count();
                if holes > 0 {
                    warnings.push(format!("m = {}: {holes} grid nodes failed", a.m));
                }
                for &e in eps {
                    sets.push((a.m, e, sublevel_set(&field, e)?));
                }
            }
        }
    }

    let per_m = eps_list.len();
    let mut rows = Vec::new();
    for (i, (m, eps, set)) in sets.iter().enumerate() {
        let (other, against) = match reference {
            Some(r) => (r, Comparison::Reference),
            None if i >= per_m => (&sets[i - per_m].2, Comparison::Previous),
            None => continue,
        };
        rows.push(StudyRow { m: *m, eps: *eps, report: distance(set, other)?, against });
    }

    let monotone = eps_list.iter().all(|&e| {
        let d: Vec<f64> = rows.iter().filter(|r| r.eps == e).map(|r| r.report.distance).collect();
        d.windows(2).all(|w| w[1] <= w[0])
    });
    Ok(Study { rows, sets, monotone, warnings })
}

fn distance(a: &SpectralSet, b: &SpectralSet) -> Result<HausdorffReport> {
    match (a.is_empty(), b.is_empty()) {
        (false, false) => hausdorff(a, b),
        (true, true) => Ok(HausdorffReport { directed_ab: 0.0, directed_ba: 0.0, distance: 0.0 }),
        _ => Ok(HausdorffReport { directed_ab: f64::INFINITY, directed_ba: f64::INFINITY, distance: f64::INFINITY }),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use num_complex::Complex64;

    use super::*;
    use crate::words::{Alphabet, PotentialSource, Word};

    fn periodic(letters: &[u8]) -> BandOperatorSpec {
        let alphabet = Alphabet::new(vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        let src = PotentialSource::periodic(alphabet, Word::new(letters.to_vec())).unwrap();
        let l = BTreeMap::from([(-1, Complex64::new(1.0, 0.0)), (1, Complex64::new(1.0, 0.0))]);
        BandOperatorSpec::schrodinger(&l, 0, Arc::new(src))
    }

    fn approx(m: usize, letters: &[u8]) -> Approximant {
        Approximant { m, spec: periodic(letters), n: 4, warning: None }
    }

    #[test]
    fn identical_iterates_are_at_distance_zero() {
        let seq = [approx(1, &[0, 1]), approx(2, &[0, 1])];
        let s = convergence_study(&seq, None, &StudyMode::Floquet { theta_samples: 32 }).unwrap();
        assert_eq!(s.rows.len(), 1);
        assert_eq!(s.rows[0].report.distance, 0.0);
        assert_eq!(s.rows[0].against, Comparison::Previous);
        assert!(s.monotone);
    }

    #[test]
    fn sublevel_rows_per_eps_and_warnings() {
        let grid = GridSpec::new(-4.0, 4.0, -1.0, 1.0, 9, 3).unwrap();
        let mode = StudyMode::Sublevel { grid, eps: vec![0.5, 0.25], options: FieldOptions::default() };
        let mut b = approx(2, &[0, 0, 1]);
        b.warning = Some("subword condition fails at N = 4".into());
        let s = convergence_study(&[approx(1, &[0, 1]), b], None, &mode).unwrap();
        assert_eq!(s.sets.len(), 4);
        assert_eq!(s.rows.len(), 2);
        assert_eq!(s.warnings.len(), 1);
        assert!(s.to_csv().starts_with("m,eps,d_ab,d_ba,d\n2,"));
    }

    #[test]
    fn reference_comparison() {
        let reference = SpectralSet::sampled_intervals(&[(-3.0, 3.0)], 1e-2).unwrap();
        let seq = [approx(1, &[0]), approx(2, &[0, 1])];
        let s = convergence_study(&seq, Some(&reference), &StudyMode::Floquet { theta_samples: 64 }).unwrap();
        assert_eq!(s.rows.len(), 2);
        assert!(s.rows.iter().all(|r| r.against == Comparison::Reference));
    }
}
