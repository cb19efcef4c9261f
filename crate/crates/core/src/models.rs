//! Catalog of example operators, each with a periodic approximant sequence `m ↦ b_m`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{BandOperatorSpec, DiagonalSpec};
use crate::spectra::{Approximant, SpectralSet};
use crate::words::{
    check_full_alphabet, check_subword_condition, de_bruijn, prefix_periodization, Alphabet, PotentialSource,
    RotationParams, ScanRange, SubwordReport, Word,
};

/// A model of the catalog with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// `S + S⁻¹ + M_b` with pseudoergodic `b` over a real alphabet.
    AndersonSa { sigma: Vec<f64> },
    /// `½S + 2S⁻¹ + M_b` with pseudoergodic `b`.
    AndersonNsa { sigma: Vec<Complex64> },
    /// `S + S⁻¹ + M_b` with the golden-rotation Fibonacci word over `{0, 1}`.
    FibonacciSa,
    /// As [`Model::FibonacciSa`] with the potential multiplied by `−i`.
    FibonacciNsa,
    /// `S + S⁻¹M_b` with pseudoergodic `b` over the `q`-th roots of unity.
    Hopping { q: usize },
    /// `M_b + S M_c` with `b` over `{−2, 2}` and `c` over `{3, 4}`, jointly pseudoergodic.
    Oneway,
}

/// One member of a model's approximant sequence.
#[derive(Debug, Clone)]
pub struct ModelInstance {
    pub model: Model,
    pub m: usize,
    /// The operator with periodic approximant potentials.
    pub spec: BandOperatorSpec,
    /// Approximant potentials, in diagonal order.
    pub sources: Vec<Arc<PotentialSource>>,
    /// Scheduled lower-norm order `N(m)`.
    pub n: usize,
    /// Subword condition of the approximant at `N(m)`.
    pub check: SubwordReport,
}

impl ModelInstance {
    pub fn approximant(&self) -> Approximant {
        let warning = (!self.check.equal).then(|| {
            format!(
                "subword condition fails at N = {} ({} missing, {} extra)",
                self.n,
                self.check.missing.len(),
                self.check.extra.len()
            )
        });
        Approximant { m: self.m, spec: self.spec.clone(), n: self.n, warning }
    }
}

const FIBONACCI_SCAN_MIN: i64 = 10_000;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Model {
    /// Every model with default parameters.
    pub fn catalog() -> Vec<Model> {
        ["anderson_sa", "anderson_nsa", "fibonacci_sa", "fibonacci_nsa", "hopping", "oneway"]
            .iter()
            .map(|n| n.parse().expect("catalog names parse"))
            .collect()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::AndersonSa { .. } => "anderson_sa",
            Model::AndersonNsa { .. } => "anderson_nsa",
            Model::FibonacciSa => "fibonacci_sa",
            Model::FibonacciNsa => "fibonacci_nsa",
            Model::Hopping { .. } => "hopping",
            Model::Oneway => "oneway",
        }
    }

    pub fn description(&self) -> String {
        match self {
            Model::AndersonSa { sigma } => format!("S + S^-1 + M_b, b pseudoergodic over {sigma:?}"),
            Model::AndersonNsa { .. } => "0.5 S + 2 S^-1 + M_b, b pseudoergodic".into(),
            Model::FibonacciSa => "S + S^-1 + M_b, b the Fibonacci rotation word over {0, 1}".into(),
            Model::FibonacciNsa => "S + S^-1 + M_b, b the Fibonacci rotation word over {0, -i}".into(),
            Model::Hopping { q } => format!("S + S^-1 M_b, b pseudoergodic over the {q}-th roots of unity"),
            Model::Oneway => "M_b + S M_c, (b, c) pseudoergodic over {-2, 2} x {3, 4}".into(),
        }
    }

    /// The approximant at level `m`.
    ///
    /// Pseudoergodic models use de Bruijn words of order `m` with `N(m) = m`.
    /// Fibonacci models use the prefix periodization at `N = m`, and `N(m)` is
    /// the largest `N ≥ m` at which the subword condition still holds.
    pub fn build(&self, m: usize) -> Result<ModelInstance> {
        if m == 0 {
            return Err(Error::validation("m", "must be at least 1"));
        }
        match self {
            Model::AndersonSa { sigma } => {
                let alphabet = Alphabet::real(sigma)?;
                self.pseudoergodic(m, alphabet, &[(-1, c(1.0, 0.0)), (1, c(1.0, 0.0))], 0)
            }
            Model::AndersonNsa { sigma } => {
                let alphabet = Alphabet::new(sigma.clone())?;
                self.pseudoergodic(m, alphabet, &[(-1, c(2.0, 0.0)), (1, c(0.5, 0.0))], 0)
            }
            Model::Hopping { q } => self.pseudoergodic(m, Alphabet::roots_of_unity(*q)?, &[(1, c(1.0, 0.0))], -1),
            Model::FibonacciSa | Model::FibonacciNsa => self.fibonacci(m),
            Model::Oneway => self.oneway(m),
        }
    }

    fn pseudoergodic(&self, m: usize, alphabet: Alphabet, l: &[(i64, Complex64)], gamma: i64) -> Result<ModelInstance> {
        let word = de_bruijn(alphabet.len(), m)?;
        let source = Arc::new(PotentialSource::periodic(alphabet, word)?);
        let check = check_full_alphabet(&source, m, None)?;
        let l: BTreeMap<i64, Complex64> = l.iter().copied().collect();
        let spec = BandOperatorSpec::schrodinger(&l, gamma, Arc::clone(&source));
        Ok(ModelInstance { model: self.clone(), m, spec, sources: vec![source], n: m, check })
    }

    /// The aperiodic target potential, for models that have one.
    pub fn target_source(&self) -> Option<PotentialSource> {
        match self {
            Model::FibonacciSa => Some(PotentialSource::fibonacci()),
            Model::FibonacciNsa => Some(
                PotentialSource::fibonacci()
                    .with_alphabet(Alphabet::new(vec![c(0.0, 0.0), c(0.0, -1.0)]).ok()?)
                    .ok()?,
            ),
            _ => None,
        }
    }

    /// The operator with the target potential, for models that have one.
    pub fn target_spec(&self) -> Option<BandOperatorSpec> {
        let source = Arc::new(self.target_source()?);
        Some(BandOperatorSpec::schrodinger(&laplacian_l(), 0, source))
    }

    fn fibonacci(&self, m: usize) -> Result<ModelInstance> {
        let target = self.target_source().expect("Fibonacci models have a target");
        let scan = ScanRange::symmetric(FIBONACCI_SCAN_MIN.max(40 * m as i64));
        let source = prefix_periodization(&target, m, scan)?;
        let period = source.period().expect("periodic") as i64;
        let scan = ScanRange::symmetric(FIBONACCI_SCAN_MIN.max(20 * period));
        let mut n = m;
        let mut check = check_subword_condition(&target, &source, n, Some(scan))?;
        loop {
            let next = check_subword_condition(&target, &source, n + 1, Some(scan))?;
            if !next.equal {
                break;
            }
            (n, check) = (n + 1, next);
        }
        let source = Arc::new(source);
        let spec = BandOperatorSpec::schrodinger(&laplacian_l(), 0, Arc::clone(&source));
        Ok(ModelInstance { model: self.clone(), m, spec, sources: vec![source], n, check })
    }

    fn oneway(&self, m: usize) -> Result<ModelInstance> {
        let (sb, sc) = oneway_alphabets();
        let k = sc.len();
        let joint = de_bruijn(sb.len() * k, m)?;
        let b = Word::new(joint.letters().iter().map(|&x| x / k as u8).collect());
        let cw = Word::new(joint.letters().iter().map(|&x| x % k as u8).collect());
        let joint_source = PotentialSource::periodic(Alphabet::indices(sb.len() * k)?, joint)?;
        let check = check_full_alphabet(&joint_source, m, None)?;
        let b = Arc::new(PotentialSource::periodic(sb, b)?);
        let cw = Arc::new(PotentialSource::periodic(sc, cw)?);
        let spec = BandOperatorSpec::multi_diagonal(vec![
            DiagonalSpec::potential(0, Arc::clone(&b)),
            DiagonalSpec::potential(1, Arc::clone(&cw)),
        ])?;
        Ok(ModelInstance { model: self.clone(), m, spec, sources: vec![b, cw], n: m, check })
    }

    /// The exact spectrum as a union of real intervals, when known in closed form.
    ///
    /// For the self-adjoint Anderson model this is `Σ + [−2, 2]`, merged.
    pub fn reference_intervals(&self) -> Option<Vec<(f64, f64)>> {
        let Model::AndersonSa { sigma } = self else { return None };
        let mut iv: Vec<(f64, f64)> = sigma.iter().map(|&s| (s - 2.0, s + 2.0)).collect();
        iv.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (lo, hi) in iv {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        Some(merged)
    }

    /// [`Model::reference_intervals`] sampled at spacing `step`.
    pub fn reference(&self, step: f64) -> Option<Result<SpectralSet>> {
        self.reference_intervals().map(|iv| SpectralSet::sampled_intervals(&iv, step))
    }

    /// Alternative Fibonacci approximant: the rotation word with `α` replaced by
    /// its `m`-th continued fraction convergent.
    pub fn fibonacci_convergent(&self, m: u32) -> Result<BandOperatorSpec> {
        let target = self
            .target_source()
            .ok_or_else(|| Error::validation("model", format!("{} has no rotation word", self.name())))?;
        let source = PotentialSource::rotation(target.alphabet().clone(), RotationParams::fibonacci_convergent(m)?)?;
        Ok(BandOperatorSpec::schrodinger(&laplacian_l(), 0, Arc::new(source)))
    }
}

fn laplacian_l() -> BTreeMap<i64, Complex64> {
    BTreeMap::from([(-1, c(1.0, 0.0)), (1, c(1.0, 0.0))])
}

fn oneway_alphabets() -> (Alphabet, Alphabet) {
    (Alphabet::real(&[-2.0, 2.0]).expect("valid"), Alphabet::real(&[3.0, 4.0]).expect("valid"))
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Hopping { q } => write!(f, "hopping({q})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    /// Accepts the catalog names; `hopping` takes an optional `(q)` suffix, default 3.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("hopping") {
            let q = match rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                Some(q) => q.trim().parse().map_err(|_| Error::validation("model", format!("bad q in `{s}`")))?,
                None if rest.is_empty() => 3,
                None => return Err(Error::validation("model", format!("unknown model `{s}`"))),
            };
            if q < 2 {
                return Err(Error::validation("q", "need at least 2 states"));
            }
            return Ok(Model::Hopping { q });
        }
        match s {
            "anderson_sa" => Ok(Model::AndersonSa { sigma: vec![-3.0, 3.0] }),
            "anderson_nsa" => Ok(Model::AndersonNsa { sigma: vec![c(-3.0, 0.0), c(3.0, 0.0)] }),
            "fibonacci_sa" => Ok(Model::FibonacciSa),
            "fibonacci_nsa" => Ok(Model::FibonacciNsa),
            "oneway" => Ok(Model::Oneway),
            _ => Err(Error::validation("model", format!("unknown model `{s}`"))),
        }
    }
}

/// Whether `z` lies in the closed regular `2q`-gon with vertices `2e^{iπk/q}`, up to `tol`.
pub fn in_hopping_polygon(q: usize, z: Complex64, tol: f64) -> bool {
    let sides = 2 * q;
    let apothem = 2.0 * (PI / sides as f64).cos();
    (0..sides).all(|k| {
        let normal = Complex64::from_polar(1.0, PI * (2 * k + 1) as f64 / sides as f64);
        (z * normal.conj()).re <= apothem + tol
    })
}
