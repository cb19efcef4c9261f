use std::sync::Arc;

use super::{substitution_prefix, Alphabet, Letter, RotationParams, SubstitutionRules, Word};
use crate::error::{Error, Result};

/// An inclusive range `lo..=hi` of letter positions to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScanRange {
    pub lo: i64,
    pub hi: i64,
}

impl ScanRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::validation("scan-range", format!("empty range {lo}..={hi}")));
        }
        Ok(ScanRange { lo, hi })
    }

    /// `-r..=r`.
    pub fn symmetric(r: i64) -> Self {
        ScanRange { lo: -r.abs(), hi: r.abs() }
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// What an [`OutOfWindow`] explicit word does outside its letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutOfWindow {
    Error,
    Constant(Letter),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SourceKind {
    /// `b(n) = word[(n − origin) mod |word|]`.
    Periodic { word: Word, origin: i64 },
    /// The one-sided prefix `M^steps(seed)` placed at positions `1..=len`.
    SubstitutionPrefix { rules: SubstitutionRules, steps: usize, prefix: Arc<Word> },
    /// `b(n) = χ_[lo,hi)(n·α mod 1)` over a two-letter alphabet.
    Rotation(RotationParams),
    /// `b(base + i) = word[i]`; elsewhere governed by the out-of-window rule.
    ExplicitWindow { word: Word, base: i64, outside: OutOfWindow },
}

/// A finitely described bi-infinite (or partially defined) word over a
/// complex alphabet; the potential of an operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSource {
    alphabet: Alphabet,
    kind: SourceKind,
}

impl PotentialSource {
    pub fn periodic(alphabet: Alphabet, word: Word) -> Result<Self> {
        Self::periodic_with_origin(alphabet, word, 0)
    }

    pub fn periodic_with_origin(alphabet: Alphabet, word: Word, origin: i64) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::validation("period", "periodic word must be non-empty"));
        }
        alphabet.check_word(&word)?;
        Ok(PotentialSource { alphabet, kind: SourceKind::Periodic { word, origin } })
    }

    /// The constant word `letter` repeated.
    pub fn constant(alphabet: Alphabet, letter: Letter) -> Result<Self> {
        Self::periodic(alphabet, Word::new(vec![letter]))
    }

    pub fn substitution(alphabet: Alphabet, rules: SubstitutionRules, steps: usize) -> Result<Self> {
        if rules.alphabet_size() != alphabet.len() {
            return Err(Error::validation("alphabet", "size differs from the substitution's"));
        }
        let prefix = Arc::new(substitution_prefix(&rules, steps)?);
        Ok(PotentialSource { alphabet, kind: SourceKind::SubstitutionPrefix { rules, steps, prefix } })
    }

    pub fn rotation(alphabet: Alphabet, params: RotationParams) -> Result<Self> {
        if alphabet.len() != 2 {
            return Err(Error::validation("alphabet", "rotation words need exactly two letters"));
        }
        Ok(PotentialSource { alphabet, kind: SourceKind::Rotation(params) })
    }

    /// The golden-rotation Fibonacci word over `{0, 1}`.
    pub fn fibonacci() -> Self {
        Self::rotation(Alphabet::indices(2).expect("valid"), RotationParams::fibonacci()).expect("valid")
    }

    pub fn window(alphabet: Alphabet, word: Word, base: i64, outside: OutOfWindow) -> Result<Self> {
        alphabet.check_word(&word)?;
        if let OutOfWindow::Constant(c) = outside {
            if usize::from(c) >= alphabet.len() {
                return Err(Error::validation("outside", "constant letter not in the alphabet"));
            }
        }
        Ok(PotentialSource { alphabet, kind: SourceKind::ExplicitWindow { word, base, outside } })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> &SourceKind {
        &self.kind
    }

    /// Same word over a different alphabet of the same size.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Self> {
        if alphabet.len() != self.alphabet.len() {
            return Err(Error::validation("alphabet", "relabelling must keep the alphabet size"));
        }
        Ok(PotentialSource { alphabet, kind: self.kind.clone() })
    }

    /// Every finite subword occurs infinitely often.
    pub fn self_contained(&self) -> bool {
        match &self.kind {
            SourceKind::Periodic { .. } | SourceKind::Rotation(_) => true,
            SourceKind::SubstitutionPrefix { rules, .. } => rules.is_primitive(),
            SourceKind::ExplicitWindow { .. } => false,
        }
    }

    /// Least known period: the word length for periodic sources, the
    /// denominator for rational rotations.
    pub fn period(&self) -> Option<usize> {
        match &self.kind {
            SourceKind::Periodic { word, .. } => Some(word.len()),
            SourceKind::Rotation(p) => p.period(),
            _ => None,
        }
    }

    pub fn letter(&self, n: i64) -> Result<Letter> {
        match &self.kind {
            SourceKind::Periodic { word, origin } => Ok(word.cyclic(n - origin)),
            SourceKind::SubstitutionPrefix { prefix, .. } => {
                if n >= 1 && (n as usize) <= prefix.len() {
                    Ok(prefix[(n - 1) as usize])
                } else {
                    Err(Error::Domain { index: n, message: format!("substitution prefix covers 1..={}", prefix.len()) })
                }
            }
            SourceKind::Rotation(p) => Ok(p.letter(n)),
            SourceKind::ExplicitWindow { word, base, outside } => {
                let i = n - base;
                if i >= 0 && (i as usize) < word.len() {
                    Ok(word[i as usize])
                } else {
                    match outside {
                        OutOfWindow::Constant(c) => Ok(*c),
                        OutOfWindow::Error => Err(Error::Domain {
                            index: n,
                            message: format!("explicit window covers {}..={}", base, base + word.len() as i64 - 1),
                        }),
                    }
                }
            }
        }
    }

    /// Letters at positions `start..start+len`.
    pub fn letters(&self, start: i64, len: usize) -> Result<Vec<Letter>> {
        (start..start + len as i64).map(|n| self.letter(n)).collect()
    }

    pub fn value(&self, n: i64) -> Result<num_complex::Complex64> {
        Ok(self.alphabet.value(self.letter(n)?))
    }
}
