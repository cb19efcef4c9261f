//! Finite and infinite words over finite complex alphabets.
//!
//! Letters are stored as indices into an [`Alphabet`]; the complex letter
//! values only matter once a word is placed on a diagonal of an operator.

mod analysis;
mod debruijn;
mod format;
mod source;
mod substitution;
mod surd;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use analysis::{
    check_full_alphabet, check_subword_condition, gap_profile, prefix_periodization, subword_set, Gap, GapProfile,
    SubwordReport, SubwordSet,
};
pub use debruijn::{de_bruijn, de_bruijn_capped, DEFAULT_SIZE_CAP};
pub use format::{parse_source, write_source};
pub use source::{OutOfWindow, PotentialSource, ScanRange, SourceKind};
pub use substitution::{substitution_prefix, SubstitutionRules};
pub use surd::{QuadSurd, RotationParams};

/// Letter index into an [`Alphabet`].
pub type Letter = u8;

/// An ordered, finite set of pairwise distinct complex letters.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    letters: Vec<Complex64>,
}

impl Alphabet {
    pub fn new(letters: Vec<Complex64>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::validation("alphabet", "must not be empty"));
        }
        if letters.len() > usize::from(Letter::MAX) + 1 {
            return Err(Error::validation("alphabet", "at most 256 letters"));
        }
        for (i, a) in letters.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::validation("alphabet", "letters must be finite"));
            }
            if letters[..i].contains(a) {
                return Err(Error::validation("alphabet", format!("duplicate letter {a}")));
            }
        }
        Ok(Alphabet { letters })
    }

    pub fn real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The alphabet `{0, 1, …, k−1}`.
    pub fn indices(k: usize) -> Result<Self> {
        Self::new((0..k).map(|i| Complex64::new(i as f64, 0.0)).collect())
    }

    /// The `q`-th roots of unity, `e^{2πij/q}` for `j = 0..q`.
    pub fn roots_of_unity(q: usize) -> Result<Self> {
        Self::new(
            (0..q).map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / q as f64)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Complex64] {
        &self.letters
    }

    pub fn value(&self, letter: Letter) -> Complex64 {
        self.letters[usize::from(letter)]
    }

    pub fn max_abs(&self) -> f64 {
        self.letters.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn check_word(&self, word: &Word) -> Result<()> {
        match word.iter().find(|&&l| usize::from(l) >= self.len()) {
            Some(l) => Err(Error::validation(
                "letters",
                format!("index {l} out of range for an alphabet of {} letters", self.len()),
            )),
            None => Ok(()),
        }
    }
}

/// A finite word, stored as letter indices. The empty word is allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    /// The letter at cyclic position `i`.
    pub fn cyclic(&self, i: i64) -> Letter {
        self.0[i.rem_euclid(self.0.len() as i64) as usize]
    }

    /// All length-`n` windows of the word read cyclically (one per start position).
    pub fn cyclic_windows(&self, n: usize) -> impl Iterator<Item = Word> + '_ {
        (0..self.len()).map(move |s| Word((0..n).map(|t| self.cyclic((s + t) as i64)).collect()))
    }

    /// The rotation starting at position `k`.
    pub fn rotated(&self, k: usize) -> Word {
        let k = k % self.len().max(1);
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }
}

impl std::ops::Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l < 10) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Parses either a digit string (`"00010111"`) or space-separated indices.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse =
            |tok: &str| tok.parse::<Letter>().map_err(|_| Error::validation("word", format!("bad letter `{tok}`")));
        if s.contains(char::is_whitespace) {
            s.split_whitespace().map(parse).collect::<Result<Vec<_>>>().map(Word)
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as Letter)
                        .ok_or_else(|| Error::validation("word", format!("bad letter `{c}`")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Word)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_invariants() {
        assert!(Alphabet::new(vec![]).is_err());
        assert!(Alphabet::real(&[1.0, 1.0]).is_err());
        assert!(Alphabet::real(&[f64::NAN]).is_err());
        let roots = Alphabet::roots_of_unity(3).unwrap();
        assert_eq!(roots.len(), 3);
        assert!((roots.value(1).re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn word_parsing_and_display() {
        let w: Word = "00010111".parse().unwrap();
        assert_eq!(w.letters(), &[0, 0, 0, 1, 0, 1, 1, 1]);
        assert_eq!(w.to_string(), "00010111");
        let v: Word = "0 12 3".parse().unwrap();
        assert_eq!(v.to_string(), "0 12 3");
        assert!("01x".parse::<Word>().is_err());
        assert_eq!("".parse::<Word>().unwrap(), Word::empty());
    }

    #[test]
    fn cyclic_helpers() {
        let w: Word = "011".parse().unwrap();
        assert_eq!(w.cyclic(-1), 1);
        assert_eq!(w.rotated(1).to_string(), "110");
        let wins: Vec<String> = w.cyclic_windows(2).map(|x| x.to_string()).collect();
        assert_eq!(wins, ["01", "11", "10"]);
    }
}
