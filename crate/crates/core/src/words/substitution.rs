use super::{Letter, Word};
use crate::error::{Error, Result};

/// Default iteration bound for the growth check.
const GROWTH_CHECK_STEPS: usize = 64;

/// Largest prefix `substitution_prefix` will materialize.
const PREFIX_CAP: usize = 1 << 26;

/// A letter-to-word morphism with a seed letter whose image starts with itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionRules {
    images: Vec<Word>,
    seed: Letter,
    primitive: bool,
}

impl SubstitutionRules {
    /// `images[c]` is the image of letter `c`.
    pub fn new(images: Vec<Word>, seed: Letter) -> Result<Self> {
        Self::with_growth_bound(images, seed, GROWTH_CHECK_STEPS)
    }

    pub fn with_growth_bound(images: Vec<Word>, seed: Letter, steps: usize) -> Result<Self> {
        let k = images.len();
        if k == 0 || k > 256 {
            return Err(Error::validation("substitution", "needs 1..=256 letters"));
        }
        if usize::from(seed) >= k {
            return Err(Error::validation("seed", "not a letter of the substitution"));
        }
        for (c, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::validation("substitution", format!("image of {c} is empty")));
            }
            if let Some(&bad) = img.iter().find(|&&l| usize::from(l) >= k) {
                return Err(Error::validation("substitution", format!("image of {c} uses unknown letter {bad}")));
            }
        }
        if images[usize::from(seed)][0] != seed {
            return Err(Error::validation("seed", format!("image of the seed {seed} must begin with the seed")));
        }
        check_growth(&images, steps)?;
        let primitive = is_primitive(&images);
        Ok(SubstitutionRules { images, seed, primitive })
    }

    /// `0 ↦ 1, 1 ↦ 10`, seeded at 1.
    pub fn fibonacci() -> Self {
        Self::new(vec![Word::new(vec![1]), Word::new(vec![1, 0])], 1).expect("valid rules")
    }

    /// `0 ↦ 01, 1 ↦ 10`, seeded at 0.
    pub fn thue_morse() -> Self {
        Self::new(vec![Word::new(vec![0, 1]), Word::new(vec![1, 0])], 0).expect("valid rules")
    }

    /// `0 ↦ 01, 1 ↦ 00`, seeded at 0.
    pub fn period_doubling() -> Self {
        Self::new(vec![Word::new(vec![0, 1]), Word::new(vec![0, 0])], 0).expect("valid rules")
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn seed(&self) -> Letter {
        self.seed
    }

    pub fn alphabet_size(&self) -> usize {
        self.images.len()
    }

    /// Every letter occurs in `M^k(c)` for every `c`, for some `k`.
    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    pub fn apply(&self, word: &[Letter]) -> Word {
        let mut out = Vec::with_capacity(word.len() * 2);
        for &l in word {
            out.extend_from_slice(&self.images[usize::from(l)]);
        }
        Word::new(out)
    }
}

/// Image lengths must eventually strictly increase for every letter.
///
/// We iterate the length recursion for `steps` rounds and require that the
/// last non-increase happens in the first half of the window.
fn check_growth(images: &[Word], steps: usize) -> Result<()> {
    let k = images.len();
    let mut lengths = vec![1u128; k];
    let mut last_stall = vec![0usize; k];
    for step in 1..=steps {
        let next: Vec<u128> = images
            .iter()
            .map(|img| img.iter().fold(0u128, |acc, &l| acc.saturating_add(lengths[usize::from(l)])))
            .collect();
        for c in 0..k {
            // Saturation only happens long after growth is established.
            if next[c] <= lengths[c] && next[c] != u128::MAX {
                last_stall[c] = step;
            }
        }
        lengths = next;
    }
    match (0..k).find(|&c| last_stall[c] > steps / 2) {
        Some(c) => Err(Error::validation("substitution", format!("iterated images of letter {c} do not grow"))),
        None => Ok(()),
    }
}

fn is_primitive(images: &[Word]) -> bool {
    let k = images.len();
    let mut incidence = vec![vec![false; k]; k];
    for (c, img) in images.iter().enumerate() {
        for &l in img.iter() {
            incidence[c][usize::from(l)] = true;
        }
    }
    // Wielandt: a primitive k×k pattern has a positive power of order at most (k−1)²+1.
    let bound = (k - 1) * (k - 1) + 1;
    let mut power = incidence.clone();
    for _ in 0..bound {
        if power.iter().all(|row| row.iter().all(|&x| x)) {
            return true;
        }
        let mut next = vec![vec![false; k]; k];
        for i in 0..k {
            for m in 0..k {
                if power[i][m] {
                    for j in 0..k {
                        next[i][j] |= incidence[m][j];
                    }
                }
            }
        }
        power = next;
    }
    false
}

/// `M^steps(seed)`. Each result is a prefix of the next one.
pub fn substitution_prefix(rules: &SubstitutionRules, steps: usize) -> Result<Word> {
    let mut word = Word::new(vec![rules.seed]);
    for _ in 0..steps {
        let projected: usize = word.iter().map(|&l| rules.images[usize::from(l)].len()).sum();
        if projected > PREFIX_CAP {
            return Err(Error::Resource(format!("substitution prefix would exceed {PREFIX_CAP} letters")));
        }
        word = rules.apply(&word);
    }
    Ok(word)
}
