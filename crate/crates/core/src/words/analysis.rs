//! Subword sets, occurrence gaps, and the equal-subwords condition.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::{Letter, OutOfWindow, PotentialSource, ScanRange, SourceKind, Word};
use crate::error::{Error, Result};

/// How much of the infinite word a [`Sample`] determines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Coverage {
    /// `letters` holds one period plus wrap-around; window starts `0..period`.
    Periodic { period: usize },
    /// Explicit window with a constant extension on both sides.
    EventuallyConstant { constant: Letter },
    /// Only the scanned range is known.
    Scanned,
}

struct Sample {
    first: i64,
    letters: Vec<Letter>,
    coverage: Coverage,
    n: usize,
}

impl Sample {
    fn take(source: &PotentialSource, n: usize, scan: Option<ScanRange>) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("N", "window length must be positive"));
        }
        if let Some(p) = source.period() {
            return Ok(Sample {
                first: 0,
                letters: source.letters(0, p + n - 1)?,
                coverage: Coverage::Periodic { period: p },
                n,
            });
        }
        if let SourceKind::ExplicitWindow { word, base, outside: OutOfWindow::Constant(c) } = source.kind() {
            let first = base - n as i64;
            return Ok(Sample {
                first,
                letters: source.letters(first, word.len() + 2 * n)?,
                coverage: Coverage::EventuallyConstant { constant: *c },
                n,
            });
        }
        let scan = scan.ok_or_else(|| Error::validation("scan-range", "required for sources that are not periodic"))?;
        Ok(Sample { first: scan.lo, letters: source.letters(scan.lo, scan.len())?, coverage: Coverage::Scanned, n })
    }

    fn window_count(&self) -> usize {
        match self.coverage {
            Coverage::Periodic { period } => period,
            _ => (self.letters.len() + 1).saturating_sub(self.n),
        }
    }

    fn windows(&self) -> impl Iterator<Item = (i64, &[Letter])> + '_ {
        (0..self.window_count()).map(move |s| (self.first + s as i64, &self.letters[s..s + self.n]))
    }

    fn exact(&self) -> bool {
        self.coverage != Coverage::Scanned
    }
}

/// The distinct length-`n` subwords seen in a source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubwordSet {
    pub n: usize,
    pub words: BTreeSet<Word>,
    /// `false` when only a finite scan of the word was examined.
    pub exact: bool,
    pub scan: Option<ScanRange>,
}

impl SubwordSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }
}

/// `W_n` of a source. Periodic sources and eventually-constant windows are
/// exact; everything else needs a scan range and yields a scanned estimate.
pub fn subword_set(source: &PotentialSource, n: usize, scan: Option<ScanRange>) -> Result<SubwordSet> {
    let sample = Sample::take(source, n, scan)?;
    let seen: HashSet<&[Letter]> = sample.windows().map(|(_, w)| w).collect();
    Ok(SubwordSet {
        n,
        words: seen.into_iter().map(Word::from).collect(),
        exact: sample.exact(),
        scan: (!sample.exact()).then_some(scan).flatten(),
    })
}

/// Occurrence gap of a subword: the least `r` such that balls of radius `r`
/// around its occurrences cover the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gap {
    Finite(u64),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapProfile {
    pub n: usize,
    pub per_word: BTreeMap<Word, Gap>,
    /// `g(N)`: the maximum over `per_word`.
    pub max: Gap,
    /// `false` for scanned sources, whose values are lower estimates.
    pub exact: bool,
}

pub fn gap_profile(source: &PotentialSource, n: usize, scan: Option<ScanRange>) -> Result<GapProfile> {
    let sample = Sample::take(source, n, scan)?;
    let mut positions: HashMap<&[Letter], Vec<i64>> = HashMap::new();
    for (pos, w) in sample.windows() {
        positions.entry(w).or_default().push(pos);
    }
    let max_step = |pos: &[i64]| pos.windows(2).map(|p| (p[1] - p[0]) as u64).max().unwrap_or(1);
    let mut per_word = BTreeMap::new();
    for (w, pos) in positions {
        let gap = match sample.coverage {
            Coverage::Periodic { period } => {
                let wrap = (pos[0] + period as i64 - pos[pos.len() - 1]) as u64;
                Gap::Finite(max_step(&pos).max(wrap) / 2)
            }
            Coverage::EventuallyConstant { constant } => {
                if w.iter().all(|&l| l == constant) {
                    Gap::Finite(max_step(&pos) / 2)
                } else {
                    Gap::Infinite
                }
            }
            Coverage::Scanned => Gap::Finite(if pos.len() > 1 { max_step(&pos) / 2 } else { 0 }),
        };
        per_word.insert(Word::from(w), gap);
    }
    let max = per_word.values().copied().max().unwrap_or(Gap::Finite(0));
    Ok(GapProfile { n, per_word, max, exact: sample.exact() })
}

/// Outcome of comparing `W_N(target)` with `W_N(approximant)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubwordReport {
    pub n: usize,
    pub equal: bool,
    /// In the target but not in the approximant.
    pub missing: BTreeSet<Word>,
    /// In the approximant but not in the target.
    pub extra: BTreeSet<Word>,
    pub exact: bool,
}

fn report(n: usize, target: &SubwordSet, approx: &SubwordSet) -> SubwordReport {
    let missing: BTreeSet<Word> = target.words.difference(&approx.words).cloned().collect();
    let extra: BTreeSet<Word> = approx.words.difference(&target.words).cloned().collect();
    SubwordReport {
        n,
        equal: missing.is_empty() && extra.is_empty(),
        missing,
        extra,
        exact: target.exact && approx.exact,
    }
}

pub fn check_subword_condition(
    target: &PotentialSource,
    approximant: &PotentialSource,
    n: usize,
    scan: Option<ScanRange>,
) -> Result<SubwordReport> {
    if target.alphabet() != approximant.alphabet() {
        return Err(Error::validation("alphabet", "target and approximant use different alphabets"));
    }
    let t = subword_set(target, n, scan)?;
    let a = subword_set(approximant, n, scan)?;
    Ok(report(n, &t, &a))
}

/// The condition against a pseudoergodic target, whose `W_N` is all of `Σ^N`.
pub fn check_full_alphabet(approximant: &PotentialSource, n: usize, scan: Option<ScanRange>) -> Result<SubwordReport> {
    let k = approximant.alphabet().len();
    let total = u32::try_from(n)
        .ok()
        .and_then(|e| k.checked_pow(e))
        .filter(|&t| t <= 1 << 22)
        .ok_or_else(|| Error::Resource(format!("|Σ|^N = {k}^{n} is too large to enumerate")))?;
    let mut words = BTreeSet::new();
    for mut code in 0..total {
        let mut w = vec![0 as Letter; n];
        for slot in w.iter_mut().rev() {
            *slot = (code % k) as Letter;
            code /= k;
        }
        words.insert(Word::new(w));
    }
    let full = SubwordSet { n, words, exact: true, scan: None };
    let a = subword_set(approximant, n, scan)?;
    Ok(report(n, &full, &a))
}

/// Periodic approximant from a prefix of a one-sided word.
///
/// Finds the least `r` with `W_N(b|_{1..r}) = W_N(b)`, then the first
/// recurrence `k ≥ r+1` of the prefix `b_1..b_N` (absolute positions in `b`),
/// and repeats `b_1..b_{k−1}` with period `k − 1`, aligned so that position 1
/// of the result is `b_1`. `W_N(b)` is taken from `scan`, which must start at
/// or before position 1; the result is checked to have the same `W_N`.
pub fn prefix_periodization(source: &PotentialSource, n: usize, scan: ScanRange) -> Result<PotentialSource> {
    if scan.lo > 1 {
        return Err(Error::validation("scan-range", "must include position 1"));
    }
    let target = subword_set(source, n, Some(scan))?;
    let horizon = scan.hi;
    if horizon < n as i64 + 1 {
        return Err(Error::validation("scan-range", "too short for the requested N"));
    }
    let b = source.letters(1, horizon as usize)?; // b[i] is position i + 1
    let mut seen: HashSet<&[Letter]> = HashSet::new();
    let mut r = None;
    for end in n..=b.len() {
        let w = &b[end - n..end];
        if seen.insert(w) && !target.words.contains(&Word::from(w)) {
            return Err(Error::validation(
                "source",
                format!("subword {} of the half-axis restriction is absent from the scanned W_N", Word::from(w)),
            ));
        }
        if seen.len() == target.len() {
            r = Some(end);
            break;
        }
    }
    let r = r.ok_or_else(|| {
        Error::SearchExhausted(format!("W_{n} of the scanned word is not reached by prefixes up to {horizon}"))
    })?;
    let head = &b[..n];
    let recurrence = (r + 1..=b.len() + 1 - n).find(|&k| &b[k - 1..k - 1 + n] == head).ok_or_else(|| {
        Error::SearchExhausted(format!("prefix of length {n} does not recur after position {r} within {horizon}"))
    })?;
    let period = recurrence - 1;
    let result = PotentialSource::periodic_with_origin(source.alphabet().clone(), Word::from(&b[..period]), 1)?;
    let got = subword_set(&result, n, None)?;
    if got.words != target.words {
        return Err(Error::validation(
            "source",
            "periodization changed W_N; the half-axis restriction does not carry all subwords",
        ));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{de_bruijn, Alphabet};

    fn binary() -> Alphabet {
        Alphabet::indices(2).unwrap()
    }

    fn periodic(s: &str) -> PotentialSource {
        PotentialSource::periodic(binary(), s.parse().unwrap()).unwrap()
    }

    fn words(set: &BTreeSet<Word>) -> Vec<String> {
        set.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn de_bruijn_word_has_all_triples() {
        let s = subword_set(&periodic("00010111"), 3, None).unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.exact);
    }

    #[test]
    fn fibonacci_complexity_small() {
        let s = subword_set(&PotentialSource::fibonacci(), 4, Some(ScanRange::symmetric(500))).unwrap();
        assert_eq!(s.len(), 5);
        assert!(!s.exact);
    }

    #[test]
    fn constant_word() {
        let s = subword_set(&periodic("0"), 5, None).unwrap();
        assert_eq!(words(&s.words), ["00000"]);
    }

    #[test]
    fn scan_required_for_rotation() {
        assert!(subword_set(&PotentialSource::fibonacci(), 3, None).is_err());
    }

    #[test]
    fn window_scan_out_of_range_is_a_domain_error() {
        let w = PotentialSource::window(binary(), "0110".parse().unwrap(), 0, OutOfWindow::Error).unwrap();
        assert!(matches!(subword_set(&w, 2, Some(ScanRange::new(-1, 3).unwrap())), Err(Error::Domain { .. })));
        assert_eq!(subword_set(&w, 2, Some(ScanRange::new(0, 3).unwrap())).unwrap().len(), 3);
    }

    #[test]
    fn gaps() {
        let g = gap_profile(&periodic("01"), 2, None).unwrap();
        assert_eq!(g.per_word[&"01".parse::<Word>().unwrap()], Gap::Finite(1));
        let g = gap_profile(&periodic("0"), 3, None).unwrap();
        assert_eq!(g.max, Gap::Finite(0));
        let g = gap_profile(&periodic("0001"), 1, None).unwrap();
        assert_eq!(g.per_word[&"1".parse::<Word>().unwrap()], Gap::Finite(2));
        assert_eq!(g.per_word[&"0".parse::<Word>().unwrap()], Gap::Finite(1));
        assert_eq!(g.max, Gap::Finite(2));
        assert!(g.exact);
    }

    #[test]
    fn spike_has_unbounded_gaps() {
        let spike = PotentialSource::window(binary(), "1".parse().unwrap(), 7, OutOfWindow::Constant(0)).unwrap();
        let g = gap_profile(&spike, 2, None).unwrap();
        // "00" is missing only at positions 6 and 7.
        assert_eq!(g.per_word[&"00".parse::<Word>().unwrap()], Gap::Finite(1));
        assert_eq!(g.per_word[&"10".parse::<Word>().unwrap()], Gap::Infinite);
        assert_eq!(g.max, Gap::Infinite);
    }

    #[test]
    fn spike_is_the_negative_example() {
        let zero = periodic("0");
        let spike = PotentialSource::window(binary(), "1".parse().unwrap(), 3, OutOfWindow::Constant(0)).unwrap();
        let r = check_subword_condition(&zero, &spike, 1, None).unwrap();
        assert!(!r.equal);
        assert!(r.missing.is_empty());
        assert_eq!(words(&r.extra), ["1"]);
    }

    #[test]
    fn self_comparison_is_equal() {
        let f = PotentialSource::fibonacci();
        let r = check_subword_condition(&f, &f, 6, Some(ScanRange::symmetric(300))).unwrap();
        assert!(r.equal && r.missing.is_empty() && r.extra.is_empty());
    }

    #[test]
    fn alphabet_mismatch() {
        let a = periodic("01");
        let b = PotentialSource::periodic(Alphabet::real(&[-1.0, 1.0]).unwrap(), "01".parse().unwrap()).unwrap();
        assert!(matches!(check_subword_condition(&a, &b, 1, None), Err(Error::Validation { .. })));
    }

    #[test]
    fn fibonacci_periodization_n2() {
        let p = prefix_periodization(&PotentialSource::fibonacci(), 2, ScanRange::new(-200, 200).unwrap()).unwrap();
        match p.kind() {
            SourceKind::Periodic { word, origin } => {
                assert_eq!(word.to_string(), "10110");
                assert_eq!(*origin, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        let r = check_subword_condition(&PotentialSource::fibonacci(), &p, 2, Some(ScanRange::symmetric(200))).unwrap();
        assert!(r.equal);
    }

    #[test]
    fn de_bruijn_periodization() {
        let db = PotentialSource::window(
            binary(),
            de_bruijn(2, 3).unwrap().letters().repeat(40).into(),
            1,
            OutOfWindow::Error,
        )
        .unwrap();
        let p = prefix_periodization(&db, 3, ScanRange::new(1, 320).unwrap()).unwrap();
        assert_eq!(subword_set(&p, 3, None).unwrap().len(), 8);
    }

    #[test]
    fn full_alphabet_check() {
        let db = periodic(&de_bruijn(2, 4).unwrap().to_string());
        for n in 1..=4 {
            assert!(check_full_alphabet(&db, n, None).unwrap().equal);
        }
        let r = check_full_alphabet(&db, 5, None).unwrap();
        assert!(!r.equal && r.extra.is_empty() && r.missing.len() == 16);
    }
}
