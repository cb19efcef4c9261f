//! De Bruijn words as Eulerian circuits of the de Bruijn graph.

use super::Word;
use crate::error::{Error, Result};

/// Largest word `de_bruijn` builds without an explicit cap.
pub const DEFAULT_SIZE_CAP: usize = 1 << 24;

/// The cyclic de Bruijn word of order `n` over `k` letters, of length `k^n`.
///
/// Built as an Eulerian circuit of the graph on `(n−1)`-words, always taking
/// the smallest unused letter first, then rotated to its lexicographically
/// least rotation so the output is canonical.
pub fn de_bruijn(k: usize, n: usize) -> Result<Word> {
    de_bruijn_capped(k, n, DEFAULT_SIZE_CAP)
}

pub fn de_bruijn_capped(k: usize, n: usize, cap: usize) -> Result<Word> {
    if !(2..=256).contains(&k) {
        return Err(Error::validation("alphabet_size", "must lie in 2..=256"));
    }
    if n == 0 {
        return Err(Error::validation("order", "must be positive"));
    }
    let len = u32::try_from(n)
        .ok()
        .and_then(|n| k.checked_pow(n))
        .filter(|&len| len <= cap)
        .ok_or_else(|| Error::Resource(format!("de Bruijn word {k}^{n} exceeds the cap of {cap} letters")))?;
    let nodes = len / k;

    // Iterative Hierholzer. `next[v]` is the smallest letter not yet used out of v.
    let mut next = vec![0usize; nodes];
    let mut stack = vec![0usize];
    let mut letters_stack: Vec<u8> = Vec::with_capacity(len);
    let mut circuit: Vec<u8> = Vec::with_capacity(len);
    while let Some(&v) = stack.last() {
        if next[v] < k {
            let a = next[v];
            next[v] += 1;
            stack.push((v * k + a) % nodes);
            letters_stack.push(a as u8);
        } else {
            stack.pop();
            if let Some(a) = letters_stack.pop() {
                circuit.push(a);
            }
        }
    }
    circuit.reverse();
    debug_assert_eq!(circuit.len(), len);
    let start = least_rotation(&circuit);
    Ok(Word::new(circuit).rotated(start))
}

/// Start index of the lexicographically least rotation (two-pointer minimal
/// representation, linear time).
fn least_rotation(s: &[u8]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j).min(n.saturating_sub(1))
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    /// Independent construction: concatenation of Lyndon words whose length
    /// divides `n`, in lexicographic order. Yields the least de Bruijn word.
    fn lyndon_oracle(k: usize, n: usize) -> Vec<u8> {
        let mut a = vec![0u8; n + 1];
        let mut out = Vec::new();
        fn rec(t: usize, p: usize, k: usize, n: usize, a: &mut Vec<u8>, out: &mut Vec<u8>) {
            if t > n {
                if n.is_multiple_of(p) {
                    out.extend_from_slice(&a[1..=p]);
                }
            } else {
                a[t] = a[t - p];
                rec(t + 1, p, k, n, a, out);
                for c in a[t - p] as usize + 1..k {
                    a[t] = c as u8;
                    rec(t + 1, t, k, n, a, out);
                }
            }
        }
        rec(1, 1, k, n, &mut a, &mut out);
        out
    }

    fn brute_least_rotation(s: &[u8]) -> usize {
        (0..s.len())
            .min_by_key(|&r| {
                let mut v = s[r..].to_vec();
                v.extend_from_slice(&s[..r]);
                v
            })
            .unwrap()
    }

    #[test]
    fn reference_values() {
        assert_eq!(de_bruijn(2, 3).unwrap().to_string(), "00010111");
        assert_eq!(de_bruijn(2, 1).unwrap().to_string(), "01");
        assert_eq!(de_bruijn(3, 2).unwrap().to_string(), "001021122");
    }

    #[test]
    fn every_window_once() {
        for k in 2..=5usize {
            for n in 1..=12usize {
                let Some(len) = k.checked_pow(n as u32).filter(|&l| l <= 4096) else {
                    continue;
                };
                let w = de_bruijn(k, n).unwrap();
                assert_eq!(w.len(), len);
                let seen: HashSet<Word> = w.cyclic_windows(n).collect();
                assert_eq!(seen.len(), len, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn agrees_with_lyndon_construction() {
        for (k, n) in [(2, 1), (2, 4), (2, 7), (3, 3), (4, 2), (5, 3)] {
            assert_eq!(de_bruijn(k, n).unwrap().letters(), lyndon_oracle(k, n).as_slice());
        }
    }

    #[test]
    fn least_rotation_matches_brute_force() {
        for s in [&b"bca"[..], b"aaa", b"abab", b"baaab", b"cabcab", b"x"] {
            let r = least_rotation(s);
            let mut got = s[r..].to_vec();
            got.extend_from_slice(&s[..r]);
            let b = brute_least_rotation(s);
            let mut want = s[b..].to_vec();
            want.extend_from_slice(&s[..b]);
            assert_eq!(got, want);
        }
    }

    #[test]
    fn size_cap() {
        assert!(matches!(de_bruijn_capped(2, 11, 1024), Err(Error::Resource(_))));
        assert!(de_bruijn(1, 3).is_err());
        assert!(de_bruijn(2, 0).is_err());
    }
}
