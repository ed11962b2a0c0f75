//! Permutations of `𝔖_N`, snippet (left coset / tabloid) enumeration for a
//! Young subgroup `𝔖_ν`, canonical coset representatives and coset signs.
//!
//! A snippet is stored as a word over component labels `1..=κ`; label `i`
//! occurs exactly `ν_i` times. Letters `a, b, c, …` are used for display.

use std::collections::HashMap;
use std::fmt;

use crate::{Error, Partition, Result};

/// Default cap on the number of snippets `D_ν` held in memory.
pub const DEFAULT_SNIPPET_CAP: u128 = 5_000_000;

/// A permutation in one-line notation over `1..=N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(Error::OutOfRange(format!(
                    "{images:?} is not a permutation of 1..={n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            images: (1..=n).collect(),
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn inversions(&self) -> usize {
        let p = &self.images;
        (0..p.len())
            .map(|i| p[i + 1..].iter().filter(|&&q| q < p[i]).count())
            .sum()
    }

    /// `ε(P)`: +1 for even, -1 for odd permutations.
    pub fn sign(&self) -> i8 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.images.len() >= 10 { " " } else { "" };
        let text: Vec<String> = self.images.iter().map(ToString::to_string).collect();
        write!(f, "{}", text.join(sep))
    }
}

pub fn perm_sign(p: &Perm) -> i8 {
    p.sign()
}

/// One ordering of the mixture's components along the line.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Snippet {
    word: Vec<u8>,
}

impl Snippet {
    /// Checks that `word` has content `mixture`.
    pub fn new(word: Vec<u8>, mixture: &Partition) -> Result<Self> {
        if word.len() != mixture.n() {
            return Err(Error::DimensionMismatch {
                expected: mixture.n(),
                actual: word.len(),
            });
        }
        let mut counts = vec![0usize; mixture.len()];
        for &c in &word {
            let idx = usize::from(c)
                .checked_sub(1)
                .filter(|&i| i < counts.len())
                .ok_or_else(|| Error::OutOfRange(format!("label {c} for {mixture}")))?;
            counts[idx] += 1;
        }
        if counts != mixture.parts() {
            return Err(Error::InvalidPartition(format!(
                "word content {counts:?} does not match {mixture}"
            )));
        }
        Ok(Snippet { word })
    }

    /// Parses letters (`a` = component 1, …).
    pub fn from_letters(text: &str, mixture: &Partition) -> Result<Self> {
        let word = text
            .chars()
            .map(letter_label)
            .collect::<Option<Vec<u8>>>()
            .ok_or_else(|| Error::Parse {
                context: format!("snippet `{text}`"),
                message: "expected letters a-z or A-Z".into(),
            })?;
        Snippet::new(word, mixture)
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn letters(&self) -> String {
        word_letters(&self.word)
    }

    /// Exchanges positions `k` and `k+1` (1-based). `Ok(None)` when both
    /// positions hold the same component, so the swap leaves the snippet
    /// unchanged and carries no exchange weight.
    pub fn adjacent_swap(&self, k: usize) -> Result<Option<Snippet>> {
        let n = self.word.len();
        if k == 0 || k >= n {
            return Err(Error::OutOfRange(format!(
                "swap position {k} for N = {n} (must be 1..={})",
                n.saturating_sub(1)
            )));
        }
        if self.word[k - 1] == self.word[k] {
            return Ok(None);
        }
        let mut word = self.word.clone();
        word.swap(k - 1, k);
        Ok(Some(Snippet { word }))
    }

    /// The coset representative `P̄`: the positions of each component, read
    /// left to right, get that component's particle labels in increasing
    /// order. Component `i` owns labels `N₁+…+N_{i-1}+1 ..= N₁+…+N_i`.
    pub fn coset_representative(&self) -> Perm {
        let kappa = self.word.iter().copied().max().unwrap_or(0) as usize;
        let mut next = vec![0usize; kappa + 1];
        for &c in &self.word {
            next[c as usize] += 1;
        }
        // exclusive prefix sums give each component's first label minus one
        let mut offset = 0;
        for slot in next.iter_mut().skip(1) {
            let count = *slot;
            *slot = offset;
            offset += count;
        }
        let images = self
            .word
            .iter()
            .map(|&c| {
                next[c as usize] += 1;
                next[c as usize]
            })
            .collect();
        Perm { images }
    }

    /// `sign(P𝔖_ν) = ε(P̄)`.
    pub fn coset_sign(&self) -> i8 {
        word_sign(&self.word)
    }
}

impl fmt::Debug for Snippet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letters())
    }
}

/// Sign of the coset representative, computed straight from the word: an
/// inversion of `P̄` is a pair of positions whose labels are out of order,
/// which happens exactly when the left position holds a later component.
fn word_sign(word: &[u8]) -> i8 {
    let mut inversions = 0usize;
    for (i, &a) in word.iter().enumerate() {
        inversions += word[i + 1..].iter().filter(|&&b| b < a).count();
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn letter_label(ch: char) -> Option<u8> {
    match ch {
        'a'..='z' => Some(ch as u8 - b'a' + 1),
        'A'..='Z' => Some(ch as u8 - b'A' + 27),
        _ => None,
    }
}

/// Display letter for a component label: `a..z`, then `A..Z`.
pub fn label_letter(label: u8) -> char {
    match label {
        1..=26 => (b'a' + label - 1) as char,
        27..=52 => (b'A' + label - 27) as char,
        _ => '?',
    }
}

pub fn word_letters(word: &[u8]) -> String {
    word.iter().map(|&c| label_letter(c)).collect()
}

/// All snippets of a mixture in lexicographic word order, with their signs.
#[derive(Clone, Debug)]
pub struct SnippetSpace {
    mixture: Partition,
    words: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    signs: Vec<i8>,
}

impl SnippetSpace {
    pub fn enumerate(mixture: &Partition) -> Result<Self> {
        Self::enumerate_capped(mixture, DEFAULT_SNIPPET_CAP)
    }

    pub fn enumerate_capped(mixture: &Partition, cap: u128) -> Result<Self> {
        let dim = mixture.multinomial();
        if dim > cap {
            return Err(Error::CapExceeded {
                what: "snippet count",
                value: dim,
                cap,
            });
        }
        if mixture.len() > 52 {
            return Err(Error::OutOfRange(format!("{} components", mixture.len())));
        }
        let mut word: Vec<u8> = mixture
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(i, &count)| std::iter::repeat_n(i as u8 + 1, count))
            .collect();
        let mut words = Vec::with_capacity(dim as usize);
        loop {
            words.push(word.clone());
            if !next_permutation(&mut word) {
                break;
            }
        }
        debug_assert_eq!(words.len() as u128, dim);
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let signs = words.iter().map(|w| word_sign(w)).collect();
        Ok(SnippetSpace {
            mixture: mixture.clone(),
            words,
            index,
            signs,
        })
    }

    pub fn mixture(&self) -> &Partition {
        &self.mixture
    }

    /// `D_ν`.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn n(&self) -> usize {
        self.mixture.n()
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.words[i]
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.words
    }

    pub fn snippet(&self, i: usize) -> Snippet {
        Snippet {
            word: self.words[i].clone(),
        }
    }

    pub fn position(&self, word: &[u8]) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn sign(&self, i: usize) -> i8 {
        self.signs[i]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Index of the neighbour reached by swapping positions `k, k+1`
    /// (1-based), or `None` when both hold the same component.
    pub fn neighbour(&self, i: usize, k: usize) -> Option<usize> {
        let w = &self.words[i];
        if w[k - 1] == w[k] {
            return None;
        }
        let mut swapped = w.clone();
        swapped.swap(k - 1, k);
        self.index.get(&swapped).copied()
    }
}

pub fn enumerate_snippets(mixture: &Partition) -> Result<SnippetSpace> {
    SnippetSpace::enumerate(mixture)
}

/// Next multiset permutation in lexicographic order; false after the last.
fn next_permutation(v: &mut [u8]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::partitions_of;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn brute_inversions(images: &[usize]) -> usize {
        let mut count = 0;
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                if images[i] > images[j] {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn perm_sign_examples() {
        assert_eq!(perm_sign(&Perm::identity(4)), 1);
        assert_eq!(perm_sign(&Perm::new(vec![2, 1, 3, 4]).unwrap()), -1);
        let p = Perm::new(vec![1, 5, 6, 2, 3, 8, 7, 4]).unwrap();
        assert_eq!(brute_inversions(p.images()), 9);
        assert_eq!(perm_sign(&p), -1);
        assert!(Perm::new(vec![1, 1, 2]).is_err());
        assert!(Perm::new(vec![0, 1]).is_err());
    }

    #[test]
    fn snippets_of_two_two() {
        let space = enumerate_snippets(&p(&[2, 2])).unwrap();
        let letters: Vec<String> = space.words().iter().map(|w| word_letters(w)).collect();
        assert_eq!(letters, ["aabb", "abab", "abba", "baab", "baba", "bbaa"]);
        assert_eq!(enumerate_snippets(&p(&[5])).unwrap().len(), 1);
        assert_eq!(enumerate_snippets(&p(&[1, 1, 1, 1, 1])).unwrap().len(), 120);
    }

    #[test]
    fn snippet_count_is_multinomial() {
        for n in 1..=8 {
            for nu in partitions_of(n).unwrap() {
                let space = enumerate_snippets(&nu).unwrap();
                assert_eq!(space.len() as u128, nu.multinomial(), "{nu}");
                for (i, w) in space.words().iter().enumerate() {
                    assert_eq!(space.position(w), Some(i));
                }
            }
        }
    }

    #[test]
    fn snippet_cap_is_on_dimension() {
        let err = SnippetSpace::enumerate_capped(&p(&[1, 1, 1, 1]), 23).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
        // a long path-graph mixture is fine even though N is large
        let path = p(&[29, 1]);
        assert_eq!(enumerate_snippets(&path).unwrap().len(), 30);
    }

    #[test]
    fn coset_representative_examples() {
        let nu = p(&[4, 3, 1]);
        let s = Snippet::from_letters("abbaacba", &nu).unwrap();
        assert_eq!(s.coset_representative().to_string(), "15623874");
        assert_eq!(s.coset_sign(), -1);
        let q = p(&[2, 2]);
        assert_eq!(
            Snippet::from_letters("aabb", &q).unwrap().coset_representative(),
            Perm::identity(4)
        );
        assert_eq!(
            Snippet::from_letters("bbaa", &q).unwrap().coset_representative().images(),
            &[3, 4, 1, 2]
        );
        assert_eq!(Snippet::from_letters("aabb", &q).unwrap().coset_sign(), 1);
    }

    #[test]
    fn representative_is_a_section() {
        for n in 1..=6 {
            for nu in partitions_of(n).unwrap() {
                // component of each particle label
                let mut owner = Vec::new();
                for (i, &count) in nu.parts().iter().enumerate() {
                    owner.extend(std::iter::repeat_n(i as u8 + 1, count));
                }
                let space = enumerate_snippets(&nu).unwrap();
                for i in 0..space.len() {
                    let s = space.snippet(i);
                    let rep = s.coset_representative();
                    let back: Vec<u8> = rep.images().iter().map(|&l| owner[l - 1]).collect();
                    assert_eq!(back, s.word());
                    assert_eq!(rep.sign(), s.coset_sign());
                    assert_eq!(space.sign(i), s.coset_sign());
                }
            }
        }
    }

    #[test]
    fn adjacent_swap_examples() {
        let q = p(&[2, 2]);
        let abab = Snippet::from_letters("abab", &q).unwrap();
        assert_eq!(abab.adjacent_swap(1).unwrap().unwrap().letters(), "baab");
        let aabb = Snippet::from_letters("aabb", &q).unwrap();
        assert_eq!(aabb.adjacent_swap(1).unwrap(), None);
        let abba = Snippet::from_letters("abba", &q).unwrap();
        let once = abba.adjacent_swap(1).unwrap().unwrap();
        assert_eq!(once.adjacent_swap(1).unwrap().unwrap(), abba);
        assert!(abba.adjacent_swap(0).is_err());
        assert!(abba.adjacent_swap(4).is_err());
    }

    #[test]
    fn swaps_flip_the_coset_sign() {
        for n in 2..=6 {
            for nu in partitions_of(n).unwrap() {
                let space = enumerate_snippets(&nu).unwrap();
                for i in 0..space.len() {
                    let s = space.snippet(i);
                    for k in 1..n {
                        if let Some(t) = s.adjacent_swap(k).unwrap() {
                            assert_eq!(t.coset_sign(), -s.coset_sign());
                            assert_eq!(t.adjacent_swap(k).unwrap().unwrap(), s);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn snippet_validation() {
        let q = p(&[2, 1]);
        assert!(Snippet::new(vec![1, 1, 1], &q).is_err());
        assert!(Snippet::new(vec![1, 2], &q).is_err());
        assert!(Snippet::new(vec![1, 3, 1], &q).is_err());
        assert!(Snippet::from_letters("a1b", &q).is_err());
    }
}
