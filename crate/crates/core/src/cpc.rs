//! Complete prefix codes: validation and canonical enumeration.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{check_arity, default_arity};
use crate::word::Word;

/// A finite prefix-free set of nonempty words covering every word of length `|P|`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompletePrefixCode {
    arity: usize,
    words: Vec<Word>,
}

impl CompletePrefixCode {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn leaf_count(&self) -> usize {
        self.words.len()
    }

    /// `|P|`: the length of the longest element.
    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn min_len(&self) -> usize {
        self.words.iter().map(Word::len).min().unwrap_or(0)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// `Σ^k`.
    pub fn uniform(arity: usize, k: usize) -> Self {
        CompletePrefixCode { arity, words: Word::all_of_length(arity, k).collect() }
    }

    /// `Some(k)` when the code is `Σ^k`.
    pub fn uniform_len(&self) -> Option<usize> {
        let k = self.max_len();
        (self.min_len() == k).then_some(k)
    }

    /// Proper prefixes of code words (always contains the root), canonical order.
    pub fn interior(&self) -> Vec<Word> {
        let set: BTreeSet<Word> = self.words.iter().flat_map(|w| w.proper_prefixes().collect::<Vec<_>>()).collect();
        set.into_iter().collect()
    }

    /// The element of the code that prefixes `w`, if any.
    pub fn prefix_of(&self, w: &Word) -> Option<&Word> {
        (1..=w.len().min(self.max_len()))
            .map(|k| Word::from_directions(w.directions().take(k)))
            .find_map(|p| self.words.binary_search(&p).ok().map(|i| &self.words[i]))
    }

    pub fn to_doc(&self) -> CpcDoc {
        CpcDoc { arity: self.arity, code: self.words.iter().map(|w| w.to_string()).collect() }
    }

    pub fn from_doc(doc: &CpcDoc) -> Result<Self> {
        let words = doc.code.iter().map(|s| s.parse()).collect::<Result<Vec<Word>>>()?;
        validate_cpc(words, doc.arity)
    }
}

impl fmt::Debug for CompletePrefixCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CompletePrefixCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.words.iter().map(|w| w.to_string()).collect();
        parts.sort();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// JSON form: `{"arity":2,"code":["0","10","11"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CpcDoc {
    #[serde(default = "default_arity")]
    pub arity: usize,
    pub code: Vec<String>,
}

/// `Σ_{x∈P} d^{-|x|}` as an exact fraction over `d^{|P|}`.
pub fn kraft_sum(words: &[Word], arity: usize) -> (BigUint, BigUint) {
    let max = words.iter().map(Word::len).max().unwrap_or(0);
    let d = BigUint::from(arity);
    let denom = d.pow(max as u32);
    let numer = words.iter().fold(BigUint::zero(), |acc, w| acc + d.pow((max - w.len()) as u32));
    (numer, denom)
}

/// First word of length `|P|` (canonical order) with no prefix in `words`.
fn uncovered_word(words: &BTreeSet<Word>, arity: usize, max: usize) -> Option<Word> {
    fn walk(w: Word, words: &BTreeSet<Word>, arity: usize, max: usize) -> Option<Word> {
        if words.contains(&w) {
            return None;
        }
        if w.len() >= max {
            return Some(w);
        }
        (0..arity).find_map(|i| walk(w.child(i), words, arity, max))
    }
    walk(Word::root(), words, arity, max).map(|w| {
        let pad = max - w.len();
        w.concat(&Word::from_directions(std::iter::repeat_n(0, pad)))
    })
}

pub fn validate_cpc(words: impl IntoIterator<Item = Word>, arity: usize) -> Result<CompletePrefixCode> {
    check_arity(arity)?;
    let set: BTreeSet<Word> = words.into_iter().collect();
    if set.is_empty() {
        return Err(Error::Schema("complete prefix code is empty".into()));
    }
    for w in &set {
        w.validate(arity)?;
        if w.is_root() {
            return Err(Error::ContainsEmptyWord);
        }
    }
    for w in &set {
        if let Some(p) = w.proper_prefixes().find(|p| set.contains(p)) {
            return Err(Error::NotPrefixFree(p.to_string(), w.to_string()));
        }
    }
    let list: Vec<Word> = set.iter().cloned().collect();
    let (numer, denom) = kraft_sum(&list, arity);
    let kraft_complete = numer == denom;
    let max = list.iter().map(Word::len).max().unwrap_or(0);
    let uncovered = uncovered_word(&set, arity, max);
    assert_eq!(kraft_complete, uncovered.is_none(), "Kraft equality and cover scan disagree for {list:?}");
    if let Some(u) = uncovered {
        let kraft = ratio_to_f64(&numer, &denom);
        return Err(Error::Incomplete { kraft, uncovered: u.to_string() });
    }
    Ok(CompletePrefixCode { arity, words: list })
}

fn ratio_to_f64(n: &BigUint, d: &BigUint) -> f64 {
    let scale = BigUint::from(1u64 << 52);
    let q: BigUint = n * &scale / d;
    q.to_string().parse::<f64>().unwrap_or(f64::NAN) / (1u64 << 52) as f64
}

/// Shape of a full d-ary tree; leaves are code words.
#[derive(Clone, Debug)]
enum Shape {
    Leaf,
    Node { parts: Vec<usize>, kids: Vec<Shape> },
}

fn feasible(arity: usize, leaves: usize) -> bool {
    leaves >= 1 && (leaves - 1) % (arity - 1) == 0
}

/// Lexicographically smallest composition of `n` into `arity` feasible parts.
fn first_parts(arity: usize, n: usize) -> Option<Vec<usize>> {
    if n < arity || !feasible(arity, n) {
        return None;
    }
    let mut parts = vec![1; arity];
    parts[arity - 1] = n - (arity - 1);
    Some(parts)
}

fn next_parts(arity: usize, parts: &mut [usize]) -> bool {
    let n: usize = parts.iter().sum();
    let step = arity - 1;
    for i in (0..arity - 1).rev() {
        let head: usize = parts[..i].iter().sum();
        let candidate = parts[i] + step;
        let rest_slots = arity - 1 - i;
        if head + candidate + rest_slots <= n {
            parts[i] = candidate;
            for p in parts.iter_mut().take(arity - 1).skip(i + 1) {
                *p = 1;
            }
            let used: usize = parts[..arity - 1].iter().sum();
            parts[arity - 1] = n - used;
            return true;
        }
    }
    false
}

impl Shape {
    fn first(arity: usize, n: usize) -> Option<Shape> {
        if n == 1 {
            return Some(Shape::Leaf);
        }
        let parts = first_parts(arity, n)?;
        let kids = parts.iter().map(|&p| Shape::first(arity, p)).collect::<Option<Vec<_>>>()?;
        Some(Shape::Node { parts, kids })
    }

    /// Advance to the next shape with the same leaf count.
    fn advance(&mut self, arity: usize) -> bool {
        let Shape::Node { parts, kids } = self else { return false };
        for i in (0..kids.len()).rev() {
            if kids[i].advance(arity) {
                for j in i + 1..kids.len() {
                    kids[j] = Shape::first(arity, parts[j]).expect("feasible part");
                }
                return true;
            }
        }
        if next_parts(arity, parts) {
            *kids = parts.iter().map(|&p| Shape::first(arity, p).expect("feasible part")).collect();
            return true;
        }
        false
    }

    fn collect(&self, prefix: Word, out: &mut Vec<Word>) {
        match self {
            Shape::Leaf => out.push(prefix),
            Shape::Node { kids, .. } => {
                for (i, k) in kids.iter().enumerate() {
                    k.collect(prefix.child(i), out);
                }
            }
        }
    }
}

/// Every complete prefix code with at most `max_leaves` elements, each exactly once.
///
/// Order: by element count, then by the leaf counts of the root's subtrees
/// (lexicographic, direction 0 most significant), then recursively by subtree.
pub fn enumerate_cpcs(arity: usize, max_leaves: usize) -> CpcStream {
    CpcStream { arity, max_leaves, leaves: arity, shape: Shape::first(arity, arity) }
}

pub struct CpcStream {
    arity: usize,
    max_leaves: usize,
    leaves: usize,
    shape: Option<Shape>,
}

impl Iterator for CpcStream {
    type Item = CompletePrefixCode;

    fn next(&mut self) -> Option<Self::Item> {
        if self.leaves > self.max_leaves {
            return None;
        }
        let shape = self.shape.as_mut()?;
        let mut words = Vec::new();
        shape.collect(Word::root(), &mut words);
        words.sort();
        let code = CompletePrefixCode { arity: self.arity, words };
        if !shape.advance(self.arity) {
            self.leaves += self.arity - 1;
            self.shape = Shape::first(self.arity, self.leaves);
        }
        Some(code)
    }
}

/// Number of full d-ary trees with `leaves` leaves (Fuss–Catalan).
pub fn cpc_count(arity: usize, leaves: usize) -> BigUint {
    if !feasible(arity, leaves) || leaves < arity {
        return BigUint::zero();
    }
    let k = (leaves - 1) / (arity - 1);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(arity * k - i) / BigUint::from(i + 1);
    }
    c / BigUint::from((arity - 1) * k + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn validation_examples() {
        let p = validate_cpc(words(&["0", "10", "11"]), 2).unwrap();
        assert_eq!(p.max_len(), 2);
        let (n, d) = kraft_sum(p.words(), 2);
        assert_eq!(n, d);
        assert_eq!(validate_cpc(words(&["0", "1"]), 2).unwrap().max_len(), 1);
        match validate_cpc(words(&["0"]), 2) {
            Err(Error::Incomplete { kraft, uncovered }) => {
                assert_eq!(kraft, 0.5);
                assert_eq!(uncovered, "1");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(validate_cpc(words(&["0", "01", "1"]), 2), Err(Error::NotPrefixFree(..))));
        assert!(matches!(validate_cpc(words(&["", "1"]), 2), Err(Error::ContainsEmptyWord)));
    }

    #[test]
    fn stream_order_small() {
        let all: Vec<String> = enumerate_cpcs(2, 3).map(|c| c.to_string()).collect();
        assert_eq!(all, ["{0,1}", "{0,10,11}", "{00,01,1}"]);
        assert_eq!(enumerate_cpcs(2, 4).count(), 8);
    }

    #[test]
    fn stream_counts_follow_fuss_catalan() {
        for arity in 2..=3 {
            let mut per_size = std::collections::BTreeMap::<usize, usize>::new();
            for c in enumerate_cpcs(arity, 9) {
                assert!(validate_cpc(c.words().to_vec(), arity).is_ok());
                *per_size.entry(c.leaf_count()).or_default() += 1;
            }
            for (&n, &count) in &per_size {
                assert_eq!(BigUint::from(count), cpc_count(arity, n), "arity {arity} leaves {n}");
            }
        }
        let total: usize = enumerate_cpcs(2, 8).count();
        assert_eq!(total, 1 + 2 + 5 + 14 + 42 + 132 + 429);
    }

    #[test]
    fn stream_has_no_duplicates() {
        let all: Vec<CompletePrefixCode> = enumerate_cpcs(2, 7).collect();
        let set: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
    }

    #[test]
    fn interior_and_uniform() {
        let p = validate_cpc(words(&["0", "10", "11"]), 2).unwrap();
        let inner: Vec<String> = p.interior().iter().map(|w| w.to_string()).collect();
        assert_eq!(inner, ["", "1"]);
        assert_eq!(p.uniform_len(), None);
        assert_eq!(CompletePrefixCode::uniform(2, 3).uniform_len(), Some(3));
        assert_eq!(p.prefix_of(&"101".parse().unwrap()).map(|w| w.to_string()), Some("10".into()));
    }

    proptest! {
        // Kraft equality and the cover scan agree on arbitrary prefix-free sets;
        // validate_cpc asserts this internally, so any disagreement panics.
        #[test]
        fn kraft_matches_cover_scan(raw in proptest::collection::btree_set(proptest::collection::vec(0usize..2, 1..5), 1..10)) {
            let set: BTreeSet<Word> = raw.into_iter().map(Word::from_directions).collect();
            let prefix_free = set.iter().all(|w| w.proper_prefixes().all(|p| !set.contains(&p)));
            prop_assume!(prefix_free);
            let list: Vec<Word> = set.iter().cloned().collect();
            let (n, d) = kraft_sum(&list, 2);
            let max = list.iter().map(Word::len).max().unwrap();
            let brute = Word::all_of_length(2, max).all(|w| list.iter().any(|p| p.is_prefix_of(&w)));
            prop_assert_eq!(n == d, brute);
            prop_assert_eq!(validate_cpc(list, 2).is_ok(), brute);
        }
    }
}
