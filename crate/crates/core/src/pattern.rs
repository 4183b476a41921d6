//! Finite patterns on prefix-closed supports, blocks, and the tree metric.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::word::{block_size, Word, MAX_ARITY};
use crate::Symbol;

pub(crate) fn check_arity(arity: usize) -> Result<()> {
    if (2..=MAX_ARITY).contains(&arity) {
        Ok(())
    } else {
        Err(Error::BadArity { got: arity, max: MAX_ARITY })
    }
}

/// A labeling of a finite prefix-closed set of words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    arity: usize,
    labels: BTreeMap<Word, Symbol>,
}

impl Pattern {
    pub fn new(arity: usize, labels: BTreeMap<Word, Symbol>) -> Result<Self> {
        check_arity(arity)?;
        if labels.is_empty() {
            return Err(Error::EmptyPattern);
        }
        for w in labels.keys() {
            w.validate(arity)?;
            if let Some(p) = w.parent() {
                if !labels.contains_key(&p) {
                    return Err(Error::NotPrefixClosed(w.to_string()));
                }
            }
        }
        Ok(Pattern { arity, labels })
    }

    pub fn single(arity: usize, sym: Symbol) -> Self {
        Pattern { arity, labels: BTreeMap::from([(Word::root(), sym)]) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, w: &Word) -> Option<Symbol> {
        self.labels.get(w).copied()
    }

    pub fn root(&self) -> Symbol {
        self.labels[&Word::root()]
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.labels.contains_key(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, Symbol)> {
        self.labels.iter().map(|(w, &s)| (w, s))
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.labels.keys()
    }

    pub fn labels(&self) -> &BTreeMap<Word, Symbol> {
        &self.labels
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.labels.values().copied().collect()
    }

    /// One more than the length of the longest support word.
    pub fn height(&self) -> usize {
        self.labels.keys().map(Word::len).max().unwrap_or(0) + 1
    }

    /// Support words with no child in the support.
    pub fn leaves(&self) -> Vec<Word> {
        self.labels
            .keys()
            .filter(|w| (0..self.arity).all(|i| !self.labels.contains_key(&w.child(i))))
            .cloned()
            .collect()
    }

    /// The pattern `v` with `v_x = u_{wx}`.
    pub fn subtree_at(&self, w: &Word) -> Result<Pattern> {
        if !self.contains(w) {
            return Err(Error::WordOutsideSupport(w.to_string()));
        }
        let labels = self
            .labels
            .range(w.clone()..)
            .filter_map(|(x, &s)| x.strip_prefix(w).map(|rest| (rest, s)))
            .collect();
        Ok(Pattern { arity: self.arity, labels })
    }

    /// Restriction to words of length below `height`.
    pub fn truncate(&self, height: usize) -> Pattern {
        let labels = self.labels.iter().filter(|(w, _)| w.len() < height).map(|(w, &s)| (w.clone(), s)).collect();
        Pattern { arity: self.arity, labels }
    }

    pub fn is_block(&self) -> bool {
        self.labels.len() == block_size(self.arity, self.height())
    }

    pub fn to_block(&self) -> Option<Block> {
        if !self.is_block() {
            return None;
        }
        Some(Block { arity: self.arity, height: self.height(), labels: self.labels.values().copied().collect() })
    }

    pub fn from_doc(doc: &PatternDoc, alphabet: &Alphabet) -> Result<Self> {
        let mut labels = BTreeMap::new();
        for (k, v) in &doc.labels {
            labels.insert(k.parse::<Word>()?, alphabet.symbol(v)?);
        }
        Pattern::new(doc.arity, labels)
    }

    pub fn to_doc(&self, alphabet: &Alphabet) -> PatternDoc {
        PatternDoc {
            arity: self.arity,
            labels: self.labels.iter().map(|(w, &s)| (w.to_string(), alphabet.name(s).to_string())).collect(),
        }
    }

    /// Nested tuple rendering `(root,child_0,...)`; a leaf renders as its symbol.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        self.render_at(&Word::root(), alphabet)
    }

    fn render_at(&self, w: &Word, alphabet: &Alphabet) -> String {
        let here = alphabet.name(self.labels[w]).to_string();
        let kids: Vec<Word> = (0..self.arity).map(|i| w.child(i)).collect();
        if kids.iter().all(|k| !self.contains(k)) {
            return here;
        }
        let mut parts = vec![here];
        for k in &kids {
            parts.push(if self.contains(k) { self.render_at(k, alphabet) } else { "_".into() });
        }
        format!("({})", parts.join(","))
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.labels.iter()).finish()
    }
}

/// JSON form: `{"arity":2,"labels":{"":"0","0":"1","1":"1"}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDoc {
    #[serde(default = "default_arity")]
    pub arity: usize,
    pub labels: BTreeMap<String, String>,
}

pub(crate) fn default_arity() -> usize {
    2
}

/// A pattern whose support is every word of length below `height`, stored breadth-first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Block {
    arity: usize,
    height: usize,
    labels: Vec<Symbol>,
}

impl Block {
    pub fn from_labels(arity: usize, height: usize, labels: Vec<Symbol>) -> Result<Self> {
        check_arity(arity)?;
        if height == 0 || labels.len() != block_size(arity, height) {
            return Err(Error::Schema(format!("{} labels do not form a block of height {height}", labels.len())));
        }
        Ok(Block { arity, height, labels })
    }

    pub fn constant(arity: usize, height: usize, sym: Symbol) -> Self {
        Block { arity, height, labels: vec![sym; block_size(arity, height)] }
    }

    /// `(root, σ_0 u, ..., σ_{d-1} u)` reassembled into one block.
    pub fn from_children(root: Symbol, children: &[Block]) -> Result<Self> {
        let arity = children.len();
        check_arity(arity)?;
        let h = children[0].height;
        if children.iter().any(|c| c.height != h || c.arity != arity) {
            return Err(Error::Schema("children have mismatched shapes".into()));
        }
        let mut labels = vec![root];
        let mut level = 1;
        let mut offset = 0;
        for _ in 0..h {
            for c in children {
                labels.extend_from_slice(&c.labels[offset..offset + level]);
            }
            offset += level;
            level *= arity;
        }
        Ok(Block { arity, height: h + 1, labels })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[Symbol] {
        &self.labels
    }

    pub fn root(&self) -> Symbol {
        self.labels[0]
    }

    pub fn get(&self, w: &Word) -> Option<Symbol> {
        if w.len() < self.height {
            Some(self.labels[w.bfs_index(self.arity)])
        } else {
            None
        }
    }

    pub fn words(&self) -> impl Iterator<Item = Word> {
        Word::all_up_to(self.arity, self.height - 1)
    }

    /// The block of height `height - |w|` rooted at `w`.
    pub fn subtree_at(&self, w: &Word) -> Result<Block> {
        if w.len() >= self.height {
            return Err(Error::WordOutsideSupport(w.to_string()));
        }
        let h = self.height - w.len();
        let labels = Word::all_up_to(self.arity, h - 1).map(|x| self.labels[w.concat(&x).bfs_index(self.arity)]).collect();
        Ok(Block { arity: self.arity, height: h, labels })
    }

    pub fn child(&self, dir: usize) -> Result<Block> {
        self.subtree_at(&Word::from_directions([dir]))
    }

    pub fn truncate(&self, height: usize) -> Block {
        let height = height.min(self.height);
        Block { arity: self.arity, height, labels: self.labels[..block_size(self.arity, height)].to_vec() }
    }

    pub fn to_pattern(&self) -> Pattern {
        let labels = self.words().zip(self.labels.iter().copied()).collect();
        Pattern { arity: self.arity, labels }
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        self.to_pattern().render(alphabet)
    }
}

/// Result of comparing two truncated trees under `d(t,t') = 2^{-n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    /// First disagreement at length `n`; distance is exactly `2^{-n}`.
    Exact(u32),
    /// Agreement on every compared word; distance is at most `2^{-n}`.
    AtMost(u32),
}

impl Distance {
    pub fn exponent(&self) -> u32 {
        match *self {
            Distance::Exact(n) | Distance::AtMost(n) => n,
        }
    }

    pub fn value(&self) -> f64 {
        0.5f64.powi(self.exponent() as i32)
    }
}

/// Distance between two patterns compared on all words of length at most `depth`.
pub fn truncated_distance(a: &Pattern, b: &Pattern, depth: usize) -> Result<Distance> {
    let arity = a.arity();
    if b.arity() != arity {
        return Err(Error::AlphabetMismatch);
    }
    for w in Word::all_up_to(arity, depth) {
        match (a.get(&w), b.get(&w)) {
            (Some(x), Some(y)) => {
                if x != y {
                    return Ok(Distance::Exact(w.len() as u32));
                }
            }
            _ => return Err(Error::SupportTooShallow(depth)),
        }
    }
    Ok(Distance::AtMost(depth as u32 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pat(entries: &[(&str, Symbol)]) -> Pattern {
        Pattern::new(2, entries.iter().map(|(w, s)| (w.parse().unwrap(), *s)).collect()).unwrap()
    }

    #[test]
    fn leaves_examples() {
        let b = Block::constant(2, 2, 0).to_pattern();
        let names: Vec<String> = b.leaves().iter().map(|w| w.to_string()).collect();
        assert_eq!(names, ["0", "1"]);
        let p = pat(&[("", 0), ("0", 0), ("1", 0), ("10", 0), ("11", 0)]);
        let names: Vec<String> = p.leaves().iter().map(|w| w.to_string()).collect();
        assert_eq!(names, ["0", "10", "11"]);
        assert_eq!(Pattern::single(2, 1).leaves(), vec![Word::root()]);
    }

    #[test]
    fn block_leaves_are_bottom_level() {
        let b = Block::constant(3, 3, 0).to_pattern();
        let leaves = b.leaves();
        assert_eq!(leaves.len(), 9);
        assert!(leaves.iter().all(|w| w.len() == 2));
    }

    #[test]
    fn rejects_non_prefix_closed() {
        let labels = BTreeMap::from([(Word::root(), 0), ("10".parse().unwrap(), 0)]);
        assert!(matches!(Pattern::new(2, labels), Err(Error::NotPrefixClosed(_))));
    }

    #[test]
    fn subtree_examples() {
        let u = pat(&[("", 0), ("0", 1), ("1", 1)]);
        assert_eq!(u.subtree_at(&Word::root()).unwrap(), u);
        assert_eq!(u.subtree_at(&"0".parse().unwrap()).unwrap(), Pattern::single(2, 1));
        assert!(matches!(u.subtree_at(&"00".parse().unwrap()), Err(Error::WordOutsideSupport(_))));

        let labels: Vec<Symbol> = (0..7).map(|i| i % 2).collect();
        let b = Block::from_labels(2, 3, labels).unwrap();
        let w: Word = "10".parse().unwrap();
        let g = b.subtree_at(&w).unwrap();
        assert_eq!(g.height(), 1);
        assert_eq!(g.root(), b.get(&w).unwrap());
    }

    #[test]
    fn distance_examples() {
        let a = Block::constant(2, 3, 0).to_pattern();
        assert_eq!(truncated_distance(&a, &a, 2).unwrap(), Distance::AtMost(3));
        let b = Block::constant(2, 3, 1).to_pattern();
        assert_eq!(truncated_distance(&a, &b, 2).unwrap(), Distance::Exact(0));
        assert_eq!(truncated_distance(&a, &b, 2).unwrap().value(), 1.0);
        let mut labels = vec![0; 7];
        labels[2] = 1;
        let c = Block::from_labels(2, 3, labels).unwrap().to_pattern();
        assert_eq!(truncated_distance(&a, &c, 2).unwrap().value(), 0.5);
        assert!(matches!(truncated_distance(&a, &a, 3), Err(Error::SupportTooShallow(3))));
    }

    #[test]
    fn render_tuple() {
        let al = Alphabet::numeric(2);
        let u = pat(&[("", 0), ("0", 1), ("1", 0)]);
        assert_eq!(u.render(&al), "(0,1,0)");
        let v = pat(&[("", 0), ("0", 1)]);
        assert_eq!(v.render(&al), "(0,1,_)");
    }

    fn arb_block() -> impl Strategy<Value = Block> {
        (2usize..=3, 1usize..=4).prop_flat_map(|(d, h)| {
            proptest::collection::vec(0usize..3, block_size(d, h)).prop_map(move |l| Block::from_labels(d, h, l).unwrap())
        })
    }

    proptest! {
        #[test]
        fn decomposition_round_trips(b in arb_block()) {
            prop_assume!(b.height() >= 2);
            let kids: Vec<Block> = (0..b.arity()).map(|i| b.child(i).unwrap()).collect();
            for k in &kids {
                prop_assert_eq!(k.height(), b.height() - 1);
            }
            prop_assert_eq!(Block::from_children(b.root(), &kids).unwrap(), b.clone());
            prop_assert_eq!(b.to_pattern().to_block().unwrap(), b);
        }

        #[test]
        fn doc_round_trip(b in arb_block()) {
            let al = Alphabet::numeric(3);
            let p = b.to_pattern();
            let doc = p.to_doc(&al);
            let text = serde_json::to_string(&doc).unwrap();
            let back: PatternDoc = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(Pattern::from_doc(&back, &al).unwrap(), p);
        }

        #[test]
        fn distance_is_symmetric_ultrametric(
            x in proptest::collection::vec(0usize..2, 15),
            y in proptest::collection::vec(0usize..2, 15),
            z in proptest::collection::vec(0usize..2, 15),
        ) {
            let p = |v: Vec<Symbol>| Block::from_labels(2, 4, v).unwrap().to_pattern();
            let (a, b, c) = (p(x), p(y), p(z));
            let d = |s: &Pattern, t: &Pattern| truncated_distance(s, t, 3).unwrap().value();
            prop_assert_eq!(d(&a, &b), d(&b, &a));
            prop_assert!(d(&a, &c) <= d(&a, &b).max(d(&b, &c)));
        }
    }
}
