//! Direction words addressing nodes of the infinite d-ary tree.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Largest arity supported by the textual word format (one decimal digit per direction).
pub const MAX_ARITY: usize = 10;

/// A finite sequence of directions in `0..d`. The empty word is the root.
///
/// Words order by length first and lexicographically within a length; this is the
/// canonical enumeration order used by every search in the crate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn root() -> Self {
        Word(Vec::new())
    }

    pub fn from_directions(dirs: impl IntoIterator<Item = usize>) -> Self {
        Word(dirs.into_iter().map(|d| d as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn directions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&d| d as usize)
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().map(|&d| d as usize)
    }

    pub fn child(&self, dir: usize) -> Word {
        let mut v = self.0.clone();
        v.push(dir as u8);
        Word(v)
    }

    pub fn parent(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `self = prefix · rest` gives `rest`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|s| Word(s.to_vec()))
    }

    /// All proper prefixes, shortest first (includes the root, excludes `self`).
    pub fn proper_prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.0.len()).map(move |k| Word(self.0[..k].to_vec()))
    }

    /// Position of this word in the breadth-first layout of a block.
    pub fn bfs_index(&self, arity: usize) -> usize {
        let mut offset = 0;
        let mut level = 1;
        for _ in 0..self.0.len() {
            offset += level;
            level *= arity;
        }
        let value = self.0.iter().fold(0usize, |acc, &d| acc * arity + d as usize);
        offset + value
    }

    pub fn from_bfs_index(arity: usize, mut index: usize) -> Word {
        let mut len = 0;
        let mut level = 1;
        while index >= level {
            index -= level;
            level *= arity;
            len += 1;
        }
        let mut dirs = vec![0u8; len];
        for slot in dirs.iter_mut().rev() {
            *slot = (index % arity) as u8;
            index /= arity;
        }
        Word(dirs)
    }

    /// Every word of exactly length `len`, in canonical order.
    pub fn all_of_length(arity: usize, len: usize) -> impl Iterator<Item = Word> {
        let start = Word(vec![0; len]).bfs_index(arity);
        let count = arity.pow(len as u32);
        (start..start + count).map(move |i| Word::from_bfs_index(arity, i))
    }

    /// Every word of length at most `max_len`, in canonical order.
    pub fn all_up_to(arity: usize, max_len: usize) -> impl Iterator<Item = Word> {
        (0..block_size(arity, max_len + 1)).map(move |i| Word::from_bfs_index(arity, i))
    }

    pub fn validate(&self, arity: usize) -> Result<(), Error> {
        match self.0.iter().find(|&&d| d as usize >= arity) {
            Some(&d) => Err(Error::DirectionOutOfRange { direction: d as usize, arity }),
            None => Ok(()),
        }
    }
}

/// Number of nodes in a block of height `height`: `(d^n - 1)/(d - 1)`.
pub fn block_size(arity: usize, height: usize) -> usize {
    let mut total = 0;
    let mut level = 1;
    for _ in 0..height {
        total += level;
        level *= arity;
    }
    total
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{self}")
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| Error::BadWord(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}
