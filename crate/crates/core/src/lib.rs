//! Symbolic dynamics on labeled `d`-ary trees.
//!
//! A tree-shift is a set of labelings `t: Σ* → A` of the free monoid on `d` directions,
//! closed under the shifts `σ_w` and defined by finitely many local rules (or as the
//! image of such a set under a sliding block code). This crate decides emptiness,
//! extends patterns, counts blocks exactly and in log-domain, estimates entropy,
//! checks gluing and mixing properties against complete prefix codes, and searches
//! periodic points.

pub mod alphabet;
pub mod cpc;
pub mod decision;
pub mod entropy;
pub mod error;
pub mod fixtures;
pub mod mixing;
pub mod pattern;
pub mod periodic;
pub mod relation;
pub mod shift;
pub mod symset;
pub mod word;

/// Index of a symbol in an [`alphabet::Alphabet`].
pub type Symbol = usize;

pub use alphabet::Alphabet;
pub use cpc::{enumerate_cpcs, validate_cpc, CompletePrefixCode};
pub use error::{Error, Result};
pub use pattern::{Block, Distance, Pattern};
pub use shift::TreeShift;
pub use word::Word;
