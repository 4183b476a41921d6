use std::collections::{BTreeMap, BTreeSet};

use super::TreeShift;
use crate::alphabet::Alphabet;
use crate::decision::{enumerate_blocks, locally_admissible, locally_admissible_blocks};
use crate::error::{Error, Result};
use crate::pattern::Block;
use crate::word::Word;
use crate::Symbol;

/// An `m`-block map `Φ` from the blocks of an input shift to an output alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlidingBlockCode {
    input: TreeShift,
    window: usize,
    output: Alphabet,
    table: BTreeMap<Block, Symbol>,
}

impl SlidingBlockCode {
    /// The table must cover every locally admissible `window`-block of the input.
    pub fn new(input: TreeShift, window: usize, output: Alphabet, table: BTreeMap<Block, Symbol>) -> Result<Self> {
        if window == 0 {
            return Err(Error::Schema("window must be at least 1".into()));
        }
        if table.keys().any(|b| b.height() != window || b.arity() != input.arity()) {
            return Err(Error::Schema(format!("table keys must be {window}-blocks")));
        }
        if table.values().any(|&o| o >= output.len()) {
            return Err(Error::Schema("table output outside the output alphabet".into()));
        }
        for b in locally_admissible_blocks(&input, window, usize::MAX)? {
            if !table.contains_key(&b) {
                return Err(Error::MissingTableEntry(b.render(input.alphabet())));
            }
        }
        Ok(SlidingBlockCode { input, window, output, table })
    }

    pub fn input(&self) -> &TreeShift {
        &self.input
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn table(&self) -> &BTreeMap<Block, Symbol> {
        &self.table
    }

    pub fn lookup(&self, b: &Block) -> Option<Symbol> {
        self.table.get(b).copied()
    }
}

/// `v_x = Φ(m-block of u rooted at x)` for every `|x| ≤ n - m`.
pub fn apply_block_map(code: &SlidingBlockCode, u: &Block) -> Result<Block> {
    let m = code.window;
    if u.height() < m {
        return Err(Error::HeightTooSmall { height: u.height(), window: m });
    }
    if !locally_admissible(&u.to_pattern(), &code.input)? {
        return Err(Error::InadmissibleInput);
    }
    let h = u.height() - m + 1;
    let labels = Word::all_up_to(u.arity(), h - 1)
        .map(|x| {
            let window = u.subtree_at(&x).expect("inside block").truncate(m);
            code.lookup(&window).ok_or(Error::InadmissibleInput)
        })
        .collect::<Result<Vec<_>>>()?;
    Block::from_labels(u.arity(), h, labels)
}

/// The height-`n` blocks of the image: images of `B_{n+m-1}` of the input, deduplicated.
pub fn image_blocks(code: &SlidingBlockCode, n: usize, limit: usize) -> Result<BTreeSet<Block>> {
    let sources = enumerate_blocks(&code.input, n + code.window - 1, limit)?;
    sources.iter().map(|u| apply_block_map(code, u)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn two_block(labels: [Symbol; 3]) -> Block {
        Block::from_labels(2, 2, labels.to_vec()).unwrap()
    }

    #[test]
    fn even_shift_block_map_examples() {
        let TreeShift::SoficImage(code) = fixtures::even_shift() else { panic!() };
        assert_eq!(apply_block_map(&code, &two_block([0, 0, 0])).unwrap(), Block::constant(2, 1, 0));
        assert_eq!(apply_block_map(&code, &two_block([0, 1, 1])).unwrap(), Block::constant(2, 1, 1));
        assert!(matches!(apply_block_map(&code, &Block::constant(2, 1, 0)), Err(Error::HeightTooSmall { .. })));
        assert!(matches!(apply_block_map(&code, &two_block([1, 1, 1])), Err(Error::InadmissibleInput)));
    }

    #[test]
    fn identity_code_is_identity() {
        let full = fixtures::full_shift(2);
        let table = BTreeMap::from([(Block::constant(2, 1, 0), 0), (Block::constant(2, 1, 1), 1)]);
        let code = SlidingBlockCode::new(full.clone(), 1, Alphabet::numeric(2), table).unwrap();
        let b = Block::from_labels(2, 3, vec![0, 1, 1, 0, 1, 0, 0]).unwrap();
        assert_eq!(apply_block_map(&code, &b).unwrap(), b);
        let img = image_blocks(&code, 2, 1000).unwrap();
        let direct: BTreeSet<Block> = enumerate_blocks(&full, 2, 1000).unwrap().into_iter().collect();
        assert_eq!(img, direct);
    }

    #[test]
    fn missing_table_entry_is_rejected() {
        let full = fixtures::full_shift(2);
        let table = BTreeMap::from([(Block::constant(2, 1, 0), 0)]);
        let r = SlidingBlockCode::new(full, 1, Alphabet::numeric(2), table);
        assert!(matches!(r, Err(Error::MissingTableEntry(_))));
    }

    #[test]
    fn even_shift_small_images() {
        let TreeShift::SoficImage(code) = fixtures::even_shift() else { panic!() };
        let one: Vec<Block> = image_blocks(&code, 1, 1000).unwrap().into_iter().collect();
        assert_eq!(one, [Block::constant(2, 1, 0), Block::constant(2, 1, 1)]);
        let two = image_blocks(&code, 2, 1000).unwrap();
        // brute force over all height-3 golden-mean blocks
        let golden = fixtures::golden_mean();
        let mut expected = BTreeSet::new();
        for labels in 0..128u32 {
            let l: Vec<Symbol> = (0..7).map(|i| ((labels >> i) & 1) as Symbol).collect();
            let b = Block::from_labels(2, 3, l).unwrap();
            if locally_admissible(&b.to_pattern(), &golden).unwrap() {
                let v: Vec<Symbol> = [Word::root(), "0".parse().unwrap(), "1".parse().unwrap()]
                    .iter()
                    .map(|x| {
                        let w = b.subtree_at(x).unwrap().truncate(2);
                        if w.labels() == [0, 0, 0] { 0 } else { 1 }
                    })
                    .collect();
                expected.insert(Block::from_labels(2, 2, v).unwrap());
            }
        }
        assert_eq!(two, expected);
    }

    #[test]
    fn image_blocks_monotone_under_truncation() {
        let TreeShift::SoficImage(code) = fixtures::even_shift() else { panic!() };
        for n in 1..3 {
            let big = image_blocks(&code, n + 1, 100_000).unwrap();
            let small = image_blocks(&code, n, 100_000).unwrap();
            assert!(big.iter().all(|b| small.contains(&b.truncate(n))));
        }
    }
}
