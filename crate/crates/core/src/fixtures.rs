//! Small named shifts used by the examples, the tests, and the CLI fixtures directory.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::pattern::{Block, Pattern};
use crate::shift::{
    ForbiddenShift, LevelConstantShift, OneStepShift, SlidingBlockCode, TreeShift, VertexShift,
};
use crate::word::Word;
use crate::Symbol;

fn vertex(matrices: &[Vec<Vec<u8>>]) -> TreeShift {
    TreeShift::Vertex(VertexShift::from_ints(matrices).expect("fixture matrices"))
}

/// Binary full shift on the binary tree.
pub fn full_shift(k: usize) -> TreeShift {
    full_shift_with(2, k)
}

pub fn full_shift_with(arity: usize, k: usize) -> TreeShift {
    let ones = vec![vec![1u8; k]; k];
    vertex(&vec![ones; arity])
}

/// `A_0 = [[0,1],[1,0]]`, `A_1 = I`: nonempty, aperiodic, block gluing.
pub fn swap_identity() -> TreeShift {
    vertex(&[vec![vec![0, 1], vec![1, 0]], vec![vec![1, 0], vec![0, 1]]])
}

/// `A_0 = A_1 = [[0,1],[1,0]]`: two points, irreducible, zero entropy.
pub fn irreducible_zero() -> TreeShift {
    vertex(&[vec![vec![0, 1], vec![1, 0]], vec![vec![0, 1], vec![1, 0]]])
}

/// Golden-mean tree-shift: a 1 forces both children to be 0.
pub fn golden_mean() -> TreeShift {
    TreeShift::OneStep(
        OneStepShift::new(2, Alphabet::numeric(2), [vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 0]]).expect("fixture"),
    )
}

/// Forbids the constant height-2 blocks `(0,0,0)` and `(1,1,1)`.
pub fn no_constant_cells() -> TreeShift {
    let constant = |s: Symbol| Block::constant(2, 2, s).to_pattern();
    TreeShift::Forbidden(ForbiddenShift::new(2, Alphabet::numeric(2), vec![constant(0), constant(1)]).expect("fixture"))
}

/// Labelings constant on every level, over `k` symbols.
pub fn level_constant(k: usize) -> TreeShift {
    TreeShift::LevelConstant(LevelConstantShift::new(2, Alphabet::numeric(k)).expect("fixture"))
}

/// Image of the golden-mean shift under the 2-block map sending `(0,0,0)` to 0 and every
/// other block to 1.
pub fn even_shift() -> TreeShift {
    let table: BTreeMap<Block, Symbol> = [[0, 0, 0], [0, 1, 1], [1, 0, 0]]
        .into_iter()
        .map(|l| {
            let b = Block::from_labels(2, 2, l.to_vec()).expect("2-block");
            let out = usize::from(l != [0, 0, 0]);
            (b, out)
        })
        .collect();
    let code = SlidingBlockCode::new(golden_mean(), 2, Alphabet::numeric(2), table).expect("fixture");
    TreeShift::SoficImage(Box::new(code))
}

/// A one-step shift where each of the `k^(d+1)` tuples is allowed with probability `density`.
pub fn random_one_step(arity: usize, k: usize, density: f64, seed: u64) -> TreeShift {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut allowed = Vec::new();
    let total = k.pow(arity as u32 + 1);
    for code in 0..total {
        if rng.gen_bool(density) {
            let mut t = Vec::with_capacity(arity + 1);
            let mut c = code;
            for _ in 0..=arity {
                t.push(c % k);
                c /= k;
            }
            t.reverse();
            allowed.push(t);
        }
    }
    TreeShift::OneStep(OneStepShift::new(arity, Alphabet::numeric(k), allowed).expect("random tuples fit"))
}

/// A parsed pattern from `(word, symbol)` pairs written as strings.
pub fn pattern(arity: usize, labels: &[(&str, Symbol)]) -> Pattern {
    let labels = labels.iter().map(|(w, s)| (w.parse::<Word>().expect("word"), *s)).collect();
    Pattern::new(arity, labels).expect("prefix-closed fixture")
}
