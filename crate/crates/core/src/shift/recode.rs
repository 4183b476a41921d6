use std::collections::BTreeMap;

use super::{OneStepShift, SlidingBlockCode, TreeShift, VertexShift};
use crate::alphabet::Alphabet;
use crate::decision::locally_admissible_blocks;
use crate::error::{Error, Result};
use crate::pattern::Block;
use crate::Symbol;

/// The one-step form of a vertex shift: the product of the per-direction constraints.
pub fn as_one_step(x: &VertexShift) -> OneStepShift {
    let k = x.alphabet.len();
    let mut allowed = Vec::new();
    for a in 0..k {
        let mut partial: Vec<Vec<Symbol>> = vec![vec![a]];
        for dir in 0..x.arity {
            partial = partial
                .into_iter()
                .flat_map(|t| {
                    (0..k).filter(move |&b| x.matrices[dir][a][b]).map(move |b| {
                        let mut t = t.clone();
                        t.push(b);
                        t
                    })
                })
                .collect();
        }
        allowed.extend(partial);
    }
    OneStepShift::new(x.arity, x.alphabet.clone(), allowed).expect("product tuples fit the arity")
}

/// Higher-block recoding: symbols are the locally admissible `m`-blocks of `x`, and
/// `A_i(U, V) = 1` exactly when the height-`(m-1)` truncation of `V` equals `σ_i U`.
/// The returned code maps each `m`-block of `x` to its recoded symbol.
pub fn recode_to_vertex(x: &TreeShift) -> Result<(VertexShift, SlidingBlockCode)> {
    let window = match x {
        TreeShift::Forbidden(f) => f.window,
        TreeShift::OneStep(_) | TreeShift::Vertex(_) => 2,
        _ => return Err(Error::NotFiniteType),
    };
    let symbols = locally_admissible_blocks(x, window, usize::MAX)?;
    if symbols.is_empty() {
        return Err(Error::EmptyRecodedAlphabet(window));
    }
    let names: Vec<String> = symbols.iter().map(|b| b.render(x.alphabet())).collect();
    let alphabet = Alphabet::new(names)?;
    let truncs: Vec<Block> = symbols.iter().map(|b| b.truncate(window - 1)).collect();
    let kids: Vec<Vec<Block>> =
        symbols.iter().map(|b| (0..x.arity()).map(|i| b.child(i).expect("window >= 2")).collect()).collect();
    let matrices = (0..x.arity())
        .map(|dir| {
            (0..symbols.len())
                .map(|u| (0..symbols.len()).map(|v| truncs[v] == kids[u][dir]).collect())
                .collect()
        })
        .collect();
    let vertex = VertexShift::new(alphabet.clone(), matrices)?;
    let table: BTreeMap<Block, Symbol> = symbols.into_iter().enumerate().map(|(i, b)| (b, i)).collect();
    let code = SlidingBlockCode::new(x.clone(), window, alphabet, table)?;
    Ok((vertex, code))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn one_step_expansion_examples() {
        let full = VertexShift::from_ints(&[vec![vec![1, 1], vec![1, 1]], vec![vec![1, 1], vec![1, 1]]]).unwrap();
        assert_eq!(as_one_step(&full).allowed().len(), 8);

        let TreeShift::Vertex(swap_id) = fixtures::swap_identity() else { panic!() };
        let tuples: Vec<Vec<Symbol>> = as_one_step(&swap_id).allowed().iter().cloned().collect();
        assert_eq!(tuples, [vec![0, 1, 0], vec![1, 0, 1]]);

        let TreeShift::Vertex(swap) = fixtures::irreducible_zero() else { panic!() };
        let tuples: Vec<Vec<Symbol>> = as_one_step(&swap).allowed().iter().cloned().collect();
        assert_eq!(tuples, [vec![0, 1, 1], vec![1, 0, 0]]);
    }

    #[test]
    fn golden_mean_recodes_to_three_symbols() {
        let (v, code) = recode_to_vertex(&fixtures::golden_mean()).unwrap();
        assert_eq!(v.alphabet().names(), ["(0,0,0)", "(0,1,1)", "(1,0,0)"]);
        assert_eq!(code.window(), 2);
        // (0,0,0) may be followed in either direction by any block rooted at 0
        assert!(v.allows(0, 0, 0) && v.allows(0, 0, 1) && !v.allows(0, 0, 2));
        assert!(v.allows(1, 1, 2) && !v.allows(1, 1, 0));
    }

    #[test]
    fn full_shift_recoding_has_row_sums_four() {
        let (v, _) = recode_to_vertex(&fixtures::full_shift(2)).unwrap();
        assert_eq!(v.alphabet().len(), 8);
        for dir in 0..2 {
            for row in v.matrix(dir) {
                assert_eq!(row.iter().filter(|&&e| e).count(), 4);
            }
        }
    }

    #[test]
    fn banning_every_two_block_empties_the_alphabet() {
        let x = TreeShift::parse_str(
            r#"{"kind":"forbidden","patterns":[{"labels":{"":"0","0":"0"}},{"labels":{"":"0","0":"1"}},{"labels":{"":"1","0":"0"}},{"labels":{"":"1","0":"1"}}]}"#,
        )
        .unwrap();
        assert!(matches!(recode_to_vertex(&x), Err(Error::EmptyRecodedAlphabet(2))));
    }
}
