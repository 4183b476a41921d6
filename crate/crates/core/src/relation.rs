//! Parent/children cell relations and bottom-up feasibility over constrained trees.
//!
//! A relation is a list of cells `(parent; child_0, ..., child_{d-1})` over a base
//! alphabet, each carrying an output symbol. For a one-step shift the output is the
//! parent itself; for an image under a block map of window at most 2 the output is
//! the image of the cell. Cells are restricted to the essential core of the base, so
//! every partial solution found here extends to an infinite tree.

use std::collections::BTreeMap;

use crate::symset::SymbolSet;
use crate::word::Word;
use crate::Symbol;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub parent: Symbol,
    pub children: Vec<Symbol>,
    pub out: Symbol,
}

#[derive(Clone, Debug)]
pub struct LocalRelation {
    arity: usize,
    base_size: usize,
    out_size: usize,
    cells: Vec<Cell>,
    by_parent: Vec<Vec<usize>>,
    core: SymbolSet,
    identity: bool,
}

/// Greatest subset `V` such that every symbol of `V` has a tuple with all children in `V`.
/// Returns `V` and the deletion order `(symbol, round)`.
pub fn tuple_core(size: usize, tuples: &[Vec<Symbol>]) -> (SymbolSet, Vec<(Symbol, usize)>) {
    let mut alive = SymbolSet::full(size);
    let mut trace = Vec::new();
    let mut round = 0;
    loop {
        round += 1;
        let doomed: Vec<Symbol> = alive
            .iter()
            .filter(|&a| !tuples.iter().any(|t| t[0] == a && t[1..].iter().all(|&b| alive.contains(b))))
            .collect();
        if doomed.is_empty() {
            return (alive, trace);
        }
        for a in doomed {
            alive.remove(a);
            trace.push((a, round));
        }
    }
}

impl LocalRelation {
    /// Identity-output relation from `[parent, children...]` tuples, restricted to the core.
    pub fn from_tuples(arity: usize, size: usize, tuples: impl IntoIterator<Item = Vec<Symbol>>) -> Self {
        let tuples: Vec<Vec<Symbol>> = tuples.into_iter().collect();
        let (core, _) = tuple_core(size, &tuples);
        let cells = tuples
            .into_iter()
            .filter(|t| t.iter().all(|&s| core.contains(s)))
            .map(|t| Cell { parent: t[0], children: t[1..].to_vec(), out: t[0] })
            .collect();
        Self::build(arity, size, size, cells, core, true)
    }

    /// Same cells, outputs replaced by `out(cell)` over an alphabet of `out_size` symbols.
    pub fn image(&self, out_size: usize, out: impl Fn(&Cell) -> Symbol) -> Self {
        let cells = self.cells.iter().map(|c| Cell { out: out(c), ..c.clone() }).collect();
        Self::build(self.arity, self.base_size, out_size, cells, self.core.clone(), false)
    }

    fn build(arity: usize, base_size: usize, out_size: usize, mut cells: Vec<Cell>, core: SymbolSet, identity: bool) -> Self {
        cells.sort();
        let mut by_parent = vec![Vec::new(); base_size];
        for (i, c) in cells.iter().enumerate() {
            by_parent[c.parent].push(i);
        }
        LocalRelation { arity, base_size, out_size, cells, by_parent, core, identity }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn out_size(&self) -> usize {
        self.out_size
    }

    pub fn core(&self) -> &SymbolSet {
        &self.core
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// True when outputs equal parents (a shift of finite type over its own alphabet).
    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn cells_of(&self, parent: Symbol) -> impl Iterator<Item = &Cell> {
        self.by_parent[parent].iter().map(|&i| &self.cells[i])
    }

    /// Base symbols `s` having a cell with children in `child_sets` and, when given, output `label`.
    pub fn step(&self, child_sets: &[&SymbolSet], label: Option<Symbol>) -> SymbolSet {
        let mut out = SymbolSet::empty(self.base_size);
        for c in &self.cells {
            if label.is_some_and(|l| l != c.out) || out.contains(c.parent) {
                continue;
            }
            if c.children.iter().zip(child_sets).all(|(&b, s)| s.contains(b)) {
                out.insert(c.parent);
            }
        }
        out
    }

    /// First cell (canonical order) for `parent` compatible with the child sets and label.
    pub fn choose(&self, parent: Symbol, child_sets: &[&SymbolSet], label: Option<Symbol>) -> Option<&Cell> {
        self.cells_of(parent).find(|c| {
            label.is_none_or(|l| l == c.out) && c.children.iter().zip(child_sets).all(|(&b, s)| s.contains(b))
        })
    }

    /// Bottom-up feasible base-symbol sets for every node of a prefix-closed constraint
    /// tree (`None` = unconstrained output). Missing children are unconstrained.
    pub fn feasible_sets(&self, tree: &BTreeMap<Word, Option<Symbol>>) -> BTreeMap<Word, SymbolSet> {
        let mut sets: BTreeMap<Word, SymbolSet> = BTreeMap::new();
        for (w, label) in tree.iter().rev() {
            let kids: Vec<&SymbolSet> =
                (0..self.arity).map(|i| sets.get(&w.child(i)).unwrap_or(&self.core)).collect();
            let s = self.step(&kids, *label);
            sets.insert(w.clone(), s);
        }
        sets
    }

    /// A base labeling of `tree` realizing every constraint, chosen top-down with the
    /// smallest feasible symbol and first compatible cell. Returns `(base, output)` per node.
    pub fn solve(&self, tree: &BTreeMap<Word, Option<Symbol>>) -> Option<BTreeMap<Word, (Symbol, Symbol)>> {
        let sets = self.feasible_sets(tree);
        let root_set = sets.get(&Word::root())?;
        let mut base: BTreeMap<Word, Symbol> = BTreeMap::from([(Word::root(), root_set.first()?)]);
        let mut result = BTreeMap::new();
        for (w, label) in tree {
            let s = base[w];
            let kids: Vec<&SymbolSet> = (0..self.arity).map(|i| sets.get(&w.child(i)).unwrap_or(&self.core)).collect();
            let cell = self.choose(s, &kids, *label).expect("feasible set implies a cell");
            for (i, &b) in cell.children.iter().enumerate() {
                let c = w.child(i);
                if tree.contains_key(&c) {
                    base.insert(c, b);
                }
            }
            result.insert(w.clone(), (s, cell.out));
        }
        Some(result)
    }

    /// `T(S_0, ..., S_{d-1})` with uniform children sets and no label.
    pub fn free_step(&self, set: &SymbolSet) -> SymbolSet {
        let kids: Vec<&SymbolSet> = vec![set; self.arity];
        self.step(&kids, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> LocalRelation {
        LocalRelation::from_tuples(2, 2, [vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 0]])
    }

    #[test]
    fn core_deletes_stranded_symbols() {
        // symbol 1 only continues into 2, which has no continuation
        let (core, trace) = tuple_core(3, &[vec![0, 0, 0], vec![1, 2, 2]]);
        assert_eq!(core.iter().collect::<Vec<_>>(), [0]);
        assert_eq!(trace, [(2, 1), (1, 2)]);
    }

    #[test]
    fn solve_respects_constraints() {
        let r = golden();
        let tree = BTreeMap::from([
            (Word::root(), Some(1)),
            ("0".parse().unwrap(), None),
            ("1".parse().unwrap(), None),
        ]);
        let sol = r.solve(&tree).unwrap();
        assert_eq!(sol[&"0".parse::<Word>().unwrap()].0, 0);
        let impossible = BTreeMap::from([(Word::root(), Some(1)), ("0".parse().unwrap(), Some(1))]);
        assert!(r.solve(&impossible).is_none());
    }
}
