//! Connectivity through complete prefix codes over a cell relation.
//!
//! Whether `u` and `v` connect through `P` depends on `v` only through its feasible
//! root set `F_v` (the base symbols that can sit under `v`'s root), and on `P` only through
//! the map `F ↦ T_P(F)` computed bottom-up over `P`'s tree. A family of pairs is checked
//! against a code by computing these sets once per `(F, root label)` and running a small
//! DP over each `u` whose leaves take the sets below them.
//!
//! Every step is monotone in its input sets, so the codes that could ever satisfy a
//! family are dominated by compositions of pointwise-maximal vectors. The closure over
//! maximal vectors is finite, which turns "no code connects these pairs" into an exact
//! answer, and the `Σ^k` sequence is eventually periodic for the same reason.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::cpc::{enumerate_cpcs, validate_cpc, CompletePrefixCode};
use crate::pattern::Pattern;
use crate::relation::LocalRelation;
use crate::symset::SymbolSet;
use crate::word::Word;
use crate::Symbol;

#[derive(Clone, Debug)]
pub(crate) struct UItem {
    pub pattern: Pattern,
    tree: BTreeMap<Word, Option<Symbol>>,
    leaves: BTreeSet<Word>,
}

impl UItem {
    pub fn new(pattern: Pattern) -> Self {
        let tree = pattern.iter().map(|(w, s)| (w.clone(), Some(s))).collect();
        let leaves = pattern.leaves().into_iter().collect();
        UItem { pattern, tree, leaves }
    }
}

/// Patterns `u`, classes of `v` by feasible root set, and the `(u, class)` pairs to connect.
#[derive(Clone, Debug, Default)]
pub(crate) struct Family {
    pub us: Vec<UItem>,
    pub classes: Vec<SymbolSet>,
    pub reps: Vec<Pattern>,
    pub pairs: Vec<(usize, usize)>,
}

impl Family {
    /// Adds `v` and returns its class index.
    pub fn add_v(&mut self, rel: &LocalRelation, v: &Pattern) -> usize {
        let f = root_set(rel, v);
        match self.classes.iter().position(|c| *c == f) {
            Some(i) => i,
            None => {
                self.classes.push(f);
                self.reps.push(v.clone());
                self.classes.len() - 1
            }
        }
    }

    pub fn add_u(&mut self, u: Pattern) -> usize {
        self.us.push(UItem::new(u));
        self.us.len() - 1
    }

    pub fn pair_all(&mut self) {
        self.pairs = (0..self.us.len()).flat_map(|u| (0..self.classes.len()).map(move |c| (u, c))).collect();
    }
}

/// Base symbols that can sit under the root of `v`.
pub(crate) fn root_set(rel: &LocalRelation, v: &Pattern) -> SymbolSet {
    let tree: BTreeMap<Word, Option<Symbol>> = v.iter().map(|(w, s)| (w.clone(), Some(s))).collect();
    rel.feasible_sets(&tree).remove(&Word::root()).expect("root present")
}

pub(crate) type Vector = Vec<SymbolSet>;

/// A subtree shape (its leaf words) together with its vector of feasible sets.
#[derive(Clone, Debug)]
pub(crate) struct Shaped {
    pub vector: Vector,
    pub leaves: Vec<Word>,
}

pub(crate) enum Closure {
    Found(CompletePrefixCode),
    Exhausted(Vec<Shaped>),
    Capped(usize),
}

pub(crate) enum Uniform {
    Hit(usize),
    /// Every `k` behaves like one of `1..=last_k`.
    Cycle { last_k: usize, levels: Vec<Vector> },
    Capped(usize),
}

pub(crate) struct Engine<'a> {
    pub rel: &'a LocalRelation,
    pub fam: &'a Family,
}

impl<'a> Engine<'a> {
    pub fn new(rel: &'a LocalRelation, fam: &'a Family) -> Self {
        Engine { rel, fam }
    }

    fn arity(&self) -> usize {
        self.rel.arity()
    }

    pub fn leaf_vector(&self) -> Vector {
        self.fam.classes.clone()
    }

    pub fn compose(&self, kids: &[&Vector]) -> Vector {
        (0..self.fam.classes.len())
            .map(|j| {
                let sets: Vec<&SymbolSet> = kids.iter().map(|k| &k[j]).collect();
                self.rel.step(&sets, None)
            })
            .collect()
    }

    /// Vectors of the root's children subtrees of `code`.
    pub fn code_kids(&self, code: &CompletePrefixCode) -> Vec<Vector> {
        let d = self.arity();
        let mut interior = code.interior();
        interior.sort();
        let mut vecs: HashMap<Word, Vector> = HashMap::new();
        let leaf = self.leaf_vector();
        for x in interior.iter().rev().filter(|x| !x.is_root()) {
            let kids: Vec<Vector> = (0..d)
                .map(|i| {
                    let c = x.child(i);
                    if code.contains(&c) { leaf.clone() } else { vecs[&c].clone() }
                })
                .collect();
            let refs: Vec<&Vector> = kids.iter().collect();
            let v = self.compose(&refs);
            vecs.insert(x.clone(), v);
        }
        (0..d)
            .map(|i| {
                let c = Word::root().child(i);
                if code.contains(&c) { leaf.clone() } else { vecs[&c].clone() }
            })
            .collect()
    }

    fn u_ok(&self, u: &UItem, leaf_set: &mut dyn FnMut(Symbol) -> SymbolSet) -> bool {
        let d = self.arity();
        let mut sets: BTreeMap<&Word, SymbolSet> = BTreeMap::new();
        for (w, label) in u.tree.iter().rev() {
            let s = if u.leaves.contains(w) {
                leaf_set(label.expect("patterns are fully labeled"))
            } else {
                let kids: Vec<&SymbolSet> =
                    (0..d).map(|i| sets.get(&w.child(i)).unwrap_or(self.rel.core())).collect();
                self.rel.step(&kids, *label)
            };
            if s.is_empty() {
                return false;
            }
            sets.insert(w, s);
        }
        true
    }

    /// Whether the pair connects through a code whose root children have vectors `kids`.
    pub fn pair_ok(&self, kids: &[&Vector], pair: (usize, usize), cache: &mut HashMap<(usize, Symbol), SymbolSet>) -> bool {
        let (u, j) = pair;
        let mut leaf_set = |c: Symbol| {
            cache
                .entry((j, c))
                .or_insert_with(|| {
                    let sets: Vec<&SymbolSet> = kids.iter().map(|k| &k[j]).collect();
                    self.rel.step(&sets, Some(c))
                })
                .clone()
        };
        self.u_ok(&self.fam.us[u], &mut leaf_set)
    }

    pub fn first_failure(&self, kids: &[&Vector]) -> Option<(usize, usize)> {
        let mut cache = HashMap::new();
        self.fam.pairs.iter().copied().find(|&p| !self.pair_ok(kids, p, &mut cache))
    }

    pub fn code_failure(&self, code: &CompletePrefixCode) -> Option<(usize, usize)> {
        let kids = self.code_kids(code);
        let refs: Vec<&Vector> = kids.iter().collect();
        self.first_failure(&refs)
    }

    /// First code in canonical order (up to `max_leaves` leaves) passing `accept` and
    /// connecting the whole family, with the number of codes examined.
    pub fn scan(&self, max_leaves: usize, accept: impl Fn(&CompletePrefixCode) -> bool) -> (Option<CompletePrefixCode>, usize) {
        let mut tried = 0;
        for code in enumerate_cpcs(self.arity(), max_leaves) {
            if !accept(&code) {
                continue;
            }
            tried += 1;
            if self.code_failure(&code).is_none() {
                return (Some(code), tried);
            }
        }
        (None, tried)
    }

    fn tuples(&self, m: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
        let d = self.arity();
        let mut idx = vec![0usize; d];
        loop {
            if visit(&idx) {
                return true;
            }
            let mut i = d;
            loop {
                if i == 0 {
                    return false;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < m {
                    break;
                }
                idx[i] = 0;
            }
        }
    }

    fn code_of(&self, shapes: &[&Shaped]) -> CompletePrefixCode {
        let words = shapes.iter().enumerate().flat_map(|(i, s)| {
            let head = Word::from_directions([i]);
            s.leaves.iter().map(move |w| head.concat(w))
        });
        validate_cpc(words.collect::<Vec<_>>(), self.arity()).expect("composed shapes are complete codes")
    }

    /// Closure of pointwise-maximal vectors under composition, stopping at the first
    /// composition that connects the family.
    pub fn closure(&self, cap: usize) -> Closure {
        let mut maximal = vec![Shaped { vector: self.leaf_vector(), leaves: vec![Word::root()] }];
        loop {
            let snapshot = maximal.clone();
            let mut found = None;
            let mut fresh: Vec<Shaped> = Vec::new();
            self.tuples(snapshot.len(), |idx| {
                let shapes: Vec<&Shaped> = idx.iter().map(|&i| &snapshot[i]).collect();
                let kids: Vec<&Vector> = shapes.iter().map(|s| &s.vector).collect();
                if self.first_failure(&kids).is_none() {
                    found = Some(self.code_of(&shapes));
                    return true;
                }
                let v = self.compose(&kids);
                let dominated = |w: &Vector| v.iter().zip(w).all(|(a, b)| a.is_subset(b));
                if !snapshot.iter().any(|s| dominated(&s.vector)) && !fresh.iter().any(|s| dominated(&s.vector)) {
                    fresh.retain(|s| !s.vector.iter().zip(&v).all(|(a, b)| a.is_subset(b)));
                    let leaves = shapes
                        .iter()
                        .enumerate()
                        .flat_map(|(i, s)| {
                            let head = Word::from_directions([i]);
                            s.leaves.iter().map(move |w| head.concat(w))
                        })
                        .collect();
                    fresh.push(Shaped { vector: v, leaves });
                }
                false
            });
            if let Some(code) = found {
                return Closure::Found(code);
            }
            if fresh.is_empty() {
                return Closure::Exhausted(maximal);
            }
            for f in fresh {
                maximal.retain(|s| !s.vector.iter().zip(&f.vector).all(|(a, b)| a.is_subset(b)));
                maximal.push(f);
            }
            if maximal.len() > cap {
                return Closure::Capped(cap);
            }
        }
    }

    /// Whether `pair` fails under every composition of the given maximal vectors.
    pub fn fails_everywhere(&self, maximal: &[Shaped], pair: (usize, usize)) -> bool {
        !self.tuples(maximal.len(), |idx| {
            let kids: Vec<&Vector> = idx.iter().map(|&i| &maximal[i].vector).collect();
            self.pair_ok(&kids, pair, &mut HashMap::new())
        })
    }

    /// A code connecting `pair`, composed from the maximal vectors.
    pub fn connecting_code(&self, maximal: &[Shaped], pair: (usize, usize)) -> Option<CompletePrefixCode> {
        let mut hit = None;
        self.tuples(maximal.len(), |idx| {
            let shapes: Vec<&Shaped> = idx.iter().map(|&i| &maximal[i]).collect();
            let kids: Vec<&Vector> = shapes.iter().map(|s| &s.vector).collect();
            if self.pair_ok(&kids, pair, &mut HashMap::new()) {
                hit = Some(self.code_of(&shapes));
                return true;
            }
            false
        });
        hit
    }

    /// Scans `P = Σ^k` for `k = 1, 2, ...` until a hit or until the level vectors repeat.
    pub fn uniform(&self, cap: usize) -> Uniform {
        let d = self.arity();
        let mut levels = vec![self.leaf_vector()];
        let mut seen: HashMap<Vector, usize> = HashMap::from([(self.leaf_vector(), 0)]);
        for k in 1..=cap {
            let prev = &levels[k - 1];
            let kids: Vec<&Vector> = vec![prev; d];
            if self.first_failure(&kids).is_none() {
                return Uniform::Hit(k);
            }
            let next = self.compose(&kids);
            if seen.contains_key(&next) {
                return Uniform::Cycle { last_k: k, levels };
            }
            seen.insert(next.clone(), k);
            levels.push(next);
        }
        Uniform::Capped(cap)
    }

    /// Whether `pair` fails for every `Σ^k` represented by `levels` (as children vectors).
    pub fn fails_all_levels(&self, levels: &[Vector], pair: (usize, usize)) -> bool {
        let d = self.arity();
        levels.iter().all(|lv| {
            let kids: Vec<&Vector> = vec![lv; d];
            !self.pair_ok(&kids, pair, &mut HashMap::new())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::shift::TreeShift;

    fn symbol_family(x: &TreeShift) -> (LocalRelation, Family) {
        let rel = x.one_step().unwrap().relation();
        let mut fam = Family::default();
        for a in rel.core().iter() {
            fam.add_u(Pattern::single(2, a));
            fam.add_v(&rel, &Pattern::single(2, a));
        }
        fam.pair_all();
        (rel, fam)
    }

    #[test]
    fn no_constant_cells_si_code_is_the_three_leaf_code() {
        let (rel, fam) = symbol_family(&fixtures::no_constant_cells());
        let e = Engine::new(&rel, &fam);
        let (code, tried) = e.scan(4, |_| true);
        assert_eq!(code.unwrap().to_string(), "{0,10,11}");
        assert_eq!(tried, 2);
        assert!(matches!(e.uniform(64), Uniform::Cycle { .. }));
    }

    #[test]
    fn swap_shift_has_no_gluing_code() {
        let (rel, fam) = symbol_family(&fixtures::irreducible_zero());
        let e = Engine::new(&rel, &fam);
        match e.closure(256) {
            Closure::Exhausted(m) => {
                // each pair connects through some code, but no code connects them all
                for &p in &fam.pairs {
                    assert!(!e.fails_everywhere(&m, p));
                }
            }
            _ => panic!("closure should be exhausted"),
        }
    }

    #[test]
    fn golden_mean_uniform_hit_at_two() {
        let (rel, fam) = symbol_family(&fixtures::golden_mean());
        assert!(matches!(Engine::new(&rel, &fam).uniform(64), Uniform::Hit(2)));
    }
}
