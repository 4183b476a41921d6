//! Uniform strong irreducibility of the even tree-shift through `Σ^4`, by explicit fills.
//!
//! Each leaf `ℓ` of `u` receives a four-block `α` whose root is `u_ℓ` and whose labels are
//! constant on each level. The choice of `α` depends on `u_ℓ`, `v_ε` and two parities:
//! the depth of the first 0 in `v`, and the number of trailing 1's on the path to `ℓ`.

use std::collections::BTreeMap;

use super::{admissible_patterns, Budgets, Property, Status, Verdict};
use crate::cpc::CompletePrefixCode;
use crate::decision::{image_relation, locally_admissible};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::mixing::engine::root_set;
use crate::pattern::Pattern;
use crate::relation::LocalRelation;
use crate::symset::SymbolSet;
use crate::word::Word;
use crate::Symbol;

const DEPTH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EvenCase {
    C1,
    C2_1,
    C2_2,
    C3_1,
    C3_2,
    C4_1,
    C4_2,
    C4_3,
    C4_4,
}

impl EvenCase {
    pub const ALL: [EvenCase; 9] = [
        EvenCase::C1,
        EvenCase::C2_1,
        EvenCase::C2_2,
        EvenCase::C3_1,
        EvenCase::C3_2,
        EvenCase::C4_1,
        EvenCase::C4_2,
        EvenCase::C4_3,
        EvenCase::C4_4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvenCase::C1 => "1",
            EvenCase::C2_1 => "2-1",
            EvenCase::C2_2 => "2-2",
            EvenCase::C3_1 => "3-1",
            EvenCase::C3_2 => "3-2",
            EvenCase::C4_1 => "4-1",
            EvenCase::C4_2 => "4-2",
            EvenCase::C4_3 => "4-3",
            EvenCase::C4_4 => "4-4",
        }
    }
}

/// Level labels of the four α bodies (depths 0..=3), before the root is set to `u_ℓ`.
const BODIES: [[Symbol; DEPTH]; 4] = [
    [0, 0, 0, 0], // all zero
    [0, 0, 0, 1], // 1 exactly on depth 3
    [1, 1, 0, 0], // 1 on the root and its children
    [1, 1, 0, 1], // 0 exactly on depth 2
];

/// Whether the first 0 of `v` (by depth) sits at odd depth; `false` without a 0.
pub fn v_parity_odd(v: &Pattern) -> bool {
    v.iter().filter(|(_, s)| *s == 0).map(|(w, _)| w.len()).min().is_some_and(|d| d % 2 == 1)
}

/// Whether `|ℓ| - max{|w| : w proper prefix of ℓ, u_w = 0}` is odd; `false` without such `w`.
pub fn u_parity_odd(u: &Pattern, leaf: &Word) -> bool {
    leaf.proper_prefixes()
        .filter(|w| u.get(w) == Some(0))
        .map(|w| w.len())
        .max()
        .is_some_and(|m| (leaf.len() - m) % 2 == 1)
}

pub fn even_case(u: &Pattern, leaf: &Word, v: &Pattern) -> EvenCase {
    let ul = u.get(leaf).expect("leaf of u");
    let ve = v.root();
    let (vo, uo) = (v_parity_odd(v), u_parity_odd(u, leaf));
    match (ul, ve, vo, uo) {
        (0, 0, _, _) => EvenCase::C1,
        (0, _, false, _) => EvenCase::C2_1,
        (0, _, true, _) => EvenCase::C2_2,
        (_, 0, _, false) => EvenCase::C3_1,
        (_, 0, _, true) => EvenCase::C3_2,
        (_, _, false, false) => EvenCase::C4_1,
        (_, _, false, true) => EvenCase::C4_2,
        (_, _, true, false) => EvenCase::C4_3,
        (_, _, true, true) => EvenCase::C4_4,
    }
}

/// Level labels (depths 0..=3) of the fill used in `case` below a leaf labeled `u_leaf`.
pub fn even_alpha(case: EvenCase, u_leaf: Symbol) -> [Symbol; DEPTH] {
    let body = match case {
        EvenCase::C1 | EvenCase::C2_1 | EvenCase::C3_1 | EvenCase::C4_1 => 0,
        EvenCase::C2_2 | EvenCase::C4_3 => 1,
        EvenCase::C3_2 | EvenCase::C4_2 => 2,
        EvenCase::C4_4 => 3,
    };
    let mut a = BODIES[body];
    a[0] = u_leaf;
    a
}

/// The pattern on `S(u) ∪ ℓΣ_4 ∪ ℓΣ^4 S(v)` using the case fill below every leaf.
pub fn glue_even(u: &Pattern, v: &Pattern) -> Result<Pattern> {
    let d = u.arity();
    let mut labels: BTreeMap<Word, Symbol> = u.labels().clone();
    for l in u.leaves() {
        let alpha = even_alpha(even_case(u, &l, v), u.get(&l).expect("leaf"));
        for (depth, &s) in alpha.iter().enumerate().skip(1) {
            for w in Word::all_of_length(d, depth) {
                labels.insert(l.concat(&w), s);
            }
        }
        for x in Word::all_of_length(d, DEPTH) {
            for (w, s) in v.iter() {
                labels.insert(l.concat(&x).concat(w), s);
            }
        }
    }
    Pattern::new(d, labels)
}

/// Base symbols possible at a leaf as the root of a level-constant (or free) fill over `f_v`.
fn fill_set(rel: &LocalRelation, f_v: &SymbolSet, levels: [Option<Symbol>; DEPTH]) -> SymbolSet {
    let mut s = f_v.clone();
    for label in levels.iter().rev() {
        let kids = vec![&s; rel.arity()];
        s = rel.step(&kids, *label);
    }
    s
}

fn u_root_ok(rel: &LocalRelation, u: &Pattern, mut leaf_set: impl FnMut(&Word) -> SymbolSet) -> bool {
    let leaves = u.leaves();
    let mut sets: BTreeMap<Word, SymbolSet> = BTreeMap::new();
    for (w, s) in u.iter().collect::<Vec<_>>().into_iter().rev() {
        let set = if leaves.contains(w) {
            leaf_set(w).intersect(&rel.step(&vec![rel.core(); rel.arity()], Some(s)))
        } else {
            let kids: Vec<&SymbolSet> = (0..rel.arity()).map(|i| sets.get(&w.child(i)).unwrap_or(rel.core())).collect();
            rel.step(&kids, Some(s))
        };
        if set.is_empty() {
            return false;
        }
        sets.insert(w.clone(), set);
    }
    true
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvenCounts {
    pub pairs: usize,
    /// Connected with the case fill at every leaf.
    pub by_case: usize,
    /// Connected when each leaf may use any of the four fills.
    pub by_union: usize,
    /// Connected only by an unrestricted `Σ^4` fill.
    pub by_free: usize,
    pub failed: usize,
    pub case_hits: BTreeMap<&'static str, usize>,
}

/// Checks that every pair of patterns of the even tree-shift with height at most `bound`
/// connects through `Σ^4`, recording which kind of fill is needed.
pub fn even_usi_counts(bound: usize) -> Result<EvenReport> {
    if bound < 1 {
        return Err(Error::Schema("pattern height bound must be at least 1".into()));
    }
    let y = fixtures::even_shift();
    let rel = image_relation(&y)?.expect("sofic image has a relation");
    let patterns = admissible_patterns(&rel, 2, bound, usize::MAX)?;
    // v matters only through its root set, root label and first-zero parity
    let mut classes: BTreeMap<(Vec<Symbol>, Symbol, bool), Pattern> = BTreeMap::new();
    for v in &patterns {
        let f: Vec<Symbol> = root_set(&rel, v).iter().collect();
        classes.entry((f, v.root(), v_parity_odd(v))).or_insert_with(|| v.clone());
    }
    let mut counts = EvenCounts::default();
    let mut failure = None;
    let mut case_witness: Option<(Pattern, Pattern)> = None;
    let mut union_witness = None;
    for ((f, _, _), v) in &classes {
        let f_v = SymbolSet::from_iter(rel.base_size(), f.iter().copied());
        let alpha_sets: Vec<Vec<SymbolSet>> = (0..2)
            .map(|ul| BODIES.iter().map(|b| {
                let mut a = b.map(Some);
                a[0] = Some(ul);
                fill_set(&rel, &f_v, a)
            }).collect())
            .collect();
        for u in &patterns {
            counts.pairs += 1;
            let case_ok = u_root_ok(&rel, u, |l| {
                let ul = u.get(l).expect("leaf");
                let a = even_alpha(even_case(u, l, v), ul).map(Some);
                fill_set(&rel, &f_v, a)
            });
            if case_ok {
                counts.by_case += 1;
                if case_witness.as_ref().is_none_or(|(w, _)| u.len() > w.len()) {
                    case_witness = Some((u.clone(), v.clone()));
                }
                for l in u.leaves() {
                    *counts.case_hits.entry(even_case(u, &l, v).name()).or_default() += 1;
                }
                continue;
            }
            let union_ok = u_root_ok(&rel, u, |l| {
                let ul = u.get(l).expect("leaf");
                let mut s = SymbolSet::empty(rel.base_size());
                for a in &alpha_sets[ul] {
                    s.union_with(a);
                }
                s
            });
            if union_ok {
                counts.by_union += 1;
                union_witness.get_or_insert_with(|| (u.clone(), v.clone()));
                continue;
            }
            let free_ok = u_root_ok(&rel, u, |l| {
                let mut a = [None; DEPTH];
                a[0] = u.get(l);
                fill_set(&rel, &f_v, a)
            });
            if free_ok {
                counts.by_free += 1;
            } else {
                counts.failed += 1;
                failure.get_or_insert_with(|| (u.clone(), v.clone()));
            }
        }
    }
    Ok(EvenReport { counts, failure, case_witness, union_witness })
}

#[derive(Clone, Debug)]
pub struct EvenReport {
    pub counts: EvenCounts,
    pub failure: Option<(Pattern, Pattern)>,
    /// A largest pair connected by the case fills.
    pub case_witness: Option<(Pattern, Pattern)>,
    /// First pair the case fills miss but some fill per leaf connects.
    pub union_witness: Option<(Pattern, Pattern)>,
}

/// USI of the even tree-shift with `P = Σ^4`, for all pattern pairs of height at most `bound`.
pub fn verify_even_treeshift_usi(bound: usize) -> Result<Verdict> {
    let budgets = Budgets { height: bound, ..Budgets::default() };
    let mut verdict = Verdict::new(Property::Usi, &budgets);
    let EvenReport { counts, failure, case_witness, union_witness } = even_usi_counts(bound)?;
    let code = CompletePrefixCode::uniform(2, DEPTH);
    verdict.notes.push(format!(
        "{} pattern pairs (v up to root set, root label and parity): {} by the case fills, {} by some fill per leaf, \
         {} by an unrestricted fill, {} not connected",
        counts.pairs, counts.by_case, counts.by_union, counts.by_free, counts.failed
    ));
    for (case, n) in &counts.case_hits {
        verdict.notes.push(format!("case {case}: {n} leaves"));
    }
    if counts.failed == 0 {
        verdict.status = Status::Verified;
        verdict.witness_code = Some(code);
        let y = fixtures::even_shift();
        let (u, v) = case_witness.expect("some pair connects by cases");
        let mu = glue_even(&u, &v)?;
        if !locally_admissible(&mu, &y)? {
            return Err(Error::Unsupported("case fill rejected by the even tree-shift".into()));
        }
        verdict.witness_pattern = Some(mu);
        if let Some((u, v)) = union_witness {
            verdict.notes.push(format!(
                "the case fills miss u = {}, v = {}: the cases fix each leaf on its own, while leaves sharing a 0-free \
                 ancestor path must agree on parity",
                u.render(y.alphabet()),
                v.render(y.alphabet())
            ));
        }
    } else if let Some((u, v)) = failure {
        // Σ^4 is a single code, so a failed pair leaves the status open for other codes
        verdict.status = Status::Unknown;
        verdict.counterexample = Some(super::Counterexample { u, v, codes_tried: 1, note: "does not connect through Σ^4".into(), others: Vec::new() });
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_selection() {
        let u = fixtures::pattern(2, &[("", 0), ("0", 1), ("1", 0)]);
        let v0 = Pattern::single(2, 0);
        let v_odd = fixtures::pattern(2, &[("", 1), ("0", 0), ("1", 0)]);
        let l0: Word = "0".parse().unwrap();
        let l1: Word = "1".parse().unwrap();
        assert_eq!(even_case(&u, &l1, &v0), EvenCase::C1);
        assert_eq!(even_case(&u, &l1, &v_odd), EvenCase::C2_2);
        assert_eq!(even_case(&u, &l0, &v0), EvenCase::C3_2);
        assert_eq!(even_case(&u, &l0, &v_odd), EvenCase::C4_4);
        assert_eq!(even_alpha(EvenCase::C4_4, 1), [1, 1, 0, 1]);
        assert_eq!(even_alpha(EvenCase::C2_2, 0), [0, 0, 0, 1]);
    }

    #[test]
    fn case_fills_are_admissible() {
        let y = fixtures::even_shift();
        let u = fixtures::pattern(2, &[("", 0), ("0", 1), ("1", 0)]);
        for v in [Pattern::single(2, 0), Pattern::single(2, 1), fixtures::pattern(2, &[("", 1), ("0", 0), ("1", 0)])] {
            let mu = glue_even(&u, &v).unwrap();
            assert!(locally_admissible(&mu, &y).unwrap(), "{}", v.render(y.alphabet()));
        }
    }

    #[test]
    fn verified_at_height_two() {
        let v = verify_even_treeshift_usi(2).unwrap();
        assert_eq!(v.status, Status::Verified, "{:?}", v.notes);
        assert_eq!(v.witness_code.unwrap(), CompletePrefixCode::uniform(2, 4));
    }
}
