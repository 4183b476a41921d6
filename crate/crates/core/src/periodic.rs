//! Periodic points `t` with `σ_x t = t` for every `x` in a complete prefix code `P`.
//!
//! Such a point is determined by its labels on the interior of `P` (the proper prefixes
//! of its words): below a code word the tree starts over, so a child `yi ∈ P` carries the
//! root label.

use std::collections::{BTreeMap, HashSet};

use serde_json::{json, Value};

use crate::alphabet::Alphabet;
use crate::cpc::{enumerate_cpcs, CompletePrefixCode};
use crate::decision::{finite_type, locally_admissible, Tsft};
use crate::error::{Error, Result};
use crate::pattern::Block;
use crate::shift::TreeShift;
use crate::word::Word;
use crate::Symbol;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSpec {
    pub code: CompletePrefixCode,
    /// Labels (in the shift's own alphabet) on the interior of the code, root included.
    pub labels: BTreeMap<Word, Symbol>,
}

impl PeriodicSpec {
    /// Label of `w` in the periodic point, stripping code words off the front.
    pub fn label(&self, w: &Word) -> Symbol {
        let mut rest = w.clone();
        loop {
            if let Some(s) = self.labels.get(&rest) {
                return *s;
            }
            let x = self.code.prefix_of(&rest).expect("complete code covers every word outside the interior");
            rest = rest.strip_prefix(x).expect("prefix");
        }
    }

    /// The height-`height` block of the periodic point at the root.
    pub fn unfold(&self, height: usize) -> Block {
        let d = self.code.arity();
        let labels = Word::all_up_to(d, height - 1).map(|w| self.label(&w)).collect();
        Block::from_labels(d, height, labels).expect("full block")
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        json!({
            "code": self.code.words().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "interior": self.labels.iter().map(|(w, &s)| (w.to_string(), Value::from(alphabet.name(s)))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

fn tsft_of(x: &TreeShift) -> Result<Tsft> {
    if !x.is_finite_type() {
        return Err(Error::NotFiniteType);
    }
    finite_type(x)
}

fn allowed_tuples(t: &Tsft) -> HashSet<Vec<Symbol>> {
    let core = t.rel.core();
    t.rel
        .cells()
        .iter()
        .filter(|c| core.contains(c.parent) && c.children.iter().all(|&b| core.contains(b)))
        .map(|c| {
            let mut v = vec![c.parent];
            v.extend_from_slice(&c.children);
            v
        })
        .collect()
}

/// Base labels of the interior, by backtracking in canonical order.
fn search_labels(t: &Tsft, tuples: &HashSet<Vec<Symbol>>, code: &CompletePrefixCode) -> Option<Vec<Symbol>> {
    let d = t.arity;
    let mut interior = code.interior();
    interior.sort();
    let index: BTreeMap<&Word, usize> = interior.iter().enumerate().map(|(i, w)| (w, i)).collect();
    // slot of each child of each interior node: an interior index, or 0 (the root) through the wrap
    let kids: Vec<Vec<usize>> = interior
        .iter()
        .map(|y| (0..d).map(|i| index.get(&y.child(i)).copied().unwrap_or(0)).collect())
        .collect();
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); interior.len()];
    for (y, ks) in kids.iter().enumerate() {
        let ready = ks.iter().copied().chain([y]).max().expect("nonempty");
        checks[ready].push(y);
    }
    let symbols: Vec<Symbol> = t.rel.core().iter().collect();
    let mut labels = vec![0; interior.len()];
    let mut tuple = Vec::with_capacity(d + 1);
    fn go(
        i: usize,
        labels: &mut Vec<Symbol>,
        tuple: &mut Vec<Symbol>,
        symbols: &[Symbol],
        kids: &[Vec<usize>],
        checks: &[Vec<usize>],
        tuples: &HashSet<Vec<Symbol>>,
    ) -> bool {
        if i == labels.len() {
            return true;
        }
        for &s in symbols {
            labels[i] = s;
            let ok = checks[i].iter().all(|&y| {
                tuple.clear();
                tuple.push(labels[y]);
                tuple.extend(kids[y].iter().map(|&k| labels[k]));
                tuples.contains(tuple)
            });
            if ok && go(i + 1, labels, tuple, symbols, kids, checks, tuples) {
                return true;
            }
        }
        false
    }
    go(0, &mut labels, &mut tuple, &symbols, &kids, &checks, tuples).then_some(labels)
}

fn project(t: &Tsft, code: &CompletePrefixCode, base: Vec<Symbol>) -> PeriodicSpec {
    let mut interior = code.interior();
    interior.sort();
    let labels = interior
        .into_iter()
        .zip(base)
        .map(|(w, s)| (w, t.recoded.as_ref().map_or(s, |(_, blocks)| blocks[s].root())))
        .collect();
    PeriodicSpec { code: code.clone(), labels }
}

/// The first periodic point (canonical labeling order) with period code `code`.
pub fn periodic_from_cpc(x: &TreeShift, code: &CompletePrefixCode) -> Result<Option<PeriodicSpec>> {
    if code.arity() != x.arity() {
        return Err(Error::AlphabetMismatch);
    }
    let t = tsft_of(x)?;
    let tuples = allowed_tuples(&t);
    Ok(search_labels(&t, &tuples, code).map(|base| project(&t, code, base)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeriodicSearch {
    Found { spec: PeriodicSpec, codes_tried: usize },
    NoneUpToBound { codes_tried: usize },
}

/// Tries every complete prefix code with at most `max_leaves` leaves in canonical order.
pub fn search_periodic(x: &TreeShift, max_leaves: usize) -> Result<PeriodicSearch> {
    if max_leaves < 2 {
        return Err(Error::Schema("max_leaves must be at least 2".into()));
    }
    let t = tsft_of(x)?;
    let tuples = allowed_tuples(&t);
    let mut tried = 0;
    for code in enumerate_cpcs(x.arity(), max_leaves) {
        tried += 1;
        if let Some(base) = search_labels(&t, &tuples, &code) {
            return Ok(PeriodicSearch::Found { spec: project(&t, &code, base), codes_tried: tried });
        }
    }
    Ok(PeriodicSearch::NoneUpToBound { codes_tried: tried })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub holds: bool,
    /// Sibling directions that differ in every allowed tuple.
    pub directions: Option<(usize, usize)>,
    /// `d > 2`: any pair of directions is accepted, not only the binary case.
    pub extension: bool,
    pub trace: Vec<String>,
}

/// Aperiodicity for every code: some sibling pair differs in every allowed tuple over the
/// core, while any complete prefix code contains siblings `wi, wj` whose labels the
/// periodicity forces to equal the root label.
pub fn sibling_distinct_certificate(x: &TreeShift) -> Result<Certificate> {
    let t = tsft_of(x)?;
    let d = t.arity;
    let names: Vec<String> = match &t.recoded {
        None => (0..t.alphabet.len()).map(|s| t.alphabet.name(s).to_string()).collect(),
        Some((_, blocks)) => blocks.iter().map(|b| b.render(&t.alphabet)).collect(),
    };
    let mut tuples: Vec<Vec<Symbol>> = allowed_tuples(&t).into_iter().collect();
    tuples.sort();
    let render = |tu: &[Symbol]| {
        let kids: Vec<&str> = tu[1..].iter().map(|&s| names[s].as_str()).collect();
        format!("({};{})", names[tu[0]], kids.join(","))
    };
    let mut trace = Vec::new();
    let mut directions = None;
    'pairs: for i in 0..d {
        for j in i + 1..d {
            let equal = tuples.iter().find(|tu| tu[1 + i] == tu[1 + j]);
            match equal {
                Some(tu) => trace.push(format!("directions {i},{j}: {} has equal children", render(tu))),
                None => {
                    for tu in &tuples {
                        trace.push(format!("directions {i},{j}: {} has distinct children", render(tu)));
                    }
                    directions = Some((i, j));
                    break 'pairs;
                }
            }
        }
    }
    if tuples.is_empty() {
        trace.push("no allowed tuples over the core: the shift is empty".into());
    }
    Ok(Certificate { holds: directions.is_some(), directions, extension: d > 2, trace })
}

/// Whether `spec` unfolds to an admissible block in which `σ_x` agrees with the root view
/// on the overlap, for every `x ∈ P`.
pub fn check_periodic(x: &TreeShift, spec: &PeriodicSpec) -> Result<bool> {
    let height = 2 * spec.code.leaf_count() + 2;
    let block = spec.unfold(height);
    if !locally_admissible(&block.to_pattern(), x)? {
        return Ok(false);
    }
    for w in spec.code.words() {
        let sub = block.subtree_at(w)?;
        if sub != block.truncate(sub.height()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn full_and_golden_hit_at_first_code() {
        for x in [fixtures::full_shift(2), fixtures::golden_mean()] {
            match search_periodic(&x, 4).unwrap() {
                PeriodicSearch::Found { spec, codes_tried } => {
                    assert_eq!(codes_tried, 1);
                    assert_eq!(spec.code.to_string(), "{0,1}");
                    assert_eq!(spec.labels, BTreeMap::from([(Word::root(), 0)]));
                    assert!(check_periodic(&x, &spec).unwrap());
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn golden_sigma_two() {
        let spec = periodic_from_cpc(&fixtures::golden_mean(), &CompletePrefixCode::uniform(2, 2)).unwrap().unwrap();
        assert!(check_periodic(&fixtures::golden_mean(), &spec).unwrap());
    }

    #[test]
    fn aperiodic_shift() {
        let x = fixtures::swap_identity();
        let cert = sibling_distinct_certificate(&x).unwrap();
        assert!(cert.holds);
        assert!(!cert.extension);
        assert_eq!(search_periodic(&x, 6).unwrap(), PeriodicSearch::NoneUpToBound { codes_tried: 1 + 2 + 5 + 14 + 42 });
    }

    #[test]
    fn swap_shift_needs_even_depth() {
        let x = fixtures::irreducible_zero();
        assert!(!sibling_distinct_certificate(&x).unwrap().holds);
        assert!(periodic_from_cpc(&x, &CompletePrefixCode::uniform(2, 1)).unwrap().is_none());
        let spec = periodic_from_cpc(&x, &CompletePrefixCode::uniform(2, 2)).unwrap().unwrap();
        assert_eq!(spec.label(&"0".parse().unwrap()), 1);
        assert!(check_periodic(&x, &spec).unwrap());
    }

    #[test]
    fn recoded_shift_points_project() {
        let x = fixtures::no_constant_cells();
        if let PeriodicSearch::Found { spec, .. } = search_periodic(&x, 6).unwrap() {
            assert!(check_periodic(&x, &spec).unwrap());
        } else {
            panic!("expected a periodic point");
        }
    }
}
