//! Gluing for the level-constant shift, where a configuration is one symbol per level.

use std::collections::{BTreeMap, BTreeSet};

use super::{Budgets, Counterexample, GroupWitness, Property, Status, Verdict};
use crate::cpc::{enumerate_cpcs, CompletePrefixCode};
use crate::decision::enumerate_blocks;
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::shift::TreeShift;
use crate::word::Word;
use crate::Symbol;

const PAIR_LIMIT: usize = 100_000;
/// Largest code size the SI obstruction is replayed against; the schema itself covers all codes.
const REPLAY_LEAVES: usize = 10;

/// Whether gluing `v` below every leaf of `u` through `p` puts two symbols on one level.
pub(crate) fn depths_agree(u: &Pattern, v: &Pattern, p: &CompletePrefixCode) -> bool {
    let mut depth: BTreeMap<usize, Symbol> = BTreeMap::new();
    let mut put = |d: usize, s: Symbol| depth.insert(d, s).is_none_or(|old| old == s);
    let by_depth = |x: &Pattern| -> BTreeSet<(usize, Symbol)> { x.iter().map(|(w, s)| (w.len(), s)).collect() };
    let leaf_depths: BTreeSet<usize> = u.leaves().iter().map(Word::len).collect();
    let code_depths: BTreeSet<usize> = p.words().iter().map(Word::len).collect();
    by_depth(u).into_iter().all(|(d, s)| put(d, s))
        && by_depth(v).into_iter().all(|(dv, s)| {
            leaf_depths.iter().all(|l| code_depths.iter().all(|c| put(l + c + dv, s)))
        })
}

/// The constraint tree of gluing `v` below every leaf of `u` through `p`, labeled by depth.
pub(crate) fn connect(u: &Pattern, v: &Pattern, p: &CompletePrefixCode) -> Result<Pattern> {
    if !depths_agree(u, v, p) {
        return Err(Error::NoFill);
    }
    let mut depth: BTreeMap<usize, Symbol> = BTreeMap::new();
    for (w, s) in u.iter() {
        depth.insert(w.len(), s);
    }
    let leaves = u.leaves();
    for l in &leaves {
        for x in p.words() {
            for (w, s) in v.iter() {
                depth.insert(l.len() + x.len() + w.len(), s);
            }
        }
    }
    let mut labels: BTreeMap<Word, Symbol> = u.labels().clone();
    let interior = p.interior();
    for l in &leaves {
        for y in interior.iter().filter(|y| !y.is_root()) {
            let w = l.concat(y);
            let s = depth.get(&w.len()).copied().unwrap_or(0);
            labels.insert(w, s);
        }
        for x in p.words() {
            for (w, s) in v.iter() {
                labels.insert(l.concat(x).concat(w), s);
            }
        }
    }
    Pattern::new(u.arity(), labels)
}

/// A 0-labeled pattern with a leaf at depth 1 and a path reaching depth `p + 1`; gluing
/// the single symbol 1 below it through any code of length `p` collides with the path.
pub(crate) fn si_obstruction(arity: usize, p: usize) -> Pattern {
    let mut labels = BTreeMap::from([(Word::root(), 0), (Word::from_directions([0]), 0)]);
    let mut w = Word::from_directions([1]);
    labels.insert(w.clone(), 0);
    for _ in 0..p {
        w = w.child(0);
        labels.insert(w.clone(), 0);
    }
    Pattern::new(arity, labels).expect("prefix-closed path")
}

pub(crate) fn check(x: &TreeShift, property: Property, budgets: &Budgets) -> Result<Verdict> {
    let d = x.arity();
    let k = x.alphabet().len();
    let mut verdict = Verdict::new(property, budgets);
    match property {
        Property::Si | Property::Usi if k >= 2 => {
            let v = Pattern::single(d, 1);
            let codes: Vec<CompletePrefixCode> = if property == Property::Usi {
                (1..).map(|k| CompletePrefixCode::uniform(d, k)).take_while(|c| c.leaf_count() <= budgets.cpc_leaves).collect()
            } else {
                enumerate_cpcs(d, budgets.cpc_leaves.min(REPLAY_LEAVES)).collect()
            };
            let tried = codes.len();
            for code in codes {
                let u = si_obstruction(d, code.max_len());
                if depths_agree(&u, &v, &code) {
                    return Err(Error::Unsupported("level-constant obstruction failed to replay".into()));
                }
            }
            verdict.status = Status::Refuted;
            verdict.unconditional = true;
            verdict.counterexample = Some(Counterexample {
                u: si_obstruction(d, 1),
                v,
                codes_tried: tried,
                note: "for a code of length p, the 0-labeled pattern with a leaf at depth 1 and a path to depth p+1 \
                       cannot host the symbol 1 at the depths 2..p+1 that the code reaches below the shallow leaf"
                    .into(),
                others: Vec::new(),
            });
            verdict.upgrade_rule = Some("obstruction schema covers every code length".into());
            verdict.notes.push(format!("replayed against {tried} codes"));
        }
        _ => {
            // blocks put every leaf on one level, so Σ^1 plants each level of v on one tree level
            let code = CompletePrefixCode::uniform(d, 1);
            let mut pairs = 0usize;
            for j in 1..=budgets.height {
                let blocks = enumerate_blocks(x, j, PAIR_LIMIT)?;
                let vs: Vec<Pattern> = match property {
                    Property::Tm => (1..=budgets.height)
                        .flat_map(|q| enumerate_blocks(x, q, PAIR_LIMIT).unwrap_or_default())
                        .map(|b| b.to_pattern())
                        .collect(),
                    _ => blocks.iter().map(|b| b.to_pattern()).collect(),
                };
                for u in &blocks {
                    let u = u.to_pattern();
                    for v in &vs {
                        pairs += 1;
                        if pairs > PAIR_LIMIT {
                            break;
                        }
                        if !depths_agree(&u, v, &code) {
                            return Err(Error::NoFill);
                        }
                    }
                }
                if matches!(property, Property::Tm | Property::Irreducible) || budgets.per_n {
                    let group = match property {
                        Property::Tm => format!("p={j}, q<={}", budgets.height),
                        Property::Irreducible => format!("n={j}: P = Σ^{j}"),
                        _ => format!("n={j}"),
                    };
                    let code = match property {
                        Property::Irreducible => CompletePrefixCode::uniform(d, j),
                        _ => code.clone(),
                    };
                    verdict.witness_codes.push(GroupWitness { group, code });
                }
            }
            verdict.status = Status::Verified;
            verdict.unconditional = true;
            verdict.witness_code = Some(code.clone());
            verdict.upgrade_rule = Some(
                "every block has its leaves on one level, so planting through Σ^1 assigns each level of v to a \
                 single tree level below u; no two constraints share a level, at any height"
                    .into(),
            );
            let u = Pattern::single(d, 0);
            verdict.witness_pattern = Some(connect(&u, &u, &code)?);
            verdict.notes.push(format!("{pairs} block pairs replayed"));
        }
    }
    if k < 2 && matches!(property, Property::Si | Property::Usi) {
        verdict.notes.push("single-symbol alphabet".into());
    }
    Ok(verdict)
}
