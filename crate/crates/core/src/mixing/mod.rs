//! Gluing patterns through complete prefix codes, and bounded checks of the mixing
//! properties TM, BG, UBG, SI, USI and irreducibility.
//!
//! For one-step shifts of finite type the checks are exact: connectivity of `u` and `v`
//! through `P` only depends on the symbols at the leaves of `u` and the root symbol of
//! `v`. For sofic images and higher-window shifts the pattern family is enumerated up
//! to the height bound. Refutations are exact in both cases because they come from a
//! finite closure (see [`engine`]); bounded verifications are tagged as such.

mod engine;
mod even;
mod level;

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::alphabet::Alphabet;
use crate::cpc::CompletePrefixCode;
use crate::decision::{enumerate_blocks, finite_type, image_relation, locally_admissible};
use crate::error::{Error, Result};
use crate::pattern::Pattern;
use crate::relation::LocalRelation;
use crate::shift::TreeShift;
use crate::symset::SymbolSet;
use crate::word::Word;
use crate::Symbol;

use engine::{Closure, Engine, Family, Uniform};

pub use even::{even_alpha, even_case, even_usi_counts, glue_even, verify_even_treeshift_usi, EvenCase, EvenCounts, EvenReport};

const BLOCK_LIMIT: usize = 4096;
const OTHERS_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Tm,
    Bg,
    Ubg,
    Si,
    Usi,
    Irreducible,
}

impl Property {
    pub const ALL: [Property; 6] =
        [Property::Tm, Property::Bg, Property::Ubg, Property::Si, Property::Usi, Property::Irreducible];

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "tm" => Property::Tm,
            "bg" => Property::Bg,
            "ubg" => Property::Ubg,
            "si" => Property::Si,
            "usi" => Property::Usi,
            "irr" | "irreducible" => Property::Irreducible,
            other => return Err(Error::Schema(format!("unknown property {other:?}"))),
        })
    }

    fn uniform(self) -> bool {
        matches!(self, Property::Ubg | Property::Usi)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Tm => "TM",
            Property::Bg => "BG",
            Property::Ubg => "UBG",
            Property::Si => "SI",
            Property::Usi => "USI",
            Property::Irreducible => "IRR",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified,
    Refuted,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "VERIFIED",
            Status::Refuted => "REFUTED",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budgets {
    /// Largest block height `n` (and pattern height for sofic SI/USI).
    pub height: usize,
    /// Largest code size scanned in canonical order.
    pub cpc_leaves: usize,
    /// Largest pattern size (nodes) for enumerated pattern families.
    pub pattern_nodes: usize,
    /// Let the code depend on the block height.
    pub per_n: bool,
    /// Cap on maximal vectors in the exact closure.
    pub closure_cap: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { height: 4, cpc_leaves: 16, pattern_nodes: 31, per_n: false, closure_cap: 1024 }
    }
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub u: Pattern,
    pub v: Pattern,
    pub codes_tried: usize,
    pub note: String,
    /// Further failing pairs of the same height, in canonical order.
    pub others: Vec<(Pattern, Pattern)>,
}

#[derive(Clone, Debug)]
pub struct GroupWitness {
    pub group: String,
    pub code: CompletePrefixCode,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub property: Property,
    pub status: Status,
    pub witness_code: Option<CompletePrefixCode>,
    /// Per-group codes when the code may depend on the group (TM, IRR, per-height mode).
    pub witness_codes: Vec<GroupWitness>,
    pub witness_pattern: Option<Pattern>,
    pub counterexample: Option<Counterexample>,
    pub budgets: Budgets,
    /// The verdict holds for every height and pattern, not only within the budgets.
    pub unconditional: bool,
    pub upgrade_rule: Option<String>,
    pub notes: Vec<String>,
}

impl Verdict {
    fn new(property: Property, budgets: &Budgets) -> Self {
        Verdict {
            property,
            status: Status::Unknown,
            witness_code: None,
            witness_codes: Vec::new(),
            witness_pattern: None,
            counterexample: None,
            budgets: budgets.clone(),
            unconditional: false,
            upgrade_rule: None,
            notes: Vec::new(),
        }
    }

    pub fn is_decided(&self) -> bool {
        self.status != Status::Unknown
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        let code_json = |c: &CompletePrefixCode| json!(c.words().iter().map(|w| w.to_string()).collect::<Vec<_>>());
        json!({
            "property": self.property.to_string(),
            "status": self.status.to_string(),
            "unconditional": self.unconditional,
            "witness_code": self.witness_code.as_ref().map(code_json),
            "witness_codes": self.witness_codes.iter().map(|g| json!({"group": g.group, "code": code_json(&g.code)})).collect::<Vec<_>>(),
            "witness_pattern": self.witness_pattern.as_ref().map(|p| p.render(alphabet)),
            "counterexample": self.counterexample.as_ref().map(|c| json!({
                "u": c.u.render(alphabet),
                "v": c.v.render(alphabet),
                "codes_tried": c.codes_tried,
                "note": c.note,
                "others": c.others.iter().map(|(u, v)| json!({"u": u.render(alphabet), "v": v.render(alphabet)})).collect::<Vec<_>>(),
            })),
            "bounds": {
                "height": self.budgets.height,
                "cpc_leaves": self.budgets.cpc_leaves,
                "pattern_nodes": self.budgets.pattern_nodes,
                "per_n": self.budgets.per_n,
                "closure_cap": self.budgets.closure_cap,
            },
            "upgrade_rule_applied": self.upgrade_rule.is_some(),
            "upgrade_rule": self.upgrade_rule,
            "notes": self.notes,
        })
    }
}

fn check_input(x: &TreeShift, p: &Pattern) -> Result<()> {
    if !locally_admissible(p, x)? {
        return Err(Error::InadmissibleInput);
    }
    Ok(())
}

/// A configuration on `S(u) ∪ ℓ·(interior of P) ∪ ℓ·P·S(v)` for every leaf `ℓ` of `u`,
/// restricting to `u` on `S(u)` and to `v` on each `ℓxS(v)`.
pub fn connect_through(x: &TreeShift, u: &Pattern, v: &Pattern, p: &CompletePrefixCode) -> Result<Pattern> {
    if p.arity() != x.arity() {
        return Err(Error::AlphabetMismatch);
    }
    check_input(x, u)?;
    check_input(x, v)?;
    if let TreeShift::LevelConstant(_) = x {
        return level::connect(u, v, p);
    }
    let rel = image_relation(x)?.expect("local kinds");
    let tree = glue_tree(u, v, p);
    let sol = rel.solve(&tree).ok_or(Error::NoFill)?;
    Pattern::new(x.arity(), sol.into_iter().map(|(w, (_, o))| (w, o)).collect())
}

pub(crate) fn glue_tree(u: &Pattern, v: &Pattern, p: &CompletePrefixCode) -> BTreeMap<Word, Option<Symbol>> {
    let mut tree: BTreeMap<Word, Option<Symbol>> = u.iter().map(|(w, s)| (w.clone(), Some(s))).collect();
    let interior = p.interior();
    for l in u.leaves() {
        for y in interior.iter().filter(|y| !y.is_root()) {
            tree.insert(l.concat(y), None);
        }
        for x in p.words() {
            for (w, s) in v.iter() {
                tree.insert(l.concat(x).concat(w), Some(s));
            }
        }
    }
    tree
}

/// Symbols at depth `n - 1` of the `n`-blocks, `n = 1..=count`.
fn leaf_levels(rel: &LocalRelation, count: usize) -> Vec<SymbolSet> {
    let mut levels = vec![rel.core().clone()];
    while levels.len() < count {
        let prev = levels.last().expect("nonempty");
        let mut next = SymbolSet::empty(rel.base_size());
        for c in rel.cells().iter().filter(|c| prev.contains(c.parent)) {
            for &b in &c.children {
                next.insert(b);
            }
        }
        levels.push(next);
    }
    levels
}

fn symbol_family(rel: &LocalRelation, arity: usize, lefts: &SymbolSet) -> Family {
    let mut fam = Family::default();
    for a in lefts.iter() {
        fam.add_u(Pattern::single(arity, a));
    }
    for b in rel.core().iter() {
        fam.add_v(rel, &Pattern::single(arity, b));
    }
    fam.pair_all();
    fam
}

/// `u ∈ B_j`, `v ∈ B_j` for each `j` in `heights`.
fn block_family(x: &TreeShift, rel: &LocalRelation, heights: impl IntoIterator<Item = usize>) -> Result<Family> {
    let mut fam = Family::default();
    for j in heights {
        let blocks = enumerate_blocks(x, j, BLOCK_LIMIT)?;
        let us: Vec<usize> = blocks.iter().map(|b| fam.add_u(b.to_pattern())).collect();
        let mut cs: Vec<usize> = blocks.iter().map(|b| fam.add_v(rel, &b.to_pattern())).collect();
        cs.sort();
        cs.dedup();
        for &u in &us {
            for &c in &cs {
                fam.pairs.push((u, c));
            }
        }
    }
    Ok(fam)
}

/// All prefix-closed supports of height at most `h` and at most `max_nodes` nodes.
pub(crate) fn supports(arity: usize, h: usize, max_nodes: usize) -> Vec<Vec<Word>> {
    fn grow(arity: usize, h: usize, max_nodes: usize, frontier: Vec<Word>, acc: Vec<Word>, out: &mut Vec<Vec<Word>>) {
        let open: Vec<Word> = frontier.into_iter().filter(|w| w.len() + 1 < h).collect();
        let Some((first, rest)) = open.split_first() else {
            out.push(acc);
            return;
        };
        for mask in 0..(1u32 << arity) {
            let kids: Vec<Word> = (0..arity).filter(|i| mask >> i & 1 == 1).map(|i| first.child(i)).collect();
            if acc.len() + kids.len() > max_nodes {
                continue;
            }
            let mut acc2 = acc.clone();
            acc2.extend(kids.iter().cloned());
            let mut frontier = rest.to_vec();
            frontier.extend(kids);
            grow(arity, h, max_nodes, frontier, acc2, out);
        }
    }
    let mut out = Vec::new();
    grow(arity, h, max_nodes, vec![Word::root()], vec![Word::root()], &mut out);
    for s in &mut out {
        s.sort();
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Every pattern of `x` with support height at most `h` and at most `max_nodes` nodes.
pub(crate) fn admissible_patterns(rel: &LocalRelation, arity: usize, h: usize, max_nodes: usize) -> Result<Vec<Pattern>> {
    let k = rel.out_size();
    let mut out = Vec::new();
    for support in supports(arity, h, max_nodes) {
        let n = support.len();
        let total = k.checked_pow(n as u32).filter(|&t| t <= 1 << 20).ok_or(Error::LimitExceeded(1 << 20))?;
        for code in 0..total {
            let mut c = code;
            let labels: BTreeMap<Word, Symbol> = support
                .iter()
                .map(|w| {
                    let s = c % k;
                    c /= k;
                    (w.clone(), s)
                })
                .collect();
            let tree = labels.iter().map(|(w, &s)| (w.clone(), Some(s))).collect();
            if rel.feasible_sets(&tree).get(&Word::root()).is_some_and(|s| !s.is_empty()) {
                out.push(Pattern::new(arity, labels)?);
            }
        }
    }
    Ok(out)
}

struct Decision {
    status: Status,
    code: Option<CompletePrefixCode>,
    tried: usize,
    counterexample: Option<Counterexample>,
    note: Option<String>,
}

/// The exact closure decides whether any code works; the canonical scan then looks for
/// the first one, which has at most as many leaves as the closure's code.
fn decide_code(engine: &Engine, budgets: &Budgets) -> Decision {
    match engine.closure(budgets.closure_cap) {
        Closure::Found(found) => {
            let limit = found.leaf_count().min(budgets.cpc_leaves);
            let (code, tried) = engine.scan(limit, |_| true);
            match code {
                Some(code) => Decision { status: Status::Verified, code: Some(code), tried, counterexample: None, note: None },
                None => Decision {
                    status: Status::Verified,
                    note: Some(format!("no code with at most {} leaves works; the closure found {found}", budgets.cpc_leaves)),
                    code: Some(found),
                    tried,
                    counterexample: None,
                },
            }
        }
        Closure::Exhausted(maximal) => {
            let pair = engine.fam.pairs.iter().copied().find(|&p| engine.fails_everywhere(&maximal, p));
            let counterexample = pair.map(|(u, j)| Counterexample {
                u: engine.fam.us[u].pattern.clone(),
                v: engine.fam.reps[j].clone(),
                codes_tried: 0,
                note: "no complete prefix code of any size connects this pair".into(),
                others: Vec::new(),
            });
            let note = if counterexample.is_none() {
                "every pair connects through some code, but no single code connects them all"
            } else {
                "the closure of maximal feasible-set vectors is exhausted"
            };
            Decision { status: Status::Refuted, code: None, tried: 0, counterexample, note: Some(note.into()) }
        }
        Closure::Capped(cap) => {
            let (code, tried) = engine.scan(budgets.cpc_leaves, |_| true);
            let note = format!("closure exceeded {cap} maximal vectors");
            match code {
                Some(code) => Decision { status: Status::Verified, code: Some(code), tried, counterexample: None, note: Some(note) },
                None => Decision { status: Status::Unknown, code: None, tried, counterexample: None, note: Some(note) },
            }
        }
    }
}

fn decide_uniform(engine: &Engine, budgets: &Budgets) -> (Decision, Option<Vec<engine::Vector>>) {
    match engine.uniform(budgets.closure_cap) {
        Uniform::Hit(k) => (
            Decision {
                status: Status::Verified,
                code: Some(CompletePrefixCode::uniform(engine.rel.arity(), k)),
                tried: k,
                counterexample: None,
                note: None,
            },
            None,
        ),
        Uniform::Cycle { last_k, levels } => (
            Decision {
                status: Status::Refuted,
                code: None,
                tried: last_k,
                counterexample: None,
                note: Some(format!("the Σ^k level sets repeat after k = {last_k}; every larger k behaves like a smaller one")),
            },
            Some(levels),
        ),
        Uniform::Capped(cap) => (
            Decision { status: Status::Unknown, code: None, tried: cap, counterexample: None, note: Some(format!("no repeat within k <= {cap}")) },
            None,
        ),
    }
}

/// First block pair (by height, then canonical order) failing for every `Σ^k`.
fn uniform_counterexample(x: &TreeShift, rel: &LocalRelation, budgets: &Budgets) -> Result<Option<Counterexample>> {
    for j in 1..=budgets.height {
        let fam = block_family(x, rel, [j])?;
        let engine = Engine::new(rel, &fam);
        if let (_, Some(levels)) = decide_uniform(&engine, budgets) {
            let failing: Vec<(usize, usize)> =
                fam.pairs.iter().copied().filter(|&p| engine.fails_all_levels(&levels, p)).collect();
            if let Some(&(u, c)) = failing.first() {
                let others = failing[1..]
                    .iter()
                    .take(OTHERS_LIMIT)
                    .map(|&(u, c)| (fam.us[u].pattern.clone(), fam.reps[c].clone()))
                    .collect();
                return Ok(Some(Counterexample {
                    others,
                    u: fam.us[u].pattern.clone(),
                    v: fam.reps[c].clone(),
                    codes_tried: levels.len(),
                    note: "fails for every P = Σ^k: the level sets below the leaves repeat without ever covering \
                           all leaf symbols of u"
                        .into(),
                }));
            }
        }
    }
    Ok(None)
}

fn witness_pattern(x: &TreeShift, fam: &Family, code: &CompletePrefixCode) -> Option<Pattern> {
    let &(u, c) = fam.pairs.first()?;
    connect_through(x, &fam.us[u].pattern, &fam.reps[c], code).ok()
}

fn apply(verdict: &mut Verdict, d: Decision) {
    verdict.status = d.status;
    verdict.witness_code = d.code;
    verdict.counterexample = d.counterexample;
    if let Some(n) = d.note {
        verdict.notes.push(n);
    }
    verdict.notes.push(format!("{} codes scanned", d.tried));
}

/// Decides or bounds `property` for `x` within `budgets`.
pub fn check_property(x: &TreeShift, property: Property, budgets: &Budgets) -> Result<Verdict> {
    if let TreeShift::LevelConstant(_) = x {
        return level::check(x, property, budgets);
    }
    let identity = x.is_finite_type() && finite_type(x)?.recoded.is_none();
    let rel = image_relation(x)?.expect("local kinds");
    if rel.core().is_empty() {
        let mut v = Verdict::new(property, budgets);
        v.status = Status::Verified;
        v.unconditional = true;
        v.notes.push("empty shift: every property holds vacuously".into());
        return Ok(v);
    }
    let d = x.arity();
    let mut verdict = Verdict::new(property, budgets);
    let levels = leaf_levels(&rel, budgets.height + 1);
    let repeats = (0..budgets.height).any(|i| levels[i] == levels[budgets.height]);

    let grouped = matches!(property, Property::Tm | Property::Irreducible) || (budgets.per_n && matches!(property, Property::Bg | Property::Ubg));
    if !grouped {
        let fam = if identity {
            symbol_family(&rel, d, rel.core())
        } else if matches!(property, Property::Si | Property::Usi) {
            let mut fam = Family::default();
            for p in admissible_patterns(&rel, d, budgets.height, budgets.pattern_nodes)? {
                fam.add_u(p);
            }
            for j in 1..=budgets.height {
                for b in enumerate_blocks(x, j, BLOCK_LIMIT)? {
                    fam.add_v(&rel, &b.to_pattern());
                }
            }
            fam.pair_all();
            fam
        } else {
            block_family(x, &rel, 1..=budgets.height)?
        };
        let engine = Engine::new(&rel, &fam);
        let decision = if property.uniform() { decide_uniform(&engine, budgets).0 } else { decide_code(&engine, budgets) };
        apply(&mut verdict, decision);
        if verdict.status == Status::Refuted {
            verdict.unconditional = true;
            if verdict.counterexample.is_none() && property.uniform() {
                verdict.counterexample = uniform_counterexample(x, &rel, budgets)?;
            }
        }
        if verdict.status == Status::Verified {
            let code = verdict.witness_code.clone().expect("verified with code");
            verdict.witness_pattern = witness_pattern(x, &fam, &code);
            if identity {
                verdict.unconditional = true;
                verdict.upgrade_rule = Some(
                    "one-step reduction: connectivity through P depends only on the pair (leaf symbol of u, root \
                     symbol of v); every pair over the essential core already occurs for single-symbol patterns, \
                     so the verdict covers all heights and all patterns"
                        .into(),
                );
            } else {
                verdict.notes.push(format!("verified for the enumerated family ({} u-patterns, {} v-classes)", fam.us.len(), fam.classes.len()));
            }
        }
        if identity {
            verdict.notes.push(format!("pattern budget echoed only ({} nodes); the reduction is exact", budgets.pattern_nodes));
        }
        return Ok(verdict);
    }

    // grouped checks: one code per group
    let mut any_unknown = false;
    let mut refuted = None;
    let groups: Vec<(String, Family)> = match property {
        Property::Tm if identity => (1..=budgets.height)
            .map(|p| (format!("p={p}, q any"), symbol_family(&rel, d, &levels[p - 1])))
            .collect(),
        Property::Tm => {
            let mut gs = Vec::new();
            for p in 1..=budgets.height {
                for q in 1..=budgets.height {
                    let mut fam = Family::default();
                    for b in enumerate_blocks(x, p, BLOCK_LIMIT)? {
                        fam.add_u(b.to_pattern());
                    }
                    for b in enumerate_blocks(x, q, BLOCK_LIMIT)? {
                        fam.add_v(&rel, &b.to_pattern());
                    }
                    fam.pair_all();
                    gs.push((format!("p={p}, q={q}"), fam));
                }
            }
            gs
        }
        _ if identity => (1..=budgets.height).map(|n| (format!("n={n}"), symbol_family(&rel, d, &levels[n - 1]))).collect(),
        _ => (1..=budgets.height).map(|n| Ok((format!("n={n}"), block_family(x, &rel, [n])?))).collect::<Result<_>>()?,
    };
    let mut tried_total = 0;
    for (group, fam) in &groups {
        let engine = Engine::new(&rel, fam);
        if property == Property::Irreducible {
            match irreducible_group(&engine, budgets, group, &mut verdict) {
                Status::Refuted => {
                    refuted = Some(group.clone());
                    break;
                }
                Status::Unknown => any_unknown = true,
                Status::Verified => {}
            }
            continue;
        }
        let decision = if property == Property::Ubg { decide_uniform(&engine, budgets).0 } else { decide_code(&engine, budgets) };
        tried_total += decision.tried;
        match decision.status {
            Status::Verified => {
                let code = decision.code.expect("verified with code");
                verdict.witness_codes.push(GroupWitness { group: group.clone(), code });
                if let Some(n) = decision.note {
                    verdict.notes.push(format!("{group}: {n}"));
                }
            }
            Status::Refuted => {
                verdict.counterexample = decision.counterexample;
                if let Some(n) = decision.note {
                    verdict.notes.push(format!("{group}: {n}"));
                }
                refuted = Some(group.clone());
                break;
            }
            Status::Unknown => any_unknown = true,
        }
    }
    if property != Property::Irreducible {
        verdict.notes.push(format!("{tried_total} codes scanned"));
    }
    if let Some(g) = refuted {
        verdict.status = Status::Refuted;
        verdict.unconditional = true;
        verdict.notes.push(format!("group {g} has no connecting code"));
        if verdict.counterexample.is_none() && property == Property::Ubg {
            verdict.counterexample = uniform_counterexample(x, &rel, budgets)?;
        }
    } else if any_unknown {
        verdict.status = Status::Unknown;
    } else {
        verdict.status = Status::Verified;
        verdict.witness_code = verdict.witness_codes.first().map(|g| g.code.clone());
        if identity && repeats {
            verdict.unconditional = true;
            verdict.upgrade_rule = Some(format!(
                "the leaf-symbol sets L_n of n-blocks repeat within n <= {}; every larger height poses the same \
                 (leaf symbol, root symbol) requirements as a checked one",
                budgets.height
            ));
        }
    }
    if property == Property::Irreducible {
        verdict.notes.push("codes are planted below the root and lie in the union of Σ^k for k >= n".into());
    }
    Ok(verdict)
}

/// Per-pair codes for irreducibility within one height group.
fn irreducible_group(engine: &Engine, budgets: &Budgets, group: &str, verdict: &mut Verdict) -> Status {
    let fam = engine.fam;
    let closure = engine.closure(budgets.closure_cap);
    let cut = group.trim_start_matches("n=").parse::<usize>().unwrap_or(1);
    let mut status = Status::Verified;
    for &(u, c) in &fam.pairs {
        let single = Family { us: vec![fam.us[u].clone()], classes: vec![fam.classes[c].clone()], reps: vec![fam.reps[c].clone()], pairs: vec![(0, 0)] };
        let one = Engine::new(engine.rel, &single);
        let fallback = match &closure {
            Closure::Found(code) => Some(code.clone()),
            Closure::Exhausted(m) => engine.connecting_code(m, (u, c)),
            Closure::Capped(_) => None,
        };
        let exhausted = matches!(closure, Closure::Exhausted(_));
        let (code, tried) = if exhausted && fallback.is_none() {
            (None, 0)
        } else {
            let limit = fallback.as_ref().map_or(budgets.cpc_leaves, |f| f.leaf_count().min(budgets.cpc_leaves));
            one.scan(limit, |_| true)
        };
        let code = code.or(fallback);
        let label = |p: &Pattern| p.iter().map(|(_, s)| s.to_string()).collect::<String>();
        match code {
            Some(code) => verdict.witness_codes.push(GroupWitness {
                group: format!("{group}, u={}, v={}: P = Σ^{}·Q", label(&fam.us[u].pattern), label(&fam.reps[c]), cut - 1),
                code,
            }),
            None => {
                if let Closure::Exhausted(_) = closure {
                    verdict.counterexample = Some(Counterexample {
                        u: fam.us[u].pattern.clone(),
                        v: fam.reps[c].clone(),
                        codes_tried: tried,
                        note: "no complete prefix code of any size connects this pair".into(),
                        others: Vec::new(),
                    });
                    return Status::Refuted;
                }
                status = Status::Unknown;
            }
        }
    }
    status
}

#[derive(Clone, Debug)]
pub struct HierarchyReport {
    pub verdicts: Vec<Verdict>,
    pub violations: Vec<String>,
    pub finite_type: bool,
}

impl HierarchyReport {
    pub fn get(&self, p: Property) -> &Verdict {
        self.verdicts.iter().find(|v| v.property == p).expect("all properties present")
    }
}

pub const IMPLICATIONS: [(Property, Property); 5] = [
    (Property::Usi, Property::Si),
    (Property::Usi, Property::Ubg),
    (Property::Si, Property::Bg),
    (Property::Ubg, Property::Bg),
    (Property::Bg, Property::Tm),
];

/// Runs every checker and reports decided verdicts that contradict the mixing diagram
/// or, for shifts of finite type, the equivalences BG ⇔ SI and UBG ⇔ USI.
pub fn hierarchy_report(x: &TreeShift, budgets: &Budgets) -> Result<HierarchyReport> {
    let verdicts = Property::ALL.iter().map(|&p| check_property(x, p, budgets)).collect::<Result<Vec<_>>>()?;
    let mut report = HierarchyReport { verdicts, violations: Vec::new(), finite_type: x.is_finite_type() };
    for (a, b) in IMPLICATIONS {
        if report.get(a).status == Status::Verified && report.get(b).status == Status::Refuted {
            report.violations.push(format!("{a} VERIFIED but {b} REFUTED"));
        }
    }
    if report.finite_type {
        for (a, b) in [(Property::Bg, Property::Si), (Property::Ubg, Property::Usi)] {
            let (va, vb) = (report.get(a), report.get(b));
            if va.is_decided() && vb.is_decided() && va.status != vb.status {
                report.violations.push(format!("finite type but {a} {} and {b} {}", va.status, vb.status));
            }
        }
    }
    Ok(report)
}
