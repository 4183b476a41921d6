//! Emptiness, local admissibility, extension, and block counting/enumeration.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::pattern::{Block, Pattern};
use crate::relation::{tuple_core, LocalRelation};
use crate::shift::{as_one_step, image_blocks, recode_to_vertex, ForbiddenShift, TreeShift, VertexShift};
use crate::symset::SymbolSet;
use crate::word::Word;
use crate::Symbol;

/// Cap on enumerated images when counting blocks of a sofic image.
pub const DEFAULT_SOFIC_CAP: usize = 200_000;

/// One step of the deletion fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deletion {
    pub symbol: Symbol,
    pub round: usize,
    /// Direction with no surviving successor (vertex shifts only).
    pub direction: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct EssentialCore {
    /// Alphabet the core lives in; the recoded alphabet when the window exceeds 2.
    pub alphabet: Alphabet,
    pub core: SymbolSet,
    pub trace: Vec<Deletion>,
    /// Allowed `[parent, children...]` tuples with every entry in the core.
    pub tuples: Vec<Vec<Symbol>>,
    /// Symbols of the shift's own alphabet that occur in some point.
    pub projected: SymbolSet,
    pub recoded: bool,
}

impl EssentialCore {
    pub fn names(&self) -> Vec<String> {
        self.core.iter().map(|s| self.alphabet.name(s).to_string()).collect()
    }
}

/// A finite-type shift as an identity relation, possibly over a higher-block alphabet.
#[derive(Clone, Debug)]
pub(crate) struct Tsft {
    pub arity: usize,
    pub alphabet: Alphabet,
    pub rel: LocalRelation,
    pub tuples: Vec<Vec<Symbol>>,
    pub vertex: Option<VertexShift>,
    /// `(window, m-blocks)` when symbols of `rel` stand for blocks of the original shift.
    pub recoded: Option<(usize, Vec<Block>)>,
}

impl Tsft {
    /// Relation whose outputs are labels of the original shift.
    pub fn out_relation(&self) -> LocalRelation {
        match &self.recoded {
            None => self.rel.clone(),
            Some((_, symbols)) => self.rel.image(self.alphabet.len(), |c| symbols[c.parent].root()),
        }
    }

    pub fn projected_core(&self) -> SymbolSet {
        match &self.recoded {
            None => self.rel.core().clone(),
            Some((_, symbols)) => SymbolSet::from_iter(self.alphabet.len(), self.rel.core().iter().map(|s| symbols[s].root())),
        }
    }

    pub fn decode(&self, b: &Block) -> Block {
        match &self.recoded {
            None => b.clone(),
            Some((m, symbols)) => decode(b, symbols, *m),
        }
    }
}

pub(crate) fn finite_type(x: &TreeShift) -> Result<Tsft> {
    let (vertex, one_step, recoded) = match x {
        TreeShift::Vertex(v) => (Some(v.clone()), as_one_step(v), None),
        TreeShift::OneStep(s) => (None, s.clone(), None),
        TreeShift::Forbidden(f) => match x.one_step() {
            Some(s) => (None, s, None),
            None => {
                let (v, code) = recode_to_vertex(x)?;
                let symbols: Vec<Block> = code.table().keys().cloned().collect();
                (Some(v.clone()), as_one_step(&v), Some((f.window(), symbols)))
            }
        },
        _ => return Err(Error::NotFiniteType),
    };
    let tuples: Vec<Vec<Symbol>> = one_step.allowed().iter().cloned().collect();
    Ok(Tsft {
        arity: x.arity(),
        alphabet: x.alphabet().clone(),
        rel: one_step.relation(),
        tuples,
        vertex,
        recoded,
    })
}

/// Height-`(h' + m - 1)` block of the original shift spelled by a recoded block of height `h'`.
fn decode(b: &Block, symbols: &[Block], m: usize) -> Block {
    let h = b.height();
    let d = b.arity();
    let labels = Word::all_up_to(d, h + m - 2)
        .map(|w| {
            let p = Word::from_directions(w.directions().take(h - 1));
            let s = w.strip_prefix(&p).expect("prefix");
            symbols[b.get(&p).expect("inside")].get(&s).expect("inside window")
        })
        .collect();
    Block::from_labels(d, h + m - 1, labels).expect("decoded shape")
}

fn vertex_core(v: &VertexShift) -> (SymbolSet, Vec<Deletion>) {
    let k = v.alphabet().len();
    let mut alive = SymbolSet::full(k);
    let mut trace = Vec::new();
    let mut round = 0;
    loop {
        round += 1;
        let doomed: Vec<(Symbol, usize)> = alive
            .iter()
            .filter_map(|a| {
                (0..v.arity()).find(|&i| !alive.iter().any(|b| v.allows(i, a, b))).map(|i| (a, i))
            })
            .collect();
        if doomed.is_empty() {
            return (alive, trace);
        }
        for (a, i) in doomed {
            alive.remove(a);
            trace.push(Deletion { symbol: a, round, direction: Some(i) });
        }
    }
}

/// Greatest set of symbols each having an allowed continuation inside the set.
pub fn essential_core(x: &TreeShift) -> Result<EssentialCore> {
    let t = finite_type(x)?;
    let size = t.rel.base_size();
    let (core, trace) = match (&t.vertex, &t.recoded) {
        (Some(v), None) => vertex_core(v),
        _ => {
            let (core, trace) = tuple_core(size, &t.tuples);
            (core, trace.into_iter().map(|(symbol, round)| Deletion { symbol, round, direction: None }).collect())
        }
    };
    debug_assert_eq!(&core, t.rel.core());
    let tuples = t.tuples.iter().filter(|tu| tu.iter().all(|&s| core.contains(s))).cloned().collect();
    let alphabet = match (&t.vertex, &t.recoded) {
        (Some(v), Some(_)) => v.alphabet().clone(),
        _ => t.alphabet.clone(),
    };
    Ok(EssentialCore {
        alphabet,
        projected: t.projected_core(),
        core,
        trace,
        tuples,
        recoded: t.recoded.is_some(),
    })
}

#[derive(Clone, Debug)]
pub struct Emptiness {
    pub empty: bool,
    /// Present for finite-type shifts (for a sofic image, the core of its base).
    pub core: Option<EssentialCore>,
    /// A block of the requested height, when nonempty.
    pub witness: Option<Block>,
}

/// Decides `X = ∅`. Nonempty answers carry a witness block of height `witness_height`.
pub fn is_empty(x: &TreeShift, witness_height: usize) -> Result<Emptiness> {
    let k = witness_height.max(1);
    match x {
        TreeShift::LevelConstant(l) => {
            Ok(Emptiness { empty: false, core: None, witness: Some(Block::constant(l.arity, k, 0)) })
        }
        TreeShift::SoficImage(code) => {
            let base = is_empty(code.input(), k + code.window() - 1)?;
            let witness = match &base.witness {
                Some(w) => Some(crate::shift::apply_block_map(code, w)?),
                None => None,
            };
            Ok(Emptiness { empty: base.empty, core: base.core, witness })
        }
        _ => {
            let core = essential_core(x)?;
            if core.core.is_empty() {
                return Ok(Emptiness { empty: true, core: Some(core), witness: None });
            }
            let t = finite_type(x)?;
            let tree = free_tree(x.arity(), k);
            let sol = t.out_relation().solve(&tree).expect("nonempty core fills any tree");
            Ok(Emptiness { empty: false, core: Some(core), witness: Some(block_of(x.arity(), k, &sol)) })
        }
    }
}

fn free_tree(arity: usize, height: usize) -> BTreeMap<Word, Option<Symbol>> {
    Word::all_up_to(arity, height - 1).map(|w| (w, None)).collect()
}

fn block_of(arity: usize, height: usize, sol: &BTreeMap<Word, (Symbol, Symbol)>) -> Block {
    Block::from_labels(arity, height, sol.values().map(|&(_, o)| o).collect()).expect("full tree")
}

fn check_alphabet(u: &Pattern, x: &TreeShift) -> Result<()> {
    if u.arity() != x.arity() || u.iter().any(|(_, s)| s >= x.alphabet().len()) {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

/// Whether some allowed tuple agrees with every child of `w` present in `u`.
fn cell_ok(tuples: &BTreeSet<Vec<Symbol>>, u: &Pattern, w: &Word, a: Symbol, d: usize) -> bool {
    let kids: Vec<Option<Symbol>> = (0..d).map(|i| u.get(&w.child(i))).collect();
    if kids.iter().all(Option::is_none) {
        return true;
    }
    tuples.iter().any(|t| t[0] == a && kids.iter().zip(&t[1..]).all(|(k, &b)| k.is_none_or(|k| k == b)))
}

/// No forbidden configuration occurs inside `u`; children outside the support are free.
pub fn locally_admissible(u: &Pattern, x: &TreeShift) -> Result<bool> {
    check_alphabet(u, x)?;
    let d = x.arity();
    Ok(match x {
        TreeShift::Vertex(v) => u.iter().all(|(w, a)| {
            (0..d).all(|i| u.get(&w.child(i)).is_none_or(|b| v.allows(i, a, b)))
        }),
        TreeShift::OneStep(s) => u.iter().all(|(w, a)| cell_ok(s.allowed(), u, w, a, d)),
        TreeShift::Forbidden(f) => {
            !u.support().any(|at| f.patterns().iter().any(|p| ForbiddenShift::embeds(p, u, at)))
        }
        TreeShift::LevelConstant(_) => {
            let mut level: BTreeMap<usize, Symbol> = BTreeMap::new();
            u.iter().all(|(w, s)| *level.entry(w.len()).or_insert(s) == s)
        }
        TreeShift::SoficImage(_) => {
            let tree: BTreeMap<Word, Option<Symbol>> = u.iter().map(|(w, s)| (w.clone(), Some(s))).collect();
            match image_relation(x)? {
                Some(rel) => rel.solve(&tree).is_some(),
                None => return Err(Error::Unsupported("sofic images need a window of at most 2".into())),
            }
        }
    })
}

/// Output-labeled relation whose core-restricted solutions are exactly the patterns of `x`.
/// `None` for the level-constant kind, which is not given by local rules.
pub(crate) fn image_relation(x: &TreeShift) -> Result<Option<LocalRelation>> {
    match x {
        TreeShift::LevelConstant(_) => Ok(None),
        TreeShift::SoficImage(code) => {
            let base = finite_type(code.input())?;
            if base.recoded.is_some() || code.window() > 2 {
                return Err(Error::Unsupported(format!(
                    "sofic image with window {} over a base of window {}",
                    code.window(),
                    base.recoded.as_ref().map_or(2, |r| r.0)
                )));
            }
            let d = base.arity;
            let m = code.window();
            let rel = base.rel.image(code.output().len(), |c| {
                let key = if m == 1 {
                    Block::constant(d, 1, c.parent)
                } else {
                    let mut labels = vec![c.parent];
                    labels.extend_from_slice(&c.children);
                    Block::from_labels(d, 2, labels).expect("cell shape")
                };
                code.lookup(&key).expect("table covers admissible blocks")
            });
            Ok(Some(rel))
        }
        _ => Ok(Some(finite_type(x)?.out_relation())),
    }
}

/// The first (canonical) height-`height` block of `x` agreeing with `u`.
pub fn extend_pattern(x: &TreeShift, u: &Pattern, height: usize) -> Result<Block> {
    check_alphabet(u, x)?;
    if height < u.height() {
        return Err(Error::Schema(format!("target height {height} is below the pattern height {}", u.height())));
    }
    let admissible = match x {
        TreeShift::SoficImage(_) => true,
        _ => locally_admissible(u, x)?,
    };
    if !admissible {
        return Err(Error::NotLocallyAdmissible);
    }
    let d = x.arity();
    if let TreeShift::LevelConstant(l) = x {
        let levels: Vec<Symbol> = (0..height)
            .map(|j| u.iter().find(|(w, _)| w.len() == j).map_or(0, |(_, s)| s))
            .collect();
        return Ok(l.block_from_levels(&levels));
    }
    if x.is_finite_type() {
        let core = finite_type(x)?.projected_core();
        if let Some((_, s)) = u.iter().find(|&(_, s)| !core.contains(s)) {
            return Err(Error::OutsideEssentialCore(x.alphabet().name(s).to_string()));
        }
    }
    let rel = image_relation(x)?.expect("local kinds");
    let mut tree = free_tree(d, height);
    for (w, s) in u.iter() {
        tree.insert(w.clone(), Some(s));
    }
    let sol = rel.solve(&tree).ok_or(match x {
        TreeShift::SoficImage(_) => Error::NotLocallyAdmissible,
        _ => Error::NotExtensible,
    })?;
    Ok(block_of(d, height, &sol))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCount {
    pub height: usize,
    /// `c_n(a)` indexed by symbol of the shift's alphabet.
    pub per_root: Vec<BigUint>,
    pub total: BigUint,
}

fn relation_counts(rel: &LocalRelation, n: usize) -> Vec<BigUint> {
    let size = rel.base_size();
    let mut c: Vec<BigUint> =
        (0..size).map(|a| if rel.core().contains(a) { BigUint::one() } else { BigUint::zero() }).collect();
    for _ in 1..n {
        let mut next = vec![BigUint::zero(); size];
        for cell in rel.cells() {
            let mut prod = BigUint::one();
            for &b in &cell.children {
                prod *= &c[b];
            }
            next[cell.parent] += prod;
        }
        c = next;
    }
    c
}

fn count_from(height: usize, per_root: Vec<BigUint>) -> BlockCount {
    let total = per_root.iter().sum();
    BlockCount { height, per_root, total }
}

/// Exact `c_n(a)` and `|B_n|`, with `c_1(a) = 1` only for symbols occurring in some point.
pub fn count_blocks(x: &TreeShift, n: usize) -> Result<BlockCount> {
    count_blocks_capped(x, n, DEFAULT_SOFIC_CAP)
}

pub fn count_blocks_capped(x: &TreeShift, n: usize, cap: usize) -> Result<BlockCount> {
    if n == 0 {
        return Err(Error::Schema("block height must be at least 1".into()));
    }
    let k = x.alphabet().len();
    match x {
        TreeShift::LevelConstant(l) => {
            let each = BigUint::from(k).pow((n - 1) as u32);
            let _ = l;
            Ok(count_from(n, vec![each; k]))
        }
        TreeShift::SoficImage(code) => {
            let blocks = image_blocks(code, n, cap).map_err(|e| match e {
                Error::LimitExceeded(_) => Error::CapExceeded(cap),
                other => other,
            })?;
            if blocks.len() > cap {
                return Err(Error::CapExceeded(cap));
            }
            let mut per_root = vec![BigUint::zero(); k];
            for b in &blocks {
                per_root[b.root()] += 1u32;
            }
            Ok(count_from(n, per_root))
        }
        _ => {
            let t = finite_type(x)?;
            match &t.recoded {
                None => Ok(count_from(n, relation_counts(&t.rel, n))),
                Some((m, symbols)) => {
                    let mut per_root = vec![BigUint::zero(); k];
                    if n >= *m {
                        for (u, c) in relation_counts(&t.rel, n - m + 1).into_iter().enumerate() {
                            per_root[symbols[u].root()] += c;
                        }
                    } else {
                        let tops: BTreeSet<Block> = t.rel.core().iter().map(|u| symbols[u].truncate(n)).collect();
                        for b in tops {
                            per_root[b.root()] += 1u32;
                        }
                    }
                    Ok(count_from(n, per_root))
                }
            }
        }
    }
}

struct Builder<'a> {
    rel: &'a LocalRelation,
    memo: HashMap<(Symbol, usize), Vec<Block>>,
}

impl Builder<'_> {
    fn rooted(&mut self, a: Symbol, h: usize) -> Vec<Block> {
        if let Some(v) = self.memo.get(&(a, h)) {
            return v.clone();
        }
        let d = self.rel.arity();
        let out = if h == 1 {
            vec![Block::constant(d, 1, a)]
        } else {
            let cells: Vec<Vec<Symbol>> = self.rel.cells_of(a).map(|c| c.children.clone()).collect();
            let mut out = Vec::new();
            for kids in cells {
                let lists: Vec<Vec<Block>> = kids.iter().map(|&b| self.rooted(b, h - 1)).collect();
                let mut idx = vec![0; d];
                'product: loop {
                    let chosen: Vec<Block> = (0..d).map(|i| lists[i][idx[i]].clone()).collect();
                    out.push(Block::from_children(a, &chosen).expect("same shapes"));
                    let mut i = d;
                    loop {
                        if i == 0 {
                            break 'product;
                        }
                        i -= 1;
                        idx[i] += 1;
                        if idx[i] < lists[i].len() {
                            break;
                        }
                        idx[i] = 0;
                    }
                }
            }
            out
        };
        self.memo.insert((a, h), out.clone());
        out
    }

    fn all(&mut self, h: usize) -> Vec<Block> {
        let core: Vec<Symbol> = self.rel.core().iter().collect();
        core.into_iter().flat_map(|a| self.rooted(a, h)).collect()
    }
}

fn check_limit(count: &BigUint, limit: usize) -> Result<()> {
    if *count > BigUint::from(limit) {
        return Err(Error::LimitExceeded(limit));
    }
    Ok(())
}

/// All height-`n` blocks of `x`, in canonical order.
pub fn enumerate_blocks(x: &TreeShift, n: usize, limit: usize) -> Result<Vec<Block>> {
    if n == 0 {
        return Err(Error::Schema("block height must be at least 1".into()));
    }
    let k = x.alphabet().len();
    let mut out = match x {
        TreeShift::LevelConstant(l) => {
            check_limit(&BigUint::from(k).pow(n as u32), limit)?;
            let mut v = Vec::new();
            let mut levels = vec![0; n];
            loop {
                v.push(l.block_from_levels(&levels));
                let Some(i) = (0..n).rev().find(|&i| levels[i] + 1 < k) else { break };
                levels[i] += 1;
                levels[i + 1..].iter_mut().for_each(|s| *s = 0);
            }
            v
        }
        TreeShift::SoficImage(code) => {
            let v: Vec<Block> = image_blocks(code, n, limit)?.into_iter().collect();
            if v.len() > limit {
                return Err(Error::LimitExceeded(limit));
            }
            v
        }
        _ => {
            check_limit(&count_blocks(x, n)?.total, limit)?;
            let t = finite_type(x)?;
            match &t.recoded {
                None => Builder { rel: &t.rel, memo: HashMap::new() }.all(n),
                Some((m, symbols)) if n < *m => {
                    let set: BTreeSet<Block> = t.rel.core().iter().map(|u| symbols[u].truncate(n)).collect();
                    set.into_iter().collect()
                }
                Some((m, _)) => {
                    let raw = Builder { rel: &t.rel, memo: HashMap::new() }.all(n - m + 1);
                    raw.iter().map(|b| t.decode(b)).collect()
                }
            }
        }
    };
    out.sort();
    Ok(out)
}

/// Every height-`h` block passing the local rules, core or not, by backtracking in
/// breadth-first order.
pub fn locally_admissible_blocks(x: &TreeShift, h: usize, limit: usize) -> Result<Vec<Block>> {
    let d = x.arity();
    let k = x.alphabet().len();
    if let TreeShift::SoficImage(_) = x {
        return Err(Error::Unsupported("raw enumeration over a sofic image".into()));
    }
    let tuples = x.one_step().map(|s| s.allowed().clone());
    let words: Vec<Word> = Word::all_up_to(d, h - 1).collect();
    let n = words.len();
    let mut labels = vec![0usize; n];
    let mut out = Vec::new();

    let ok = |labels: &[Symbol], i: usize| -> bool {
        let y = &words[i];
        match x {
            TreeShift::LevelConstant(_) => labels[i] == labels[Word::from_directions(vec![0; y.len()]).bfs_index(d)],
            TreeShift::Forbidden(f) if tuples.is_none() => {
                let assigned = |w: &Word| w.len() < h && w.bfs_index(d) <= i;
                let mut at = Some(y.clone());
                while let Some(a) = at {
                    let rel = y.strip_prefix(&a).expect("ancestor");
                    for p in f.patterns() {
                        if p.contains(&rel)
                            && p.support().all(|w| assigned(&a.concat(w)))
                            && p.iter().all(|(w, s)| labels[a.concat(w).bfs_index(d)] == s)
                        {
                            return false;
                        }
                    }
                    at = a.parent();
                }
                true
            }
            _ => {
                let Some(p) = y.parent() else { return true };
                let parent = labels[p.bfs_index(d)];
                let dir = y.last().expect("non-root");
                let t = tuples.as_ref().expect("one-step form");
                t.iter().any(|tu| {
                    tu[0] == parent && (0..=dir).all(|j| tu[1 + j] == labels[p.child(j).bfs_index(d)])
                })
            }
        }
    };

    let mut i = 0usize;
    loop {
        if ok(&labels, i) {
            if i + 1 == n {
                out.push(Block::from_labels(d, h, labels.clone())?);
                if out.len() > limit {
                    return Err(Error::LimitExceeded(limit));
                }
            } else {
                i += 1;
                labels[i] = 0;
                continue;
            }
        }
        // advance to the next candidate, backtracking past exhausted positions
        loop {
            labels[i] += 1;
            if labels[i] < k {
                break;
            }
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
        }
    }
}
