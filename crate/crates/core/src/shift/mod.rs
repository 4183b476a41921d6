//! Tree-shift definitions and their JSON document format.

mod block_code;
mod recode;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::pattern::{check_arity, default_arity, Block, Pattern, PatternDoc};
use crate::relation::LocalRelation;
use crate::Symbol;

pub use block_code::{apply_block_map, image_blocks, SlidingBlockCode};
pub use recode::{as_one_step, recode_to_vertex};

/// A vertex tree-shift: one 0-1 matrix per direction, `A_i[parent][child]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexShift {
    pub(crate) arity: usize,
    pub(crate) alphabet: Alphabet,
    pub(crate) matrices: Vec<Vec<Vec<bool>>>,
}

impl VertexShift {
    pub fn new(alphabet: Alphabet, matrices: Vec<Vec<Vec<bool>>>) -> Result<Self> {
        let arity = matrices.len();
        check_arity(arity)?;
        let k = alphabet.len();
        for m in &matrices {
            if m.len() != k || m.iter().any(|row| row.len() != k) {
                return Err(Error::Schema(format!("every matrix must be {k}x{k}")));
            }
        }
        Ok(VertexShift { arity, alphabet, matrices })
    }

    /// Convenience constructor from integer matrices over the numeric alphabet.
    pub fn from_ints(matrices: &[Vec<Vec<u8>>]) -> Result<Self> {
        let k = matrices.first().map_or(0, |m| m.len());
        let ms = matrices
            .iter()
            .map(|m| {
                m.iter()
                    .map(|row| row.iter().map(|&e| check_entry(e as i64)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        VertexShift::new(Alphabet::numeric(k.max(1)), ms)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn allows(&self, dir: usize, parent: Symbol, child: Symbol) -> bool {
        self.matrices[dir][parent][child]
    }

    pub fn matrix(&self, dir: usize) -> &[Vec<bool>] {
        &self.matrices[dir]
    }
}

fn check_entry(e: i64) -> Result<bool> {
    match e {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(Error::NonBinaryMatrixEntry(other)),
    }
}

/// A one-step shift: the allowed height-2 blocks `(a; b_0, ..., b_{d-1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneStepShift {
    pub(crate) arity: usize,
    pub(crate) alphabet: Alphabet,
    pub(crate) allowed: BTreeSet<Vec<Symbol>>,
}

impl OneStepShift {
    pub fn new(arity: usize, alphabet: Alphabet, allowed: impl IntoIterator<Item = Vec<Symbol>>) -> Result<Self> {
        check_arity(arity)?;
        let allowed: BTreeSet<Vec<Symbol>> = allowed.into_iter().collect();
        for t in &allowed {
            if t.len() != arity + 1 || t.iter().any(|&s| s >= alphabet.len()) {
                return Err(Error::Schema(format!("tuple {t:?} does not fit arity {arity}")));
            }
        }
        Ok(OneStepShift { arity, alphabet, allowed })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Tuples `[parent, child_0, ..., child_{d-1}]` in canonical order.
    pub fn allowed(&self) -> &BTreeSet<Vec<Symbol>> {
        &self.allowed
    }

    pub fn relation(&self) -> LocalRelation {
        LocalRelation::from_tuples(self.arity, self.alphabet.len(), self.allowed.iter().cloned())
    }
}

/// A shift avoiding a finite list of patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenShift {
    pub(crate) arity: usize,
    pub(crate) alphabet: Alphabet,
    pub(crate) forbidden: Vec<Pattern>,
    pub(crate) removed: Vec<String>,
    pub(crate) window: usize,
}

impl ForbiddenShift {
    /// Height-1 forbidden patterns are folded into the alphabet; every other pattern
    /// containing a removed symbol can never occur and is dropped.
    pub fn new(arity: usize, alphabet: Alphabet, forbidden: Vec<Pattern>) -> Result<Self> {
        check_arity(arity)?;
        let removed: BTreeSet<Symbol> = forbidden.iter().filter(|p| p.len() == 1).map(|p| p.root()).collect();
        let kept: Vec<String> =
            (0..alphabet.len()).filter(|s| !removed.contains(s)).map(|s| alphabet.name(s).to_string()).collect();
        if kept.is_empty() {
            return Err(Error::EmptyRecodedAlphabet(1));
        }
        let reduced = Alphabet::new(kept)?;
        let mut patterns = Vec::new();
        for p in forbidden {
            if p.arity() != arity {
                return Err(Error::AlphabetMismatch);
            }
            if p.len() == 1 || p.symbols().iter().any(|s| removed.contains(s)) {
                continue;
            }
            let labels = p
                .iter()
                .map(|(w, s)| Ok((w.clone(), reduced.symbol(alphabet.name(s))?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            patterns.push(Pattern::new(arity, labels)?);
        }
        patterns.sort();
        patterns.dedup();
        let window = patterns.iter().map(Pattern::height).max().unwrap_or(1).max(2);
        let removed = removed.iter().map(|&s| alphabet.name(s).to_string()).collect();
        Ok(ForbiddenShift { arity, alphabet: reduced, forbidden: patterns, removed, window })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.forbidden
    }

    /// Largest forbidden height `m` (at least 2).
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn removed_symbols(&self) -> &[String] {
        &self.removed
    }

    /// Equivalent one-step shift; only exact when the window is 2.
    pub(crate) fn to_one_step(&self) -> Option<OneStepShift> {
        if self.window > 2 {
            return None;
        }
        let k = self.alphabet.len();
        let d = self.arity;
        let mut allowed = Vec::new();
        let mut tuple = vec![0; d + 1];
        loop {
            let hit = self.forbidden.iter().any(|f| {
                f.iter().all(|(w, s)| match w.len() {
                    0 => tuple[0] == s,
                    _ => tuple[1 + w.last().expect("nonempty")] == s,
                })
            });
            if !hit {
                allowed.push(tuple.clone());
            }
            let mut i = d;
            loop {
                tuple[i] += 1;
                if tuple[i] < k {
                    break;
                }
                tuple[i] = 0;
                if i == 0 {
                    return Some(OneStepShift::new(d, self.alphabet.clone(), allowed).expect("well-formed tuples"));
                }
                i -= 1;
            }
        }
    }

    /// Whether forbidden pattern `f` occurs at node `at` of `p`.
    pub(crate) fn embeds(f: &Pattern, p: &Pattern, at: &crate::word::Word) -> bool {
        f.iter().all(|(w, s)| p.get(&at.concat(w)) == Some(s))
    }
}

/// Labelings whose labels are constant on every level (not of finite type).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelConstantShift {
    pub(crate) arity: usize,
    pub(crate) alphabet: Alphabet,
}

impl LevelConstantShift {
    pub fn new(arity: usize, alphabet: Alphabet) -> Result<Self> {
        check_arity(arity)?;
        Ok(LevelConstantShift { arity, alphabet })
    }

    /// The block of height `levels.len()` with level `j` labeled `levels[j]`.
    pub fn block_from_levels(&self, levels: &[Symbol]) -> Block {
        let labels = levels
            .iter()
            .enumerate()
            .flat_map(|(j, &s)| std::iter::repeat_n(s, self.arity.pow(j as u32)))
            .collect();
        Block::from_labels(self.arity, levels.len(), labels).expect("level sizes add up")
    }
}

/// The five supported ways of defining a tree-shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeShift {
    Vertex(VertexShift),
    OneStep(OneStepShift),
    Forbidden(ForbiddenShift),
    LevelConstant(LevelConstantShift),
    SoficImage(Box<SlidingBlockCode>),
}

impl TreeShift {
    pub fn arity(&self) -> usize {
        match self {
            TreeShift::Vertex(x) => x.arity,
            TreeShift::OneStep(x) => x.arity,
            TreeShift::Forbidden(x) => x.arity,
            TreeShift::LevelConstant(x) => x.arity,
            TreeShift::SoficImage(c) => c.input().arity(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            TreeShift::Vertex(x) => &x.alphabet,
            TreeShift::OneStep(x) => &x.alphabet,
            TreeShift::Forbidden(x) => &x.alphabet,
            TreeShift::LevelConstant(x) => &x.alphabet,
            TreeShift::SoficImage(c) => c.output(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TreeShift::Vertex(_) => "vertex",
            TreeShift::OneStep(_) => "one_step",
            TreeShift::Forbidden(_) => "forbidden",
            TreeShift::LevelConstant(_) => "level_constant",
            TreeShift::SoficImage(_) => "sofic_image",
        }
    }

    pub fn is_finite_type(&self) -> bool {
        matches!(self, TreeShift::Vertex(_) | TreeShift::OneStep(_) | TreeShift::Forbidden(_))
    }

    /// The shift as a one-step set of allowed height-2 blocks, when that is exact
    /// over its own alphabet (vertex, one-step, and window-2 forbidden kinds).
    pub fn one_step(&self) -> Option<OneStepShift> {
        match self {
            TreeShift::Vertex(x) => Some(as_one_step(x)),
            TreeShift::OneStep(x) => Some(x.clone()),
            TreeShift::Forbidden(x) => x.to_one_step(),
            _ => None,
        }
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let doc: ShiftDoc = serde_json::from_str(text)?;
        TreeShift::from_doc(&doc)
    }

    pub fn from_doc(doc: &ShiftDoc) -> Result<Self> {
        parse_shift(doc)
    }

    pub fn to_doc(&self) -> ShiftDoc {
        let alphabet = Some(self.alphabet().names().to_vec());
        let arity = self.arity();
        let body = match self {
            TreeShift::Vertex(x) => ShiftBody::Vertex {
                matrices: x
                    .matrices
                    .iter()
                    .map(|m| m.iter().map(|row| row.iter().map(|&e| e as i64).collect()).collect())
                    .collect(),
            },
            TreeShift::OneStep(x) => ShiftBody::OneStep {
                allowed: x
                    .allowed
                    .iter()
                    .map(|t| t.iter().map(|&s| x.alphabet.name(s).to_string()).collect())
                    .collect(),
            },
            TreeShift::Forbidden(x) => {
                let mut patterns: Vec<PatternDoc> = x.removed.iter().map(|n| PatternDoc {
                    arity,
                    labels: BTreeMap::from([(String::new(), n.clone())]),
                }).collect();
                patterns.extend(x.forbidden.iter().map(|p| p.to_doc(&x.alphabet)));
                let mut names = x.alphabet.names().to_vec();
                names.extend(x.removed.iter().cloned());
                return ShiftDoc { arity, alphabet: Some(names), body: ShiftBody::Forbidden { patterns } };
            }
            TreeShift::LevelConstant(_) => ShiftBody::LevelConstant,
            TreeShift::SoficImage(c) => ShiftBody::SoficImage {
                base: Box::new(c.input().to_doc()),
                window: c.window(),
                table: c
                    .table()
                    .iter()
                    .map(|(b, &o)| TableEntry {
                        block: b.to_pattern().to_doc(c.input().alphabet()),
                        out: c.output().name(o).to_string(),
                    })
                    .collect(),
            },
        };
        ShiftDoc { arity, alphabet, body }
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("shift documents serialize")
    }

    /// SHA-256 of the canonical JSON document.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

/// JSON shift document; see the crate README for the full format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftDoc {
    #[serde(default = "default_arity")]
    pub arity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    #[serde(flatten)]
    pub body: ShiftBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShiftBody {
    Vertex { matrices: Vec<Vec<Vec<i64>>> },
    OneStep { allowed: Vec<Vec<String>> },
    Forbidden { patterns: Vec<PatternDoc> },
    LevelConstant,
    SoficImage { base: Box<ShiftDoc>, window: usize, table: Vec<TableEntry> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub block: PatternDoc,
    pub out: String,
}

fn default_alphabet(doc: &ShiftDoc) -> Result<Alphabet> {
    match &doc.alphabet {
        Some(names) => Alphabet::new(names.clone()),
        None => Ok(Alphabet::numeric(2)),
    }
}

pub fn parse_shift(doc: &ShiftDoc) -> Result<TreeShift> {
    let arity = doc.arity;
    check_arity(arity)?;
    match &doc.body {
        ShiftBody::Vertex { matrices } => {
            if matrices.len() != arity {
                return Err(Error::Schema(format!("expected {arity} matrices, got {}", matrices.len())));
            }
            let k = matrices[0].len();
            let alphabet = match &doc.alphabet {
                Some(names) => Alphabet::new(names.clone())?,
                None => Alphabet::numeric(k.max(1)),
            };
            let ms = matrices
                .iter()
                .map(|m| {
                    m.iter()
                        .map(|row| row.iter().map(|&e| check_entry(e)).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TreeShift::Vertex(VertexShift::new(alphabet, ms)?))
        }
        ShiftBody::OneStep { allowed } => {
            let alphabet = default_alphabet(doc)?;
            let tuples = allowed
                .iter()
                .map(|t| {
                    if t.len() != arity + 1 {
                        return Err(Error::Schema(format!("tuple {t:?} must have {} entries", arity + 1)));
                    }
                    t.iter().map(|n| alphabet.symbol(n)).collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TreeShift::OneStep(OneStepShift::new(arity, alphabet, tuples)?))
        }
        ShiftBody::Forbidden { patterns } => {
            let alphabet = default_alphabet(doc)?;
            let ps = patterns
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    if p.arity != arity {
                        return Err(Error::AlphabetMismatch);
                    }
                    Pattern::from_doc(p, &alphabet).map_err(|e| match e {
                        Error::NotPrefixClosed(_) => Error::NonPrefixClosedForbiddenPattern(i),
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TreeShift::Forbidden(ForbiddenShift::new(arity, alphabet, ps)?))
        }
        ShiftBody::LevelConstant => Ok(TreeShift::LevelConstant(LevelConstantShift::new(arity, default_alphabet(doc)?)?)),
        ShiftBody::SoficImage { base, window, table } => {
            let input = parse_shift(base)?;
            if input.arity() != arity {
                return Err(Error::Schema("sofic image arity differs from its base".into()));
            }
            let output = match &doc.alphabet {
                Some(names) => Alphabet::new(names.clone())?,
                None => {
                    let outs: BTreeSet<&String> = table.iter().map(|e| &e.out).collect();
                    Alphabet::new(outs.into_iter().cloned())?
                }
            };
            let mut entries = BTreeMap::new();
            for e in table {
                let p = Pattern::from_doc(&e.block, input.alphabet())?;
                let b = p
                    .to_block()
                    .filter(|b| b.height() == *window)
                    .ok_or_else(|| Error::Schema(format!("table key is not a {window}-block")))?;
                entries.insert(b, output.symbol(&e.out)?);
            }
            Ok(TreeShift::SoficImage(Box::new(SlidingBlockCode::new(input, *window, output, entries)?)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_vertex_document() {
        let x = TreeShift::parse_str(r#"{"arity":2,"alphabet":["0","1"],"kind":"vertex","matrices":[[[0,1],[1,0]],[[1,0],[0,1]]]}"#)
            .unwrap();
        assert_eq!(x.kind(), "vertex");
        assert_eq!(x.alphabet().len(), 2);
    }

    #[test]
    fn parse_one_step_document() {
        let x = TreeShift::parse_str(r#"{"kind":"one_step","allowed":[["0","0","0"],["0","1","1"],["1","0","0"]]}"#).unwrap();
        match x {
            TreeShift::OneStep(s) => assert_eq!(s.allowed().len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors() {
        let r = TreeShift::parse_str(r#"{"kind":"vertex","matrices":[[[0,1],[1,0]],[[1,0,0],[0,1,0],[0,0,1]]]}"#);
        assert!(matches!(r, Err(Error::Schema(_))));
        let r = TreeShift::parse_str(r#"{"kind":"vertex","matrices":[[[0,2],[1,0]],[[1,0],[0,1]]]}"#);
        assert!(matches!(r, Err(Error::NonBinaryMatrixEntry(2))));
        let r = TreeShift::parse_str(r#"{"kind":"one_step","allowed":[["0","0","7"]]}"#);
        assert!(matches!(r, Err(Error::UnknownSymbol(_))));
        let r = TreeShift::parse_str(r#"{"kind":"forbidden","patterns":[{"labels":{"":"0","10":"1"}}]}"#);
        assert!(matches!(r, Err(Error::NonPrefixClosedForbiddenPattern(0))));
        let r = TreeShift::parse_str(r#"{"kind":"nonsense"}"#);
        assert!(matches!(r, Err(Error::Json(_))));
    }

    #[test]
    fn forbidden_height_one_is_folded_into_alphabet() {
        let x = TreeShift::parse_str(
            r#"{"alphabet":["0","1","2"],"kind":"forbidden","patterns":[{"labels":{"":"2"}},{"labels":{"":"0","0":"0","1":"0"}}]}"#,
        )
        .unwrap();
        let TreeShift::Forbidden(f) = &x else { panic!() };
        assert_eq!(f.alphabet().names(), ["0", "1"]);
        assert_eq!(f.removed_symbols(), ["2"]);
        assert_eq!(f.window(), 2);
        assert_eq!(f.to_one_step().unwrap().allowed().len(), 7);
    }

    #[test]
    fn canonical_json_round_trips() {
        let docs = [
            r#"{"kind":"vertex","matrices":[[[0,1],[1,0]],[[1,0],[0,1]]]}"#,
            r#"{"kind":"one_step","allowed":[["1","0","0"],["0","0","0"],["0","1","1"]]}"#,
            r#"{"kind":"forbidden","patterns":[{"labels":{"":"1","0":"1","1":"1"}},{"labels":{"":"0","0":"0","1":"0"}}]}"#,
            r#"{"kind":"level_constant"}"#,
        ];
        for d in docs {
            let x = TreeShift::parse_str(d).unwrap();
            let once = x.canonical_json();
            let again = TreeShift::parse_str(&once).unwrap().canonical_json();
            assert_eq!(once, again);
            assert_eq!(x.fingerprint().len(), 64);
        }
    }
}
