use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("direction {direction} is out of range for arity {arity}")]
    DirectionOutOfRange { direction: usize, arity: usize },
    #[error("malformed word {0:?}")]
    BadWord(String),
    #[error("arity must be between 2 and {max}, got {got}")]
    BadArity { got: usize, max: usize },
    #[error("support is not prefix-closed: {0:?} is missing its parent")]
    NotPrefixClosed(String),
    #[error("empty pattern")]
    EmptyPattern,
    #[error("code is not prefix-free: {0:?} is a prefix of {1:?}")]
    NotPrefixFree(String, String),
    #[error("code is incomplete: Kraft sum {kraft}, uncovered word {uncovered:?}")]
    Incomplete { kraft: f64, uncovered: String },
    #[error("a complete prefix code may not contain the empty word")]
    ContainsEmptyWord,
    #[error("word {0:?} lies outside the pattern support")]
    WordOutsideSupport(String),
    #[error("pattern support does not contain all words up to depth {0}")]
    SupportTooShallow(usize),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("matrix entry {0} is not 0 or 1")]
    NonBinaryMatrixEntry(i64),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("forbidden pattern {0} is not prefix-closed")]
    NonPrefixClosedForbiddenPattern(usize),
    #[error("no locally admissible {0}-block exists; the shift is empty")]
    EmptyRecodedAlphabet(usize),
    #[error("block of height {height} is shorter than the window {window}")]
    HeightTooSmall { height: usize, window: usize },
    #[error("input is not admissible in the source shift")]
    InadmissibleInput,
    #[error("enumeration limit {0} exceeded")]
    LimitExceeded(usize),
    #[error("pattern does not match the shift alphabet or arity")]
    AlphabetMismatch,
    #[error("pattern is not locally admissible")]
    NotLocallyAdmissible,
    #[error("symbol {0:?} lies outside the essential core; the pattern cannot be extended")]
    OutsideEssentialCore(String),
    #[error("block count cap {0} exceeded for a sofic image")]
    CapExceeded(usize),
    #[error("the shift is empty")]
    EmptyShift,
    #[error("every block height up to {0} has a single block; entropy pinned to 0")]
    DegenerateSingleton(usize),
    #[error("block gluing was not verified: {0}")]
    PreconditionNotVerified(String),
    #[error("operation requires a tree-shift of finite type")]
    NotFiniteType,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("sliding block code table has no entry for block {0}")]
    MissingTableEntry(String),
    #[error("pattern is admissible but has no extension to the requested height")]
    NotExtensible,
    #[error("patterns are not connected through the given code")]
    NoFill,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
