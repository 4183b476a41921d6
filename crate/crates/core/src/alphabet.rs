use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::Symbol;

/// Interned symbol names; symbols are referred to by their index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Schema("alphabet is empty".into()));
        }
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::Schema(format!("duplicate symbol {n:?}")));
            }
        }
        Ok(Alphabet { names, index })
    }

    /// Symbols named `"0"`, `"1"`, ... `"κ-1"`.
    pub fn numeric(size: usize) -> Self {
        Alphabet::new((0..size).map(|i| i.to_string())).expect("nonempty numeric alphabet")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.names[sym]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }
}
