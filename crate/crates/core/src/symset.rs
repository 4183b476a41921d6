use crate::Symbol;

/// Fixed-universe bit set of symbol indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SymbolSet {
    bits: Vec<u64>,
    universe: usize,
}

impl SymbolSet {
    pub fn empty(universe: usize) -> Self {
        SymbolSet { bits: vec![0; universe.div_ceil(64)], universe }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn singleton(universe: usize, sym: Symbol) -> Self {
        let mut s = Self::empty(universe);
        s.insert(sym);
        s
    }

    pub fn from_iter(universe: usize, syms: impl IntoIterator<Item = Symbol>) -> Self {
        let mut s = Self::empty(universe);
        for x in syms {
            s.insert(x);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, sym: Symbol) -> bool {
        let (w, b) = (sym / 64, sym % 64);
        let fresh = self.bits[w] & (1 << b) == 0;
        self.bits[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, sym: Symbol) {
        self.bits[sym / 64] &= !(1 << (sym % 64));
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        sym < self.universe && self.bits[sym / 64] & (1 << (sym % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }

    pub fn first(&self) -> Option<Symbol> {
        self.iter().next()
    }

    pub fn is_subset(&self, other: &SymbolSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect(&self, other: &SymbolSet) -> SymbolSet {
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        SymbolSet { bits, universe: self.universe }
    }

    pub fn union_with(&mut self, other: &SymbolSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = SymbolSet::empty(70);
        assert!(s.is_empty());
        s.insert(3);
        s.insert(66);
        assert_eq!(s.iter().collect::<Vec<_>>(), [3, 66]);
        assert_eq!(s.len(), 2);
        let f = SymbolSet::full(70);
        assert!(s.is_subset(&f));
        assert!(!f.is_subset(&s));
        assert_eq!(s.intersect(&SymbolSet::singleton(70, 66)).first(), Some(66));
        s.remove(3);
        assert!(!s.contains(3));
    }
}
