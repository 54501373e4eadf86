use std::fmt;

use serde::{Deserialize, Serialize};

/// An element of a finite logic, stored as an index into its carrier.
///
/// An `Element` carries no reference to the logic it belongs to; pairing it
/// with the wrong [`Logic`](super::Logic) is a logic error that the lattice
/// operations catch with an index panic only when the index is out of range.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(u8);

impl Element {
    pub const fn from_index(idx: usize) -> Self {
        assert!(idx < super::MAX_CARRIER);
        Element(idx as u8)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of a logic's carrier as a 64-bit membership mask.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        ElemSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The full carrier `{0, .., n-1}`.
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: Element) -> Self {
        ElemSet(1u64 << e.index())
    }

    #[inline]
    pub fn contains(self, e: Element) -> bool {
        self.0 >> e.index() & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, e: Element) -> bool {
        let had = self.contains(e);
        self.0 |= 1u64 << e.index();
        !had
    }

    pub fn remove(&mut self, e: Element) {
        self.0 &= !(1u64 << e.index());
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> ElemSetIter {
        ElemSetIter(self.0)
    }

    /// Smallest member by index.
    pub fn first(self) -> Option<Element> {
        if self.0 == 0 {
            None
        } else {
            Some(Element(self.0.trailing_zeros() as u8))
        }
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<Element> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl IntoIterator for ElemSet {
    type Item = Element;
    type IntoIter = ElemSetIter;

    fn into_iter(self) -> ElemSetIter {
        self.iter()
    }
}

pub struct ElemSetIter(u64);

impl Iterator for ElemSetIter {
    type Item = Element;

    #[inline]
    fn next(&mut self) -> Option<Element> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(Element(i as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for ElemSetIter {}
