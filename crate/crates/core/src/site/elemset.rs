use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

/// Index of a basic open in a [`Basis`](super::Basis).
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Elem(pub usize);

impl Elem {
    #[inline]
    pub fn idx(self) -> usize {
        self.0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A finite set of basic opens, sized to the basis it belongs to.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet(FixedBitSet);

impl ElemSet {
    pub fn empty(n: usize) -> Self {
        ElemSet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        ElemSet(bits)
    }

    pub fn from_elems(n: usize, elems: impl IntoIterator<Item = Elem>) -> Self {
        let mut s = Self::empty(n);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn insert(&mut self, e: Elem) {
        self.0.insert(e.0);
    }

    #[inline]
    pub fn remove(&mut self, e: Elem) {
        self.0.set(e.0, false);
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        self.0.contains(e.0)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &ElemSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &ElemSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &ElemSet) {
        self.0.difference_with(&other.0);
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.0.ones().map(Elem)
    }

    pub fn first(&self) -> Option<Elem> {
        self.0.minimum().map(Elem)
    }

    pub fn to_vec(&self) -> Vec<Elem> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}
