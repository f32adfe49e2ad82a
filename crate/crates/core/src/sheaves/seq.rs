//! `2^ℕ(p) = 2(p)^ℕ` and `ℕ^ℕ(p) = ℕ(p)^ℕ`, truncated to the first `T` coordinates.

use std::sync::Arc;

use crate::double::DoubleSpace;
use crate::error::Result;
use crate::maps::ContinuousMap;
use crate::points::Point;
use crate::site::{Elem, ElemSet, Space};
use crate::spaces::TruncatedSpace;

use super::local::{LocalSection, LocalSheaf};
use super::Presheaf;

/// A sequence section: coordinate `i` is a section of `ℕ` (or `2`) at the root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeqSection {
    coords: Vec<LocalSection<u32>>,
}

impl SeqSection {
    pub fn new(coords: Vec<LocalSection<u32>>) -> Self {
        assert!(
            coords.windows(2).all(|w| w[0].root() == w[1].root()),
            "coordinates share a root"
        );
        SeqSection { coords }
    }

    pub fn coords(&self) -> &[LocalSection<u32>] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn root(&self) -> Option<Elem> {
        self.coords.first().map(|c| c.root())
    }

    /// `a(i)` at `r`, if determined there.
    pub fn value(&self, i: usize, r: Elem) -> Option<u32> {
        self.coords.get(i).and_then(|c| c.value(r).copied())
    }

    pub fn restrict(&self, space: &Space, q: Elem) -> SeqSection {
        SeqSection {
            coords: self.coords.iter().map(|c| c.restrict(space, q)).collect(),
        }
    }

    /// `a ∈ u` at `r`: the first `|u|` coordinates are determined and match.
    pub fn passes_at(&self, r: Elem, u: &[u32]) -> bool {
        u.len() <= self.coords.len()
            && u
                .iter()
                .enumerate()
                .all(|(i, &x)| self.value(i, r) == Some(x))
    }

    /// The longest prefix determined at `r`.
    pub fn reading(&self, r: Elem) -> Vec<u32> {
        let mut out = Vec::new();
        for i in 0..self.coords.len() {
            match self.value(i, r) {
                Some(v) => out.push(v),
                None => break,
            }
        }
        out
    }

    /// The constant section `α` (pure in every coordinate).
    pub fn constant(space: &Space, root: Elem, alpha: &Point, coords: usize) -> SeqSection {
        SeqSection {
            coords: (0..coords)
                .map(|i| LocalSection::pure(space, root, alpha.at(i)))
                .collect(),
        }
    }

    /// The graph `F(r, u) ⟺ a ∈ u at r` as a map into truncated sequences of
    /// length at most the number of coordinates.
    pub fn to_map(&self, source: Arc<Space>, target: &TruncatedSpace) -> ContinuousMap {
        let graph = source
            .basis()
            .elems()
            .map(|r| {
                ElemSet::from_elems(
                    target.len(),
                    target
                        .basis()
                        .elems()
                        .filter(|&u| self.passes_at(r, &target.seq(u).0)),
                )
            })
            .collect();
        ContinuousMap::from_graph_unchecked(source, target.space_arc(), graph)
    }
}

/// The global section `π` of the double: coordinate `i` takes value `w(i)`
/// on `D(w)` for `w ∈ ⟨⟩[i+1]`.
pub fn pi_section(d: &DoubleSpace, coords: usize) -> Result<SeqSection> {
    let inner = d.inner();
    let top = d.d(inner.root());
    let mut out = Vec::with_capacity(coords);
    for i in 0..coords {
        let family: Vec<(Elem, u32)> = inner
            .u_bracket(&crate::spaces::FinSeq::empty(), i + 1)?
            .iter()
            .map(|w| Ok((d.d_of(w)?, w.0[i])))
            .collect::<Result<_>>()?;
        out.push(LocalSection::from_family(d.space(), top, &family)?);
    }
    Ok(SeqSection { coords: out })
}

/// Products of `coords` copies of a base sheaf.
#[derive(Clone, Debug)]
pub struct SeqSheaf {
    base: LocalSheaf<u32>,
    coords: usize,
}

impl SeqSheaf {
    pub fn new(base: LocalSheaf<u32>, coords: usize) -> Self {
        SeqSheaf { base, coords }
    }

    pub fn coords(&self) -> usize {
        self.coords
    }
}

impl Presheaf for SeqSheaf {
    type Section = SeqSection;

    fn space(&self) -> &Space {
        self.base.space()
    }

    fn sections(&self, p: Elem) -> Vec<SeqSection> {
        let base = self.base.enumerate(p);
        let mut digits = vec![0usize; self.coords];
        let mut out = Vec::new();
        if base.is_empty() {
            return out;
        }
        loop {
            out.push(SeqSection {
                coords: digits.iter().map(|&d| base[d].clone()).collect(),
            });
            if !super::local::odometer(&mut digits, base.len()) {
                break;
            }
        }
        out
    }

    fn restrict(&self, x: &SeqSection, q: Elem) -> SeqSection {
        x.restrict(self.base.space(), q)
    }
}
