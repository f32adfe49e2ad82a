//! Continuous maps between finite formal spaces as relations `F ⊆ P × Q`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::COVER_CAP;
use crate::site::{Elem, ElemSet, Space};

/// A relation from `source` to `target`; `graph[p]` is the set of `q` with `F(p, q)`.
#[derive(Clone, Debug)]
pub struct ContinuousMap {
    source: Arc<Space>,
    target: Arc<Space>,
    graph: Vec<ElemSet>,
}

/// First violated morphism condition, numbered as in the definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapVerdict {
    Holds,
    Fails { condition: u8, witness: Vec<String> },
}

impl MapVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, MapVerdict::Holds)
    }
}

impl ContinuousMap {
    /// Closes the generator pairs under conditions (1) and (5).
    pub fn from_pairs(
        source: Arc<Space>,
        target: Arc<Space>,
        pairs: impl IntoIterator<Item = (Elem, Elem)>,
    ) -> Self {
        let mut graph = vec![ElemSet::empty(target.len()); source.len()];
        for (p, q) in pairs {
            graph[p.idx()].insert(q);
        }
        let mut m = ContinuousMap {
            source,
            target,
            graph,
        };
        m.saturate();
        m
    }

    /// Takes the relation exactly as given, without any closure.
    pub fn from_graph_unchecked(source: Arc<Space>, target: Arc<Space>, graph: Vec<ElemSet>) -> Self {
        ContinuousMap {
            source,
            target,
            graph,
        }
    }

    fn saturate(&mut self) {
        let sb = self.source.basis().clone();
        let tb = self.target.basis().clone();
        loop {
            let before = self.graph.clone();
            // (1): down in the source, up in the target.
            let mut next = vec![ElemSet::empty(self.target.len()); self.source.len()];
            for p in sb.elems() {
                let mut ups = ElemSet::empty(self.target.len());
                for q in self.graph[p.idx()].iter() {
                    ups.union_with(tb.up(q));
                }
                for p2 in sb.down(p).iter() {
                    next[p2.idx()].union_with(&ups);
                }
            }
            self.graph = next;
            // (5): each fiber closed under covers.
            for q in tb.elems() {
                let fiber = self.fiber(q);
                let closed = self
                    .source
                    .closed_closure(&fiber, crate::site::Fuel(self.source.len() + 1))
                    .set;
                for p in closed.members().iter() {
                    self.graph[p.idx()].insert(q);
                }
            }
            if self.graph == before {
                return;
            }
        }
    }

    pub fn source(&self) -> &Arc<Space> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Space> {
        &self.target
    }

    pub fn graph(&self) -> &[ElemSet] {
        &self.graph
    }

    pub fn related(&self, p: Elem, q: Elem) -> bool {
        self.graph[p.idx()].contains(q)
    }

    /// `{p : F(p, q)}`
    pub fn fiber(&self, q: Elem) -> ElemSet {
        ElemSet::from_elems(
            self.source.len(),
            self.source
                .basis()
                .elems()
                .filter(|p| self.graph[p.idx()].contains(q)),
        )
    }

    /// `I(p, q) ⟺ (∃S ∈ Cov(p)) (∀r ∈ S) r ≤ q`.
    pub fn identity(space: Arc<Space>) -> Self {
        let b = space.basis().clone();
        let graph = b
            .elems()
            .map(|p| {
                ElemSet::from_elems(
                    b.len(),
                    b.elems().filter(|&q| {
                        space.covered_by(p, &b.down(p).intersection(b.down(q)))
                    }),
                )
            })
            .collect();
        ContinuousMap {
            source: space.clone(),
            target: space,
            graph,
        }
    }

    /// The map `1 → space` with `F(*, p) ⟺ p ∈ α`.
    pub fn from_point(space: Arc<Space>, alpha: &ElemSet) -> Self {
        ContinuousMap {
            source: Arc::new(Space::one_point()),
            target: space,
            graph: vec![alpha.clone()],
        }
    }

    /// Verifies conditions (1)–(5) on every enumerated instance.
    pub fn check(&self) -> MapVerdict {
        let sb = self.source.basis();
        let tb = self.target.basis();
        let sl = |e: Elem| sb.label(e).to_string();
        let tl = |e: Elem| tb.label(e).to_string();
        let fail = |c: u8, w: Vec<String>| MapVerdict::Fails {
            condition: c,
            witness: w,
        };
        // (1)
        for p in sb.elems() {
            for q in self.graph[p.idx()].iter() {
                for p2 in sb.down(p).iter() {
                    for q2 in tb.up(q).iter() {
                        if !self.related(p2, q2) {
                            return fail(1, vec![sl(p), tl(q), sl(p2), tl(q2)]);
                        }
                    }
                }
            }
        }
        // (2)
        let defined = ElemSet::from_elems(
            self.source.len(),
            sb.elems().filter(|p| !self.graph[p.idx()].is_empty()),
        );
        for p in sb.elems() {
            if !self.source.covered_by(p, &defined) {
                return fail(2, vec![sl(p)]);
            }
        }
        // (3)
        for p in sb.elems() {
            let img = &self.graph[p.idx()];
            for q in img.iter() {
                for q2 in img.iter() {
                    let meet = tb.down(q).intersection(tb.down(q2));
                    let good = ElemSet::from_elems(
                        self.source.len(),
                        sb.down(p)
                            .iter()
                            .filter(|&r| !self.graph[r.idx()].is_disjoint(&meet)),
                    );
                    if !self.source.covered_by(p, &good) {
                        return fail(3, vec![sl(p), tl(q), tl(q2)]);
                    }
                }
            }
        }
        // (4)
        for q in tb.elems() {
            let covers = self.target.minimal_covers(q, COVER_CAP).unwrap_or_default();
            for p in sb.elems().filter(|&p| self.related(p, q)) {
                for t in &covers {
                    let good = ElemSet::from_elems(
                        self.source.len(),
                        sb.down(p)
                            .iter()
                            .filter(|&r| !self.graph[r.idx()].is_disjoint(t)),
                    );
                    if !self.source.covered_by(p, &good) {
                        let mut w = vec![sl(p), tl(q)];
                        w.extend(tb.maximal(t).into_iter().map(tl));
                        return fail(4, w);
                    }
                }
            }
        }
        // (5)
        for q in tb.elems() {
            let fiber = self.fiber(q);
            for a in sb.elems() {
                if !fiber.contains(a) && self.source.covered_by(a, &fiber) {
                    return fail(5, vec![tl(q), sl(a)]);
                }
            }
        }
        MapVerdict::Holds
    }

    /// `self ∘ inner`: relation composition followed by the closure conditions.
    pub fn compose(&self, inner: &ContinuousMap) -> Result<ContinuousMap> {
        if inner.target.basis().labels() != self.source.basis().labels() {
            return Err(Error::NotComposable(
                "inner target differs from outer source".into(),
            ));
        }
        let mut pairs = Vec::new();
        for p in inner.source.basis().elems() {
            let mut img = ElemSet::empty(self.target.len());
            for q in inner.graph[p.idx()].iter() {
                img.union_with(&self.graph[q.idx()]);
            }
            pairs.extend(img.iter().map(|r| (p, r)));
        }
        Ok(ContinuousMap::from_pairs(
            Arc::clone(&inner.source),
            Arc::clone(&self.target),
            pairs,
        ))
    }

    /// `pt(F)`: the image point `{q : ∃p ∈ α. F(p, q)}`.
    pub fn pt_functor(&self, alpha: &ElemSet) -> ElemSet {
        let mut img = ElemSet::empty(self.target.len());
        for p in alpha.iter() {
            img.union_with(&self.graph[p.idx()]);
        }
        img
    }

    /// Same relation, compared pairwise.
    pub fn same_graph(&self, other: &ContinuousMap) -> bool {
        self.graph == other.graph
    }

    /// Generator pairs `(p, q)` with `p`, `q` labels, for serialization.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let sb = self.source.basis();
        let tb = self.target.basis();
        let mut out = Vec::new();
        for p in sb.elems() {
            for q in self.graph[p.idx()].iter() {
                out.push((sb.label(p).to_string(), tb.label(q).to_string()));
            }
        }
        out
    }
}
