use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Basis, Downset, Elem, ElemSet, Sieve};

/// Budget for semi-decision procedures (derivation depth for generated covers).
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fuel(pub usize);

/// How a space decides its covering sieves.
#[derive(Clone, Debug)]
pub enum CoverRule {
    /// Least topology generated by `C(a)`.
    Generated {
        families: Vec<Vec<ElemSet>>,
        raw: Arc<Vec<Vec<Vec<Elem>>>>,
    },
    /// `S` covers `a` iff one of the listed `(q, a[q])` brackets lies inside `S`.
    Uniform { brackets: Vec<Vec<(usize, ElemSet)>> },
    /// Elements `0..inner_len` are `D(u)`, the rest are singleton point opens `{q}`.
    Double { inner: Arc<Space>, inner_len: usize },
    /// Covers detected by a finite family of points: `ext(a) ⊆ ⋃ ext(S)`.
    PointCover { ext: Vec<ElemSet> },
    /// Only sieves containing the element itself cover it.
    Discrete,
}

/// A finite preorder with a decidable Grothendieck topology.
#[derive(Clone, Debug)]
pub struct Space {
    basis: Basis,
    rule: CoverRule,
    presentation: Option<Arc<Vec<Vec<ElemSet>>>>,
}

/// Evidence that a sieve covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverWitness {
    /// A derivation in the generated inductive definition.
    Derivation(CoverDerivation),
    /// The bracket `a[q]` fits inside the sieve.
    Depth(usize),
    /// The inner witness for `D(u)`, or membership for `{q}`.
    Lifted(Box<CoverWitness>),
    /// The element itself is in the sieve.
    Member,
    /// Every point of the element lies in some member.
    Points,
}

impl CoverWitness {
    pub fn depth(&self) -> usize {
        match self {
            CoverWitness::Derivation(d) => d.depth(),
            CoverWitness::Depth(q) => *q,
            CoverWitness::Lifted(w) => w.depth(),
            CoverWitness::Member | CoverWitness::Points => 0,
        }
    }
}

/// Derivation tree for generated covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverDerivation {
    Member(Elem),
    Rule {
        at: Elem,
        family: usize,
        premises: Vec<CoverDerivation>,
    },
}

impl CoverDerivation {
    pub fn conclusion(&self) -> Elem {
        match self {
            CoverDerivation::Member(e) => *e,
            CoverDerivation::Rule { at, .. } => *at,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            CoverDerivation::Member(_) => 0,
            CoverDerivation::Rule { premises, .. } => {
                1 + premises.iter().map(|p| p.depth()).max().unwrap_or(0)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverVerdict {
    Covered(CoverWitness),
    /// `saturated` means the search reached a fixpoint, so more fuel would not help.
    NotCoveredWithinFuel { saturated: bool },
}

impl CoverVerdict {
    pub fn is_covered(&self) -> bool {
        matches!(self, CoverVerdict::Covered(_))
    }
}

/// Result of [`Space::closed_closure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedSieve {
    pub set: Downset,
    /// Some cover test ran out of fuel before saturating.
    pub approximate: bool,
}

impl Space {
    pub fn new(basis: Basis, rule: CoverRule) -> Self {
        Space {
            basis,
            rule,
            presentation: None,
        }
    }

    /// Attaches an enumerator of basic covering sieves, one list per element.
    pub fn with_presentation(mut self, bcov: Vec<Vec<ElemSet>>) -> Self {
        self.presentation = Some(Arc::new(bcov));
        self
    }

    /// The one-point space `1`.
    pub fn one_point() -> Self {
        let basis = Basis::from_relation(vec!["*".to_string()], []).expect("one element");
        Space::new(basis, CoverRule::Discrete)
    }

    /// A discrete space on the given labels.
    pub fn discrete(labels: Vec<String>) -> Result<Self, super::SiteError> {
        let basis = Basis::from_relation(labels, [])?;
        Ok(Space::new(basis, CoverRule::Discrete))
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn rule(&self) -> &CoverRule {
        &self.rule
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Exact cover test: does the downset generated by `members ∩ ↓a` cover `a`?
    pub fn covered_by(&self, a: Elem, members: &ElemSet) -> bool {
        let s = members.intersection(self.basis.down(a));
        let s = self.basis.down_closure(&s);
        self.covered_by_downset(a, &s)
    }

    fn covered_by_downset(&self, a: Elem, s: &ElemSet) -> bool {
        if s.contains(a) {
            return true;
        }
        match &self.rule {
            CoverRule::Generated { families, .. } => {
                self.generated_levels(families, a, s, usize::MAX).0[a.idx()].is_some()
            }
            CoverRule::Uniform { brackets } => {
                brackets[a.idx()].iter().any(|(_, b)| b.is_subset(s))
            }
            CoverRule::Double { inner, inner_len } => {
                if a.idx() >= *inner_len {
                    return false;
                }
                let proj = project_inner(s, *inner_len);
                inner.covered_by_downset(a, &proj)
            }
            CoverRule::PointCover { ext } => {
                let mut seen = ElemSet::empty(ext[a.idx()].capacity());
                for m in s.iter() {
                    seen.union_with(&ext[m.idx()]);
                }
                ext[a.idx()].is_subset(&seen)
            }
            CoverRule::Discrete => false,
        }
    }

    /// `cov(a, S)` with a witness. Only generated topologies consume fuel; the
    /// other rules decide exactly.
    pub fn cover(&self, a: Elem, sieve: &Sieve, fuel: Fuel) -> CoverVerdict {
        let s = sieve.members().intersection(self.basis.down(a));
        self.cover_set(a, &s, fuel)
    }

    /// As [`Space::cover`] for an arbitrary downset.
    pub fn cover_set(&self, a: Elem, s: &ElemSet, fuel: Fuel) -> CoverVerdict {
        let s = self.basis.down_closure(&s.intersection(self.basis.down(a)));
        if s.contains(a) {
            return CoverVerdict::Covered(CoverWitness::Member);
        }
        match &self.rule {
            CoverRule::Generated { families, .. } => {
                let (levels, saturated) = self.generated_levels(families, a, &s, fuel.0);
                if levels[a.idx()].is_some() {
                    CoverVerdict::Covered(CoverWitness::Derivation(rebuild(
                        families, &levels, a,
                    )))
                } else {
                    CoverVerdict::NotCoveredWithinFuel { saturated }
                }
            }
            CoverRule::Uniform { brackets } => brackets[a.idx()]
                .iter()
                .find(|(_, b)| b.is_subset(&s))
                .map(|(q, _)| CoverVerdict::Covered(CoverWitness::Depth(*q)))
                .unwrap_or(CoverVerdict::NotCoveredWithinFuel { saturated: true }),
            CoverRule::Double { inner, inner_len } => {
                if a.idx() >= *inner_len {
                    return CoverVerdict::NotCoveredWithinFuel { saturated: true };
                }
                match inner.cover_set(a, &project_inner(&s, *inner_len), fuel) {
                    CoverVerdict::Covered(w) => {
                        CoverVerdict::Covered(CoverWitness::Lifted(Box::new(w)))
                    }
                    other => other,
                }
            }
            CoverRule::PointCover { .. } => {
                if self.covered_by_downset(a, &s) {
                    CoverVerdict::Covered(CoverWitness::Points)
                } else {
                    CoverVerdict::NotCoveredWithinFuel { saturated: true }
                }
            }
            CoverRule::Discrete => CoverVerdict::NotCoveredWithinFuel { saturated: true },
        }
    }

    /// Saturates the generated inductive definition below `a` for at most
    /// `fuel` rounds. Entry `x` holds `(round, family)` once `x` is derived.
    fn generated_levels(
        &self,
        families: &[Vec<ElemSet>],
        a: Elem,
        s: &ElemSet,
        fuel: usize,
    ) -> (Vec<Option<(usize, Option<usize>)>>, bool) {
        let b = &self.basis;
        let mut levels: Vec<Option<(usize, Option<usize>)>> = vec![None; b.len()];
        let mut current = s.intersection(b.down(a));
        for x in current.iter() {
            levels[x.idx()] = Some((0, None));
        }
        let mut round = 0;
        loop {
            if levels[a.idx()].is_some() {
                return (levels, false);
            }
            if round >= fuel {
                return (levels, false);
            }
            round += 1;
            let snapshot = current.clone();
            let mut changed = false;
            for x in b.down(a).iter() {
                if snapshot.contains(x) {
                    continue;
                }
                if let Some(fi) = families[x.idx()]
                    .iter()
                    .position(|alpha| alpha.is_subset(&snapshot))
                {
                    levels[x.idx()] = Some((round, Some(fi)));
                    current.insert(x);
                    changed = true;
                }
            }
            if !changed {
                return (levels, true);
            }
        }
    }

    /// Basic covering sieves of `a`, when the space has a presentation.
    pub fn basic_covers(&self, a: Elem) -> Option<Vec<ElemSet>> {
        if let Some(p) = &self.presentation {
            return Some(p[a.idx()].clone());
        }
        match &self.rule {
            CoverRule::Uniform { brackets } => Some(
                brackets[a.idx()]
                    .iter()
                    .map(|(_, br)| self.basis.down_closure(br))
                    .collect(),
            ),
            CoverRule::Double { inner, inner_len } => {
                if a.idx() >= *inner_len {
                    return Some(vec![self.basis.down(a).clone()]);
                }
                let covers = inner.basic_covers(a)?;
                Some(
                    covers
                        .iter()
                        .map(|c| {
                            let lifted =
                                ElemSet::from_elems(self.len(), c.iter());
                            self.basis.down_closure(&lifted)
                        })
                        .collect(),
                )
            }
            CoverRule::Discrete => Some(vec![self.basis.down(a).clone()]),
            CoverRule::Generated { .. } | CoverRule::PointCover { .. } => None,
        }
    }

    /// Every covering sieve of `a` (as member sets), or `None` past `cap` downsets.
    pub fn covering_sieves(&self, a: Elem, cap: usize) -> Option<Vec<ElemSet>> {
        let all = self.basis.downsets_below(a, cap)?;
        Some(
            all.into_iter()
                .filter(|s| self.covered_by_downset(a, s))
                .collect(),
        )
    }

    /// Inclusion-minimal covering sieves: the presentation when there is one,
    /// otherwise by enumeration.
    pub fn minimal_covers(&self, a: Elem, cap: usize) -> Option<Vec<ElemSet>> {
        if let Some(c) = self.basic_covers(a) {
            return Some(c);
        }
        let all = self.covering_sieves(a, cap)?;
        Some(
            all.iter()
                .filter(|s| !all.iter().any(|t| t != *s && t.is_subset(s)))
                .cloned()
                .collect(),
        )
    }

    /// Least closed downset containing `s`: repeatedly adds every `a` with
    /// `cov(a, a*S)` until nothing changes.
    pub fn closed_closure(&self, s: &ElemSet, fuel: Fuel) -> ClosedSieve {
        let b = &self.basis;
        let mut cur = b.down_closure(s);
        let mut approximate = false;
        loop {
            let mut changed = false;
            for a in b.elems() {
                if cur.contains(a) {
                    continue;
                }
                match self.cover_set(a, &cur, fuel) {
                    CoverVerdict::Covered(_) => {
                        cur.union_with(b.down(a));
                        changed = true;
                    }
                    CoverVerdict::NotCoveredWithinFuel { saturated } => {
                        approximate |= !saturated;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        ClosedSieve {
            set: Downset::from_members(b, &cur),
            approximate,
        }
    }

    /// Is `s` closed under the covering relation?
    pub fn is_closed(&self, s: &ElemSet) -> bool {
        self.basis
            .elems()
            .all(|a| s.contains(a) || !self.covered_by(a, s))
    }
}

fn project_inner(s: &ElemSet, inner_len: usize) -> ElemSet {
    ElemSet::from_elems(inner_len, s.iter().filter(|e| e.idx() < inner_len))
}

fn rebuild(
    families: &[Vec<ElemSet>],
    levels: &[Option<(usize, Option<usize>)>],
    x: Elem,
) -> CoverDerivation {
    match levels[x.idx()] {
        Some((_, None)) => CoverDerivation::Member(x),
        Some((_, Some(fi))) => CoverDerivation::Rule {
            at: x,
            family: fi,
            premises: families[x.idx()][fi]
                .iter()
                .map(|y| rebuild(families, levels, y))
                .collect(),
        },
        None => unreachable!("only derived elements are rebuilt"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt_space() -> Space {
        // Three opens over two points: top sees both, l sees point 0, r sees point 1.
        let labels = ["top", "l", "r"].map(String::from).to_vec();
        let basis = Basis::from_relation(labels, [(Elem(1), Elem(0)), (Elem(2), Elem(0))]).unwrap();
        let ext = vec![
            ElemSet::from_elems(2, [Elem(0), Elem(1)]),
            ElemSet::from_elems(2, [Elem(0)]),
            ElemSet::from_elems(2, [Elem(1)]),
        ];
        Space::new(basis, CoverRule::PointCover { ext })
    }

    #[test]
    fn point_cover_needs_both_sides() {
        let s = pt_space();
        let b = s.basis();
        assert!(s.covered_by(Elem(0), &ElemSet::from_elems(3, [Elem(1), Elem(2)])));
        assert!(!s.covered_by(Elem(0), &ElemSet::from_elems(3, [Elem(1)])));
        assert!(s.covered_by(Elem(0), b.down(Elem(0))));
    }

    #[test]
    fn closure_adds_covered_elements() {
        let s = pt_space();
        let c = s.closed_closure(&ElemSet::from_elems(3, [Elem(1), Elem(2)]), Fuel(4));
        assert!(c.set.contains(Elem(0)));
        assert!(!c.approximate);
        let again = s.closed_closure(c.set.members(), Fuel(4));
        assert_eq!(again.set, c.set);
    }

    #[test]
    fn discrete_covers_are_maximal_only() {
        let s = Space::one_point();
        assert!(!s.covered_by(Elem(0), &s.basis().empty_set()));
        assert_eq!(s.minimal_covers(Elem(0), 10).unwrap().len(), 1);
    }
}
