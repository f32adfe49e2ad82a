//! Truncated formal Cantor and Baire spaces, brackets `u[q]`, and bars.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::site::{
    generate_topology, Basis, CoverRule, CoveringSystem, Elem, ElemSet, Sieve, Space,
};

/// A finite sequence of naturals. `u ≤ v` iff `v` is an initial segment of `u`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinSeq(pub Vec<u32>);

impl FinSeq {
    pub fn empty() -> Self {
        FinSeq(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `u * ⟨n⟩`
    pub fn child(&self, n: u32) -> FinSeq {
        let mut v = self.0.clone();
        v.push(n);
        FinSeq(v)
    }

    /// `u * v`
    pub fn concat(&self, other: &FinSeq) -> FinSeq {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FinSeq(v)
    }

    /// `self ≤ other` in the space order: `other` is an initial segment of `self`.
    pub fn extends(&self, other: &FinSeq) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn prefix(&self, n: usize) -> FinSeq {
        FinSeq(self.0[..n.min(self.len())].to_vec())
    }

    /// Comma-separated entries; `⟨⟩` is the empty string.
    pub fn label(&self) -> String {
        self.0
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_label(s: &str) -> Result<FinSeq> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(FinSeq::empty());
        }
        s.split(',')
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidSequence(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(FinSeq)
    }
}

impl fmt::Debug for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩", self.label())
    }
}

impl fmt::Display for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩", self.label())
    }
}

impl From<&[u32]> for FinSeq {
    fn from(v: &[u32]) -> Self {
        FinSeq(v.to_vec())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Cantor,
    Baire,
}

/// Cap on the number of basic covers precomputed for truncated Baire space.
const BAIRE_PRESENTATION_CAP: usize = 20_000;

/// All sequences over `0..branch` of length at most `depth`, with the
/// Cantor (`u[q]`) or Baire (children) topology.
///
/// Elements are numbered by length, then lexicographically, so `⟨⟩` is `Elem(0)`.
#[derive(Clone, Debug)]
pub struct TruncatedSpace {
    kind: SpaceKind,
    branch: u32,
    depth: usize,
    seqs: Vec<FinSeq>,
    offsets: Vec<usize>,
    space: Arc<Space>,
}

impl TruncatedSpace {
    pub fn cantor(depth: usize) -> Self {
        Self::build(SpaceKind::Cantor, 2, depth)
    }

    /// Baire space with branching truncated to `branch`. The topology is
    /// generated by `C(u) = {{u*⟨n⟩ : n < branch}}` for `|u| < depth`; a leaf
    /// `u` has `C(u) = {{u}}` so the covering axiom holds at the truncation.
    pub fn baire(branch: u32, depth: usize) -> Self {
        assert!(branch >= 1, "branch must be positive");
        Self::build(SpaceKind::Baire, branch, depth)
    }

    pub fn new(kind: SpaceKind, branch: u32, depth: usize) -> Result<Self> {
        match kind {
            SpaceKind::Cantor if branch != 2 => Err(Error::Input(format!(
                "Cantor space has branch 2, got {branch}"
            ))),
            _ if branch == 0 => Err(Error::Input("branch must be positive".into())),
            SpaceKind::Cantor => Ok(Self::cantor(depth)),
            SpaceKind::Baire => Ok(Self::baire(branch, depth)),
        }
    }

    fn build(kind: SpaceKind, branch: u32, depth: usize) -> Self {
        let mut seqs = vec![FinSeq::empty()];
        let mut offsets = vec![0];
        let mut level = vec![FinSeq::empty()];
        for _ in 0..depth {
            offsets.push(seqs.len());
            let next: Vec<FinSeq> = level
                .iter()
                .flat_map(|u| (0..branch).map(move |n| u.child(n)))
                .collect();
            seqs.extend(next.iter().cloned());
            level = next;
        }
        offsets.push(seqs.len());
        let labels: Vec<String> = seqs.iter().map(|u| u.label()).collect();
        let pairs: Vec<(Elem, Elem)> = (1..seqs.len())
            .map(|i| {
                let u = &seqs[i];
                (Elem(i), Self::index_in(&offsets, branch, &u.prefix(u.len() - 1)))
            })
            .collect();
        let basis = Basis::from_relation(labels, pairs).expect("sequence tree is a preorder");
        let mut ts = TruncatedSpace {
            kind,
            branch,
            depth,
            seqs,
            offsets,
            space: Arc::new(Space::one_point()),
        };
        let space = match kind {
            SpaceKind::Cantor => {
                let brackets = (0..ts.seqs.len())
                    .map(|i| {
                        let u = &ts.seqs[i];
                        (u.len()..=depth)
                            .map(|q| (q, ts.bracket_set(u, q).expect("q within depth")))
                            .collect()
                    })
                    .collect();
                Space::new(basis, CoverRule::Uniform { brackets })
            }
            SpaceKind::Baire => {
                let c = ts.children_system_on(basis);
                let mut sp = generate_topology(&c).expect("children system satisfies the axiom");
                if let Some(bcov) = ts.fronts_presentation(BAIRE_PRESENTATION_CAP) {
                    sp = sp.with_presentation(bcov);
                }
                sp
            }
        };
        ts.space = Arc::new(space);
        ts
    }

    fn index_in(offsets: &[usize], branch: u32, u: &FinSeq) -> Elem {
        let mut r = 0usize;
        for &x in &u.0 {
            r = r * branch as usize + x as usize;
        }
        Elem(offsets[u.len()] + r)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn branch(&self) -> u32 {
        self.branch
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn space_arc(&self) -> Arc<Space> {
        Arc::clone(&self.space)
    }

    pub fn basis(&self) -> &Basis {
        self.space.basis()
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn root(&self) -> Elem {
        Elem(0)
    }

    pub fn seqs(&self) -> &[FinSeq] {
        &self.seqs
    }

    pub fn seq(&self, e: Elem) -> &FinSeq {
        &self.seqs[e.idx()]
    }

    pub fn contains_seq(&self, u: &FinSeq) -> bool {
        u.len() <= self.depth && u.0.iter().all(|&x| x < self.branch)
    }

    pub fn elem(&self, u: &FinSeq) -> Result<Elem> {
        if !self.contains_seq(u) {
            return Err(Error::InvalidSequence(format!(
                "{u} is not in the truncated space (branch {}, depth {})",
                self.branch, self.depth
            )));
        }
        Ok(Self::index_in(&self.offsets, self.branch, u))
    }

    pub fn elem_of(&self, entries: &[u32]) -> Result<Elem> {
        self.elem(&FinSeq(entries.to_vec()))
    }

    /// The sequences of length exactly `n`.
    pub fn level(&self, n: usize) -> &[FinSeq] {
        &self.seqs[self.offsets[n]..self.offsets[n + 1]]
    }

    pub fn children(&self, u: Elem) -> Vec<Elem> {
        let s = self.seq(u);
        if s.len() >= self.depth {
            return Vec::new();
        }
        (0..self.branch)
            .map(|n| Self::index_in(&self.offsets, self.branch, &s.child(n)))
            .collect()
    }

    /// `u[q]`: all length-`q` extensions of `u`.
    pub fn u_bracket(&self, u: &FinSeq, q: usize) -> Result<Vec<FinSeq>> {
        if q > self.depth {
            return Err(Error::DepthExceeded {
                q,
                depth: self.depth,
            });
        }
        if q < u.len() {
            return Err(Error::InvalidSequence(format!("{u} is longer than {q}")));
        }
        Ok(self
            .level(q)
            .iter()
            .filter(|v| v.extends(u))
            .cloned()
            .collect())
    }

    pub fn bracket_set(&self, u: &FinSeq, q: usize) -> Result<ElemSet> {
        let mut s = ElemSet::empty(self.seqs.len());
        for v in self.u_bracket(u, q)? {
            s.insert(Self::index_in(&self.offsets, self.branch, &v));
        }
        Ok(s)
    }

    /// `C(u) = {{u*⟨n⟩}}` below the truncation, `{{u}}` at leaves.
    pub fn children_system(&self) -> CoveringSystem {
        self.children_system_on(self.basis().clone())
    }

    fn children_system_on(&self, basis: Basis) -> CoveringSystem {
        let fams = (0..self.seqs.len())
            .map(|i| {
                let kids = self.children(Elem(i));
                if kids.is_empty() {
                    vec![vec![Elem(i)]]
                } else {
                    vec![kids]
                }
            })
            .collect();
        CoveringSystem::new(basis, fams).expect("children lie below their parent")
    }

    /// `C(u) = {u[q] : |u| ≤ q ≤ depth}`, the covering system presenting Cantor space.
    pub fn bracket_system(&self) -> CoveringSystem {
        let fams = self
            .seqs
            .iter()
            .map(|u| {
                (u.len()..=self.depth)
                    .map(|q| {
                        self.bracket_set(u, q)
                            .expect("q within depth")
                            .to_vec()
                    })
                    .collect()
            })
            .collect();
        CoveringSystem::new(self.basis().clone(), fams).expect("brackets lie below their root")
    }

    /// Covering antichains ("fronts") below each element: `{u}`, or a choice
    /// of front below every child.
    pub fn fronts(&self, u: Elem, cap: usize) -> Option<Vec<Vec<Elem>>> {
        let kids = self.children(u);
        let mut out = vec![vec![u]];
        if kids.is_empty() {
            return Some(out);
        }
        let mut acc: Vec<Vec<Elem>> = vec![Vec::new()];
        for k in kids {
            let sub = self.fronts(k, cap)?;
            if acc.len().saturating_mul(sub.len()) > cap {
                return None;
            }
            let mut next = Vec::with_capacity(acc.len() * sub.len());
            for a in &acc {
                for s in &sub {
                    let mut v = a.clone();
                    v.extend_from_slice(s);
                    next.push(v);
                }
            }
            acc = next;
        }
        out.extend(acc);
        if out.len() > cap {
            return None;
        }
        Some(out)
    }

    fn fronts_presentation(&self, cap: usize) -> Option<Vec<Vec<ElemSet>>> {
        let mut all = Vec::with_capacity(self.seqs.len());
        for i in 0..self.seqs.len() {
            let fr = self.fronts(Elem(i), cap)?;
            all.push(
                fr.iter()
                    .map(|f| {
                        let mut s = ElemSet::empty(self.seqs.len());
                        for &x in f {
                            for y in self.below(x) {
                                s.insert(y);
                            }
                        }
                        s
                    })
                    .collect(),
            );
        }
        Some(all)
    }

    fn below(&self, x: Elem) -> Vec<Elem> {
        let u = self.seq(x);
        (u.len()..=self.depth)
            .flat_map(|q| self.u_bracket(u, q).expect("within depth"))
            .map(|v| Self::index_in(&self.offsets, self.branch, &v))
            .collect()
    }

    /// The sieve `↓gens` on `root`.
    pub fn sieve(&self, root: &FinSeq, gens: &[FinSeq]) -> Result<Sieve> {
        let r = self.elem(root)?;
        let g = gens
            .iter()
            .map(|u| self.elem(u))
            .collect::<Result<Vec<_>>>()?;
        Ok(Sieve::new(self.basis(), r, &g)?)
    }

    /// Least `q` with `u[q] ⊆ S`, else the part of `u[depth]` missing from `S`.
    pub fn cantor_cover_test(&self, u: &FinSeq, s: &Sieve) -> Result<CantorVerdict> {
        self.elem(u)?;
        for q in u.len()..=self.depth {
            let br = self.bracket_set(u, q)?;
            if br.is_subset(s.members()) {
                return Ok(CantorVerdict::Covered(q));
            }
        }
        let frontier = self
            .u_bracket(u, self.depth)?
            .into_iter()
            .filter(|v| !s.contains(self.elem(v).expect("enumerated")))
            .collect();
        Ok(CantorVerdict::NotCovered { frontier })
    }

    /// The canonical finite subcover `u[q]` for the least sufficient `q`.
    pub fn kfinite_subcover(&self, u: &FinSeq, s: &Sieve) -> Result<Vec<FinSeq>> {
        match self.cantor_cover_test(u, s)? {
            CantorVerdict::Covered(q) => self.u_bracket(u, q),
            CantorVerdict::NotCovered { .. } => Err(Error::NotACover(u.to_string())),
        }
    }

    /// Least set containing `s` and every `u` all of whose children are in it.
    pub fn inductive_closure(&self, s: &ElemSet) -> ElemSet {
        let mut cur = s.clone();
        for n in (0..self.depth).rev() {
            for u in self.level(n) {
                let e = self.elem(u).expect("enumerated");
                if self.children(e).iter().all(|&c| cur.contains(c)) {
                    cur.insert(e);
                }
            }
        }
        cur
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CantorVerdict {
    Covered(usize),
    NotCovered { frontier: Vec<FinSeq> },
}

/// A decidable predicate on the enumerated sequences with its asserted
/// structural flags, verified at construction.
#[derive(Clone, Debug)]
pub struct Bar {
    space: Arc<TruncatedSpace>,
    members: ElemSet,
    monotone: bool,
    inductive: bool,
}

impl Bar {
    pub fn new(
        space: Arc<TruncatedSpace>,
        predicate: impl Fn(&FinSeq) -> bool,
        monotone: bool,
        inductive: bool,
    ) -> Result<Self> {
        let members = ElemSet::from_elems(
            space.len(),
            (0..space.len()).map(Elem).filter(|&e| predicate(space.seq(e))),
        );
        Self::from_members(space, members, monotone, inductive)
    }

    /// The predicate "extends one of `gens`".
    pub fn from_generators(
        space: Arc<TruncatedSpace>,
        gens: &[FinSeq],
        monotone: bool,
        inductive: bool,
    ) -> Result<Self> {
        let g = gens
            .iter()
            .map(|u| space.elem(u))
            .collect::<Result<Vec<_>>>()?;
        let members = space.basis().downset(g.iter());
        Self::from_members(space, members, monotone, inductive)
    }

    pub fn from_members(
        space: Arc<TruncatedSpace>,
        members: ElemSet,
        monotone: bool,
        inductive: bool,
    ) -> Result<Self> {
        let bar = Bar {
            space,
            members,
            monotone,
            inductive,
        };
        if monotone {
            bar.check_monotone()?;
        }
        if inductive {
            bar.check_inductive()?;
        }
        Ok(bar)
    }

    /// Holds at `u` and fails at some extension of `u`.
    pub fn check_monotone(&self) -> Result<()> {
        let ts = &self.space;
        for u in self.members.iter() {
            for v in ts.basis().down(u).iter() {
                if !self.members.contains(v) {
                    return Err(Error::NotMonotone {
                        holds: ts.seq(u).to_string(),
                        fails: ts.seq(v).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn check_inductive(&self) -> Result<()> {
        let ts = &self.space;
        for u in (0..ts.len()).map(Elem) {
            let kids = ts.children(u);
            if !kids.is_empty()
                && kids.iter().all(|&c| self.members.contains(c))
                && !self.members.contains(u)
            {
                return Err(Error::NotInductive(ts.seq(u).to_string()));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Arc<TruncatedSpace> {
        &self.space
    }

    pub fn members(&self) -> &ElemSet {
        &self.members
    }

    pub fn holds(&self, u: &FinSeq) -> bool {
        self.space
            .elem(u)
            .map(|e| self.members.contains(e))
            .unwrap_or(false)
    }

    pub fn holds_at(&self, e: Elem) -> bool {
        self.members.contains(e)
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn is_inductive(&self) -> bool {
        self.inductive
    }

    /// The sieve on `root` whose members are the sequences satisfying the predicate.
    pub fn to_sieve(&self, root: &FinSeq) -> Result<Sieve> {
        self.check_monotone()?;
        let r = self.space.elem(root)?;
        Ok(Sieve::from_members(self.space.basis(), r, &self.members))
    }

    /// Least `n` with the predicate true on all of `⟨⟩[n]`, by brute force.
    pub fn minimal_uniform_depth(&self) -> Option<usize> {
        (0..=self.space.depth()).find(|&n| {
            self.space
                .level(n)
                .iter()
                .all(|v| self.holds(v))
        })
    }

    pub fn to_document(&self) -> BarDoc {
        let ts = &self.space;
        let gens = ts.basis().maximal(&self.members);
        BarDoc {
            kind: ts.kind(),
            branch: ts.branch(),
            depth: ts.depth(),
            bar: gens.iter().map(|&g| ts.seq(g).0.clone()).collect(),
            monotone: self.monotone,
            inductive: self.inductive,
        }
    }

    pub fn from_document(doc: &BarDoc) -> Result<Self> {
        let ts = Arc::new(TruncatedSpace::new(doc.kind, doc.branch, doc.depth)?);
        let gens: Vec<FinSeq> = doc.bar.iter().map(|v| FinSeq(v.clone())).collect();
        Self::from_generators(ts, &gens, doc.monotone, doc.inductive)
    }
}

/// Wire format for bars; `bar` lists the generators of the predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarDoc {
    pub kind: SpaceKind,
    #[serde(default = "binary")]
    pub branch: u32,
    pub depth: usize,
    pub bar: Vec<Vec<u32>>,
    pub monotone: bool,
    pub inductive: bool,
}

fn binary() -> u32 {
    2
}

/// Convenience constructor for literals: `seq(&[0, 1])`.
pub fn seq(entries: &[u32]) -> FinSeq {
    FinSeq(entries.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::Fuel;

    #[test]
    fn numbering_is_length_then_lex() {
        let c = TruncatedSpace::cantor(2);
        assert_eq!(c.len(), 7);
        assert_eq!(c.elem_of(&[]).unwrap(), Elem(0));
        assert_eq!(c.elem_of(&[1, 0]).unwrap(), Elem(5));
        assert_eq!(c.seq(Elem(4)), &seq(&[0, 1]));
        assert!(c.basis().leq(Elem(5), Elem(2)));
    }

    #[test]
    fn brackets() {
        let c = TruncatedSpace::cantor(3);
        assert_eq!(c.u_bracket(&seq(&[]), 1).unwrap(), vec![seq(&[0]), seq(&[1])]);
        assert_eq!(c.u_bracket(&seq(&[1]), 1).unwrap(), vec![seq(&[1])]);
        assert_eq!(c.u_bracket(&seq(&[]), 2).unwrap().len(), 4);
        assert!(matches!(
            c.u_bracket(&seq(&[]), 4),
            Err(Error::DepthExceeded { q: 4, depth: 3 })
        ));
    }

    #[test]
    fn cantor_cover_examples() {
        let c = TruncatedSpace::cantor(3);
        let s = c
            .sieve(&seq(&[]), &[seq(&[0]), seq(&[1, 0]), seq(&[1, 1])])
            .unwrap();
        assert_eq!(c.cantor_cover_test(&seq(&[]), &s).unwrap(), CantorVerdict::Covered(2));
        assert_eq!(
            c.kfinite_subcover(&seq(&[]), &s).unwrap(),
            vec![seq(&[0, 0]), seq(&[0, 1]), seq(&[1, 0]), seq(&[1, 1])]
        );
        let m = Sieve::maximal(c.basis(), c.elem_of(&[0, 1]).unwrap());
        assert_eq!(c.cantor_cover_test(&seq(&[0, 1]), &m).unwrap(), CantorVerdict::Covered(2));
        let left = c.sieve(&seq(&[]), &[seq(&[0])]).unwrap();
        match c.cantor_cover_test(&seq(&[]), &left).unwrap() {
            CantorVerdict::NotCovered { frontier } => {
                assert!(frontier.iter().all(|v| v.0[0] == 1));
                assert_eq!(frontier.len(), 4);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn restrict_sieve_examples() {
        let c = TruncatedSpace::cantor(3);
        let s = c.sieve(&seq(&[]), &[seq(&[0])]).unwrap();
        assert!(s.restrict(c.basis(), c.elem_of(&[1]).unwrap()).unwrap().is_empty());
        let r = s.restrict(c.basis(), c.elem_of(&[0, 0]).unwrap()).unwrap();
        assert!(r.is_maximal(c.basis()));
        let s2 = c.sieve(&seq(&[]), &[seq(&[0, 0]), seq(&[1])]).unwrap();
        let r2 = s2.restrict(c.basis(), c.elem_of(&[0]).unwrap()).unwrap();
        assert_eq!(r2.generators(), &[c.elem_of(&[0, 0]).unwrap()]);
        for v in c.basis().down(c.elem_of(&[0]).unwrap()).iter() {
            assert_eq!(r2.contains(v), c.seq(v).extends(&seq(&[0, 0])));
        }
    }

    #[test]
    fn baire_generation_examples() {
        let b = TruncatedSpace::baire(2, 3);
        let sp = b.space();
        let kids = b.sieve(&seq(&[]), &[seq(&[0]), seq(&[1])]).unwrap();
        assert!(sp.cover(Elem(0), &kids, Fuel(5)).is_covered());
        let mixed = b
            .sieve(&seq(&[]), &[seq(&[0, 0]), seq(&[0, 1]), seq(&[1])])
            .unwrap();
        assert_eq!(
            match sp.cover(Elem(0), &mixed, Fuel(5)) {
                crate::site::CoverVerdict::Covered(w) => w.depth(),
                v => panic!("{v:?}"),
            },
            2
        );
        let left = b.sieve(&seq(&[]), &[seq(&[0])]).unwrap();
        assert!(!sp.cover(Elem(0), &left, Fuel(100)).is_covered());
    }

    #[test]
    fn closed_closure_examples() {
        let c = TruncatedSpace::cantor(3);
        let sp = c.space();
        let s = c.sieve(&seq(&[]), &[seq(&[0]), seq(&[1])]).unwrap();
        assert!(sp.closed_closure(s.members(), Fuel(4)).set.contains(Elem(0)));
        let m = Sieve::maximal(c.basis(), c.elem_of(&[1]).unwrap());
        assert_eq!(sp.closed_closure(m.members(), Fuel(4)).set.members(), m.members());
        assert!(sp
            .closed_closure(&c.basis().empty_set(), Fuel(4))
            .set
            .members()
            .is_empty());
    }

    #[test]
    fn bar_sieve_examples() {
        let c = Arc::new(TruncatedSpace::cantor(3));
        let two = Bar::new(c.clone(), |u| u.len() >= 2, true, false).unwrap();
        let s = two.to_sieve(&seq(&[])).unwrap();
        assert_eq!(s.generators().len(), 4);
        let none = Bar::new(c.clone(), |_| false, true, false).unwrap();
        assert!(none.to_sieve(&seq(&[])).unwrap().is_empty());
        let mixed = Bar::new(c.clone(), |u| u.0.contains(&1) || u.len() >= 3, true, false).unwrap();
        let gens: Vec<FinSeq> = mixed
            .to_sieve(&seq(&[]))
            .unwrap()
            .generators()
            .iter()
            .map(|&g| c.seq(g).clone())
            .collect();
        assert_eq!(
            gens,
            vec![seq(&[1]), seq(&[0, 1]), seq(&[0, 0, 0]), seq(&[0, 0, 1])]
        );
        assert!(matches!(
            Bar::new(c.clone(), |u| u.len() <= 1, true, false),
            Err(Error::NotMonotone { .. })
        ));
    }

    #[test]
    fn inductive_flag_checked() {
        let b = Arc::new(TruncatedSpace::baire(2, 3));
        match Bar::new(b.clone(), |u| u.len() >= 2, true, true) {
            Err(Error::NotInductive(at)) => assert_eq!(at.len(), "⟨0⟩".len()),
            other => panic!("{other:?}"),
        }
        let two = Bar::new(b.clone(), |u| u.len() >= 2, true, false).unwrap();
        let closed = b.inductive_closure(two.members());
        assert!(closed.contains(Elem(0)));
        assert!(Bar::from_members(b, closed, true, true).is_ok());
    }

    #[test]
    fn baire_fronts_match_brouwer_count() {
        let b = TruncatedSpace::baire(2, 2);
        // 1 + (1 + 1)^2 fronts at the root.
        assert_eq!(b.fronts(Elem(0), 100).unwrap().len(), 5);
        assert_eq!(b.space().basic_covers(Elem(0)).unwrap().len(), 5);
    }

    #[test]
    fn bar_document_round_trip() {
        let c = Arc::new(TruncatedSpace::cantor(3));
        let bar = Bar::new(c, |u| u.len() >= 3, true, false).unwrap();
        let doc = bar.to_document();
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains("\"kind\":\"cantor\""));
        let back = Bar::from_document(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.members(), bar.members());
    }
}
