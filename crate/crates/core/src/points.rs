//! Points as eventually constant sequences, the space of points, and
//! enough-points comparisons.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::site::{Basis, CoverRule, Elem, ElemSet, Space};
use crate::spaces::{FinSeq, TruncatedSpace};

/// Enumeration budget for covering sieves when a space has no presentation.
pub(crate) const COVER_CAP: usize = 100_000;

/// The infinite sequence `prefix · tail^ω`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub prefix: Vec<u32>,
    pub tail: u32,
}

impl Point {
    pub fn new(prefix: &[u32], tail: u32) -> Self {
        Point {
            prefix: prefix.to_vec(),
            tail,
        }
    }

    pub fn constant(tail: u32) -> Self {
        Point::new(&[], tail)
    }

    /// `α(i)`
    pub fn at(&self, i: usize) -> u32 {
        self.prefix.get(i).copied().unwrap_or(self.tail)
    }

    /// `⟨α(0), …, α(n-1)⟩`
    pub fn initial(&self, n: usize) -> FinSeq {
        FinSeq((0..n).map(|i| self.at(i)).collect())
    }

    /// `u ∈ α`: `u` is an initial segment of the sequence.
    pub fn passes(&self, u: &FinSeq) -> bool {
        u.0.iter().enumerate().all(|(i, &x)| self.at(i) == x)
    }

    /// Shortest equivalent prefix, so equal sequences get equal representations.
    pub fn canonical(&self) -> Point {
        let mut p = self.prefix.clone();
        while p.last() == Some(&self.tail) {
            p.pop();
        }
        Point {
            prefix: p,
            tail: self.tail,
        }
    }

    /// The opens of a truncated space containing this point.
    pub fn members(&self, ts: &TruncatedSpace) -> ElemSet {
        ElemSet::from_elems(
            ts.len(),
            (0..=ts.depth()).filter_map(|n| ts.elem(&self.initial(n)).ok()),
        )
    }

    pub fn label(&self) -> String {
        let p: Vec<String> = self.prefix.iter().map(|x| x.to_string()).collect();
        format!("{};{}", p.join(","), self.tail)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Every distinct eventually constant sequence over `0..branch` whose
/// canonical prefix has length at most `max_prefix`.
pub fn eventually_constant_points(branch: u32, max_prefix: usize) -> Vec<Point> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<u32>> = vec![Vec::new()];
    for n in 0..=max_prefix {
        for p in &level {
            for t in 0..branch {
                if p.last() != Some(&t) {
                    out.push(Point {
                        prefix: p.clone(),
                        tail: t,
                    });
                }
            }
        }
        if n < max_prefix {
            level = level
                .iter()
                .flat_map(|p| {
                    (0..branch).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
    }
    out
}

/// `w·t^ω` for every leaf `w` of the truncation and every tail `t < tails`.
pub fn leaf_points(ts: &TruncatedSpace, tails: u32) -> Vec<Point> {
    ts.level(ts.depth())
        .iter()
        .flat_map(|w| (0..tails).map(move |t| Point::new(&w.0, t).canonical()))
        .collect()
}

/// Which clause of the definition of a point failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointVerdict {
    Holds,
    /// Condition `0` is inhabitedness; `1`–`3` follow the definition.
    Fails { condition: u8, witness: Vec<String> },
}

impl PointVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, PointVerdict::Holds)
    }
}

/// Inhabited, upward closed, downward directed, and meeting every basic cover of its members.
pub fn is_point(space: &Space, alpha: &ElemSet) -> PointVerdict {
    let b = space.basis();
    let label = |e: Elem| b.label(e).to_string();
    if alpha.is_empty() {
        return PointVerdict::Fails {
            condition: 0,
            witness: vec![],
        };
    }
    for a in alpha.iter() {
        if let Some(c) = b.up(a).iter().find(|&c| !alpha.contains(c)) {
            return PointVerdict::Fails {
                condition: 1,
                witness: vec![label(a), label(c)],
            };
        }
    }
    for a in alpha.iter() {
        for c in alpha.iter() {
            let common = b.down(a).intersection(b.down(c));
            if common.is_disjoint(alpha) {
                return PointVerdict::Fails {
                    condition: 2,
                    witness: vec![label(a), label(c)],
                };
            }
        }
    }
    for a in alpha.iter() {
        let covers = space.minimal_covers(a, COVER_CAP).unwrap_or_default();
        for s in covers {
            if s.is_disjoint(alpha) {
                let gens = b.maximal(&s);
                let mut w = vec![label(a)];
                w.extend(gens.into_iter().map(label));
                return PointVerdict::Fails { condition: 3, witness: w };
            }
        }
    }
    PointVerdict::Holds
}

/// Validates a point of a truncated space and returns its member set.
pub fn point_members(ts: &TruncatedSpace, p: &Point) -> Result<ElemSet> {
    if p.tail >= ts.branch() || p.prefix.iter().any(|&x| x >= ts.branch()) {
        return Err(Error::NotAPoint {
            point: p.label(),
            condition: 0,
            witness: "entry outside the alphabet".into(),
        });
    }
    let m = p.members(ts);
    match is_point(ts.space(), &m) {
        PointVerdict::Holds => Ok(m),
        PointVerdict::Fails { condition, witness } => Err(Error::NotAPoint {
            point: p.label(),
            condition,
            witness: witness.join(" "),
        }),
    }
}

/// `ext(a)` for every element, as a set of point indices.
pub fn extents(space: &Space, pts: &[ElemSet]) -> Vec<ElemSet> {
    space
        .basis()
        .elems()
        .map(|a| {
            ElemSet::from_elems(
                pts.len(),
                pts.iter()
                    .enumerate()
                    .filter(|(_, p)| p.contains(a))
                    .map(|(i, _)| Elem(i)),
            )
        })
        .collect()
}

/// `pt(P, Cov)` over a finite family of points: the same opens ordered by
/// `ext(p) ⊆ ext(q)` and covered when the extents cover.
pub fn pt_space(space: &Space, pts: &[ElemSet]) -> Result<Space> {
    for (i, p) in pts.iter().enumerate() {
        if let PointVerdict::Fails { condition, witness } = is_point(space, p) {
            return Err(Error::NotAPoint {
                point: format!("#{i}"),
                condition,
                witness: witness.join(" "),
            });
        }
    }
    let ext = extents(space, pts);
    let basis = Basis::from_leq_fn(space.basis().labels().to_vec(), |a, b| {
        ext[a.idx()].is_subset(&ext[b.idx()])
    })?;
    Ok(Space::new(basis, CoverRule::PointCover { ext }))
}

/// Per-sieve comparison of `Cov` and `Cov_pt`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnoughPointsReport {
    pub samples: usize,
    pub agreements: usize,
    /// Covered by points but not formally: the space lacks enough points here.
    pub pt_only: Vec<(String, Vec<String>)>,
    /// Formally covered but not by points. Always empty for genuine points.
    pub cov_only: Vec<(String, Vec<String>)>,
}

/// Compares `S ∈ Cov(a)` with `S ∈ Cov_pt(a)` on the given `(a, S)` samples.
pub fn enough_points_check(
    space: &Space,
    pts: &[ElemSet],
    sieves: &[(Elem, ElemSet)],
) -> EnoughPointsReport {
    let ext = extents(space, pts);
    let b = space.basis();
    let mut r = EnoughPointsReport {
        samples: sieves.len(),
        ..Default::default()
    };
    for (a, s) in sieves {
        let s = b.down_closure(&s.intersection(b.down(*a)));
        let formal = space.covered_by(*a, &s);
        let mut seen = ElemSet::empty(pts.len());
        for m in s.iter() {
            seen.union_with(&ext[m.idx()]);
        }
        let by_points = ext[a.idx()].is_subset(&seen);
        let entry = || {
            (
                b.label(*a).to_string(),
                b.maximal(&s).into_iter().map(|g| b.label(g).to_string()).collect(),
            )
        };
        match (formal, by_points) {
            (true, true) | (false, false) => r.agreements += 1,
            (false, true) => r.pt_only.push(entry()),
            (true, false) => r.cov_only.push(entry()),
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::seq;

    #[test]
    fn constant_zero_is_a_point() {
        let c = TruncatedSpace::cantor(3);
        assert!(point_members(&c, &Point::constant(0)).is_ok());
    }

    #[test]
    fn non_directed_set_fails_condition_two() {
        let c = TruncatedSpace::cantor(2);
        let s = ElemSet::from_elems(c.len(), [Elem(0), Elem(1), Elem(2)]);
        assert!(matches!(
            is_point(c.space(), &s),
            PointVerdict::Fails { condition: 2, .. }
        ));
    }

    #[test]
    fn membership_unfolds_prefix_then_tail() {
        let c = TruncatedSpace::cantor(3);
        let p = Point::new(&[1, 0], 1);
        let m = point_members(&c, &p).unwrap();
        assert!(m.contains(c.elem_of(&[1]).unwrap()));
        assert!(!m.contains(c.elem_of(&[0]).unwrap()));
        assert!(m.contains(c.elem_of(&[1, 0, 1]).unwrap()));
    }

    #[test]
    fn point_family_is_distinct() {
        let pts = eventually_constant_points(2, 2);
        let mut canon: Vec<Point> = pts.iter().map(|p| p.canonical()).collect();
        canon.sort();
        canon.dedup();
        assert_eq!(canon.len(), pts.len());
        // prefixes ∅ (2), length 1 (2), length 2 (4).
        assert_eq!(pts.len(), 8);
    }

    #[test]
    fn pt_space_examples() {
        let c = TruncatedSpace::cantor(3);
        let all: Vec<ElemSet> = eventually_constant_points(2, 3)
            .iter()
            .map(|p| point_members(&c, p).unwrap())
            .collect();
        let pt = pt_space(c.space(), &all).unwrap();
        let zero = c.elem_of(&[0]).unwrap();
        let one = c.elem_of(&[1]).unwrap();
        assert!(pt.basis().leq(zero, Elem(0)));
        assert!(pt.covered_by(Elem(0), &ElemSet::from_elems(c.len(), [zero, one])));

        let only_zero = vec![point_members(&c, &Point::constant(0)).unwrap()];
        let poor = pt_space(c.space(), &only_zero).unwrap();
        let left = c.sieve(&seq(&[]), &[seq(&[0])]).unwrap();
        assert!(poor.covered_by(Elem(0), left.members()));
        assert!(!c.space().covered_by(Elem(0), left.members()));
    }

    #[test]
    fn impoverished_points_disagree() {
        let c = TruncatedSpace::cantor(3);
        let only_zero = vec![point_members(&c, &Point::constant(0)).unwrap()];
        let left = c.sieve(&seq(&[]), &[seq(&[0])]).unwrap();
        let r = enough_points_check(c.space(), &only_zero, &[(Elem(0), left.members().clone())]);
        assert_eq!(r.pt_only.len(), 1);
        assert!(r.cov_only.is_empty());
    }
}
