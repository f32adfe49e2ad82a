//! Presheaves over finite formal spaces, sheaf checks, and the concrete
//! sheaves `ℕ`, `2`, `2^{<ℕ}`, `ℕ^{<ℕ}`, `2^ℕ`, `ℕ^ℕ`.

mod local;
mod seq;

pub use local::{
    check_inhabited_covers, families_equivalent, finseq_sheaf, nat_sheaf, two_sheaf,
    LocalSection, LocalSheaf,
};
pub use seq::{pi_section, SeqSection, SeqSheaf};

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::ContinuousMap;
use crate::points::COVER_CAP;
use crate::site::{CoveringSystem, Elem, ElemSet, Space};

/// Sections with restriction along `q ≤ p`.
pub trait Presheaf {
    type Section: Clone + Ord + Debug;

    fn space(&self) -> &Space;

    /// Every section at `p` (finite by truncation).
    fn sections(&self, p: Elem) -> Vec<Self::Section>;

    /// `x↾q`; `q` must lie below the stage of `x`.
    fn restrict(&self, x: &Self::Section, q: Elem) -> Self::Section;
}

/// A presheaf tabulated as index tables: `restrict[p][i][q]` is the index of
/// `sections[p][i]↾q` in `sections[q]` (or `NONE` when `q ≰ p`).
#[derive(Clone, Debug)]
pub struct FinitePresheaf<T> {
    space: Arc<Space>,
    sections: Vec<Vec<T>>,
    restrict: Vec<Vec<Vec<u32>>>,
}

const NONE: u32 = u32::MAX;

impl<T: Clone + Ord + Debug> FinitePresheaf<T> {
    pub fn tabulate<P: Presheaf<Section = T>>(x: &P) -> Result<Self> {
        let space = Arc::new(x.space().clone());
        let b = space.basis();
        let sections: Vec<Vec<T>> = b.elems().map(|p| x.sections(p)).collect();
        let index: Vec<BTreeMap<&T, u32>> = sections
            .iter()
            .map(|s| s.iter().enumerate().map(|(i, t)| (t, i as u32)).collect())
            .collect();
        let mut restrict = Vec::with_capacity(b.len());
        for p in b.elems() {
            let mut rows = Vec::with_capacity(sections[p.idx()].len());
            for s in &sections[p.idx()] {
                let mut row = vec![NONE; b.len()];
                for q in b.down(p).iter() {
                    let y = x.restrict(s, q);
                    row[q.idx()] = *index[q.idx()].get(&y).ok_or_else(|| {
                        Error::Input(format!(
                            "restriction of {s:?} to {} is not an enumerated section",
                            b.label(q)
                        ))
                    })?;
                }
                rows.push(row);
            }
            restrict.push(rows);
        }
        Ok(FinitePresheaf {
            space,
            sections,
            restrict,
        })
    }

    /// Builds directly from tables; `restrict[p][i][q]` for every `q ≤ p`.
    pub fn from_tables(
        space: Arc<Space>,
        sections: Vec<Vec<T>>,
        restrict: Vec<Vec<Vec<u32>>>,
    ) -> Self {
        FinitePresheaf {
            space,
            sections,
            restrict,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn sections(&self, p: Elem) -> &[T] {
        &self.sections[p.idx()]
    }

    pub fn count(&self, p: Elem) -> usize {
        self.sections[p.idx()].len()
    }

    pub fn restrict_index(&self, p: Elem, i: usize, q: Elem) -> usize {
        self.restrict[p.idx()][i][q.idx()] as usize
    }

    /// Identity and composition laws of restriction.
    pub fn check_laws(&self) -> std::result::Result<(), String> {
        let b = self.space.basis();
        for p in b.elems() {
            for i in 0..self.count(p) {
                if self.restrict_index(p, i, p) != i {
                    return Err(format!("x↾p ≠ x at {} #{i}", b.label(p)));
                }
                for q in b.down(p).iter() {
                    let j = self.restrict_index(p, i, q);
                    for r in b.down(q).iter() {
                        if self.restrict_index(q, j, r) != self.restrict_index(p, i, r) {
                            return Err(format!(
                                "(x↾{})↾{} ≠ x↾{} for {} #{i}",
                                b.label(q),
                                b.label(r),
                                b.label(r),
                                b.label(p)
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Compatible families on the generators of `cover`, by backtracking.
    pub fn compatible_families(&self, gens: &[Elem]) -> Vec<Vec<usize>> {
        let b = self.space.basis();
        let overlaps: Vec<Vec<(usize, Vec<Elem>)>> = (0..gens.len())
            .map(|k| {
                (0..k)
                    .filter_map(|l| {
                        let common = b.down(gens[k]).intersection(b.down(gens[l]));
                        (!common.is_empty()).then(|| (l, common.to_vec()))
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(gens.len());
        self.extend_family(gens, &overlaps, &mut cur, &mut out);
        out
    }

    fn extend_family(
        &self,
        gens: &[Elem],
        overlaps: &[Vec<(usize, Vec<Elem>)>],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let k = cur.len();
        if k == gens.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..self.count(gens[k]) {
            let ok = overlaps[k].iter().all(|(l, common)| {
                common.iter().all(|&r| {
                    self.restrict_index(gens[k], j, r) == self.restrict_index(gens[*l], cur[*l], r)
                })
            });
            if ok {
                cur.push(j);
                self.extend_family(gens, overlaps, cur, out);
                cur.pop();
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SheafVerdict {
    Holds {
        covers: usize,
        families: usize,
    },
    MissingAmalgamation {
        root: String,
        cover: Vec<String>,
        family: Vec<usize>,
    },
    NonUniqueAmalgamation {
        root: String,
        cover: Vec<String>,
        sections: [usize; 2],
    },
}

impl SheafVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SheafVerdict::Holds { .. })
    }
}

/// Existence and uniqueness of amalgamations for every compatible family on
/// each listed covering sieve `(p, S)`.
pub fn sheaf_check<T: Clone + Ord + Debug>(
    x: &FinitePresheaf<T>,
    covers: &[(Elem, ElemSet)],
) -> SheafVerdict {
    let b = x.space().basis();
    let mut families = 0;
    for (p, s) in covers {
        let s = b.down_closure(&s.intersection(b.down(*p)));
        let gens = b.maximal(&s);
        let labels = || gens.iter().map(|&g| b.label(g).to_string()).collect::<Vec<_>>();
        let mut restricted: HashMap<Vec<usize>, usize> = HashMap::new();
        for i in 0..x.count(*p) {
            let fam: Vec<usize> = gens.iter().map(|&g| x.restrict_index(*p, i, g)).collect();
            if let Some(&j) = restricted.get(&fam) {
                return SheafVerdict::NonUniqueAmalgamation {
                    root: b.label(*p).to_string(),
                    cover: labels(),
                    sections: [j, i],
                };
            }
            restricted.insert(fam, i);
        }
        for fam in x.compatible_families(&gens) {
            families += 1;
            if !restricted.contains_key(&fam) {
                return SheafVerdict::MissingAmalgamation {
                    root: b.label(*p).to_string(),
                    cover: labels(),
                    family: fam,
                };
            }
        }
    }
    SheafVerdict::Holds {
        covers: covers.len(),
        families,
    }
}

/// Every covering sieve of every element, or the minimal covers where
/// enumeration would exceed the cap.
pub fn all_covers(space: &Space) -> Vec<(Elem, ElemSet)> {
    let mut out = Vec::new();
    for a in space.basis().elems() {
        let covers = space
            .covering_sieves(a, COVER_CAP)
            .or_else(|| space.minimal_covers(a, COVER_CAP))
            .unwrap_or_default();
        out.extend(covers.into_iter().map(|s| (a, s)));
    }
    out
}

/// The sheaf condition only on the generating families `↓α`, `α ∈ C(a)`.
pub fn sheaf_check_covering_system<T: Clone + Ord + Debug>(
    x: &FinitePresheaf<T>,
    c: &CoveringSystem,
) -> SheafVerdict {
    let b = c.basis();
    let covers: Vec<(Elem, ElemSet)> = b
        .elems()
        .flat_map(|a| {
            c.families(a)
                .iter()
                .map(move |alpha| (a, b.downset(alpha.iter())))
        })
        .collect();
    sheaf_check(x, &covers)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PurityVerdict {
    Holds { sections: usize },
    /// The section at this index has a non-covering purity sieve.
    Fails { index: usize },
}

/// For each `x ∈ X(p)`, `{q ≤ p : x↾q pure}` covers `p`.
pub fn pure_density_check<V: Clone + Eq + Ord + Debug>(
    x: &LocalSheaf<V>,
    p: Elem,
) -> PurityVerdict {
    let secs = x.enumerate(p);
    for (i, s) in secs.iter().enumerate() {
        if !x.space().covered_by(p, &s.purity_sieve(x.space())) {
            return PurityVerdict::Fails { index: i };
        }
    }
    PurityVerdict::Holds {
        sections: secs.len(),
    }
}

/// The discrete space on `0..nmax`.
pub fn discrete_nat(nmax: u32) -> Arc<Space> {
    Arc::new(Space::discrete((0..nmax).map(|n| n.to_string()).collect()).expect("distinct labels"))
}

/// The graph `F(r, n) ⟺ val(r) = n` of a global section.
pub fn nat_section_as_map(
    space: Arc<Space>,
    target: Arc<Space>,
    s: &LocalSection<u32>,
) -> ContinuousMap {
    let graph = space
        .basis()
        .elems()
        .map(|r| {
            ElemSet::from_elems(
                target.len(),
                s.value(r).map(|&v| Elem(v as usize)),
            )
        })
        .collect();
    ContinuousMap::from_graph_unchecked(space, target, graph)
}

/// Graphs of all continuous maps `space → ℕ_discr` (values below `nmax`):
/// pairwise disjoint closed fibers whose union covers `top`.
pub fn continuous_maps_to_discrete(space: &Space, top: Elem, nmax: u32) -> Vec<Vec<ElemSet>> {
    let b = space.basis();
    let closed: Vec<ElemSet> = b
        .downsets_below(top, COVER_CAP)
        .unwrap_or_default()
        .into_iter()
        .filter(|s| space.is_closed(s))
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn go(
        space: &Space,
        top: Elem,
        nmax: usize,
        closed: &[ElemSet],
        used: &ElemSet,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<ElemSet>>,
    ) {
        if chosen.len() == nmax {
            if space.covered_by(top, used) {
                let b = space.basis();
                let graph = b
                    .elems()
                    .map(|r| {
                        ElemSet::from_elems(
                            nmax,
                            chosen
                                .iter()
                                .enumerate()
                                .filter(|(_, &c)| closed[c].contains(r))
                                .map(|(n, _)| Elem(n)),
                        )
                    })
                    .collect();
                out.push(graph);
            }
            return;
        }
        for (i, c) in closed.iter().enumerate() {
            if c.is_disjoint(used) {
                chosen.push(i);
                go(space, top, nmax, closed, &used.union(c), chosen, out);
                chosen.pop();
            }
        }
    }
    go(space, top, nmax as usize, &closed, &b.empty_set(), &mut chosen, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalSectionReport {
    pub sections: usize,
    pub maps: usize,
    pub all_continuous: bool,
    pub bijective: bool,
}

/// Global sections of `ℕ` against independently enumerated continuous maps.
pub fn global_sections_vs_maps(x: &LocalSheaf<u32>, top: Elem) -> GlobalSectionReport {
    let nmax = x.universe().len() as u32;
    let target = discrete_nat(nmax);
    let secs = x.enumerate(top);
    let mut from_secs = Vec::with_capacity(secs.len());
    let mut all_continuous = true;
    for s in &secs {
        let m = nat_section_as_map(x.space_arc(), Arc::clone(&target), s);
        all_continuous &= m.check().holds();
        from_secs.push(m.graph().to_vec());
    }
    let mut maps = continuous_maps_to_discrete(x.space(), top, nmax);
    let mut a = from_secs.clone();
    a.sort();
    a.dedup();
    maps.sort();
    GlobalSectionReport {
        sections: secs.len(),
        maps: maps.len(),
        all_continuous,
        bijective: a.len() == secs.len() && a == maps,
    }
}

/// The constant presheaf: every value at every stage, identity restriction.
#[derive(Clone, Debug)]
pub struct ConstantPresheaf {
    space: Arc<Space>,
    values: u32,
}

impl ConstantPresheaf {
    pub fn new(space: Arc<Space>, values: u32) -> Self {
        ConstantPresheaf { space, values }
    }
}

impl Presheaf for ConstantPresheaf {
    type Section = u32;

    fn space(&self) -> &Space {
        &self.space
    }

    fn sections(&self, _p: Elem) -> Vec<u32> {
        (0..self.values).collect()
    }

    fn restrict(&self, x: &u32, _q: Elem) -> u32 {
        *x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{seq, TruncatedSpace};

    fn cantor(depth: usize) -> TruncatedSpace {
        TruncatedSpace::cantor(depth)
    }

    #[test]
    fn pure_restricts_to_pure() {
        let c = cantor(3);
        let s = LocalSection::pure(c.space(), Elem(0), 5u32);
        let r = s.restrict(c.space(), c.elem_of(&[0, 1]).unwrap());
        assert!(r.is_pure());
        assert_eq!(r.pure_value(), Some(&5));
    }

    #[test]
    fn mixed_section() {
        let c = cantor(3);
        let l = c.elem_of(&[0]).unwrap();
        let r = c.elem_of(&[1]).unwrap();
        let s = LocalSection::from_family(c.space(), Elem(0), &[(l, 5u32), (r, 7)]).unwrap();
        assert!(!s.is_pure());
        assert_eq!(s.value(l), Some(&5));
        assert_eq!(s.value(c.elem_of(&[1, 1]).unwrap()), Some(&7));
        let density = s.purity_sieve(c.space());
        assert_eq!(c.basis().maximal(&density), vec![l, r]);
        assert!(c.space().covered_by(Elem(0), &density));
    }

    #[test]
    fn refinement_is_equivalent() {
        let c = cantor(3);
        let l = c.elem_of(&[0]).unwrap();
        let r = c.elem_of(&[1]).unwrap();
        assert!(families_equivalent(c.space(), Elem(0), &[(Elem(0), 5u32)], &[(l, 5), (r, 5)]));
        assert!(!families_equivalent(c.space(), Elem(0), &[(Elem(0), 5u32)], &[(l, 5), (r, 6)]));
        let a = LocalSection::from_family(c.space(), Elem(0), &[(l, 5u32), (r, 5)]).unwrap();
        assert_eq!(a, LocalSection::pure(c.space(), Elem(0), 5));
    }

    #[test]
    fn non_covering_family_rejected() {
        let c = cantor(2);
        let l = c.elem_of(&[0]).unwrap();
        assert!(matches!(
            LocalSection::from_family(c.space(), Elem(0), &[(l, 1u32)]),
            Err(Error::NotCovering(_))
        ));
    }

    #[test]
    fn nat_sheaf_passes_full_check() {
        let c = cantor(2);
        let n = nat_sheaf(c.space_arc(), 2).unwrap();
        let t = FinitePresheaf::tabulate(&n).unwrap();
        t.check_laws().unwrap();
        assert!(sheaf_check(&t, &all_covers(c.space())).holds());
        // 2-colourings of the four leaves.
        assert_eq!(t.count(Elem(0)), 16);
    }

    #[test]
    fn constant_presheaf_fails() {
        let c = cantor(2);
        let k = FinitePresheaf::tabulate(&ConstantPresheaf::new(c.space_arc(), 2)).unwrap();
        let kids = c.sieve(&seq(&[]), &[seq(&[0]), seq(&[1])]).unwrap();
        assert!(matches!(
            sheaf_check(&k, &[(Elem(0), kids.members().clone())]),
            SheafVerdict::MissingAmalgamation { .. }
        ));
    }

    #[test]
    fn maximal_covers_only_is_vacuous() {
        let sp = Arc::new(Space::discrete(vec!["a".into(), "b".into()]).unwrap());
        let k = FinitePresheaf::tabulate(&ConstantPresheaf::new(sp.clone(), 3)).unwrap();
        assert!(sheaf_check(&k, &all_covers(&sp)).holds());
    }

    #[test]
    fn global_sections_match_maps() {
        let c = cantor(2);
        let n = nat_sheaf(c.space_arc(), 2).unwrap();
        let r = global_sections_vs_maps(&n, Elem(0));
        assert!(r.all_continuous && r.bijective, "{r:?}");
    }
}
