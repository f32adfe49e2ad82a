//! The double `𝒟(U, Cov)`: opens `D(u)` plus a minimal open `{q}` per point.

use std::sync::Arc;

use crate::error::Result;
use crate::maps::ContinuousMap;
use crate::points::{point_members, Point};
use crate::site::{Basis, CoverRule, CoveringSystem, Elem, ElemSet, Space};
use crate::spaces::{FinSeq, TruncatedSpace};

#[derive(Clone, Debug)]
pub struct DoubleSpace {
    inner: Arc<TruncatedSpace>,
    points: Vec<Point>,
    point_sets: Vec<ElemSet>,
    space: Arc<Space>,
}

impl DoubleSpace {
    /// Elements `0..|U|` are `D(u)` in the inner numbering; then one `{q}` per point.
    pub fn build(inner: Arc<TruncatedSpace>, points: &[Point]) -> Result<Self> {
        let point_sets = points
            .iter()
            .map(|p| point_members(&inner, p))
            .collect::<Result<Vec<_>>>()?;
        let n = inner.len();
        let mut labels: Vec<String> = inner
            .seqs()
            .iter()
            .map(|u| format!("D({})", u.label()))
            .collect();
        labels.extend(points.iter().map(|p| format!("{{{}}}", p.label())));
        let mut pairs = Vec::new();
        for v in inner.basis().elems() {
            for u in inner.basis().up(v).iter() {
                pairs.push((v, u));
            }
        }
        for (i, ps) in point_sets.iter().enumerate() {
            for v in ps.iter() {
                pairs.push((Elem(n + i), v));
            }
        }
        let basis = Basis::from_relation(labels, pairs)?;
        let space = Space::new(
            basis,
            CoverRule::Double {
                inner: inner.space_arc(),
                inner_len: n,
            },
        );
        Ok(DoubleSpace {
            inner,
            points: points.to_vec(),
            point_sets,
            space: Arc::new(space),
        })
    }

    pub fn inner(&self) -> &Arc<TruncatedSpace> {
        &self.inner
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Member sets of the points in the inner space.
    pub fn point_sets(&self) -> &[ElemSet] {
        &self.point_sets
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
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn inner_len(&self) -> usize {
        self.inner.len()
    }

    /// `D(u)`
    pub fn d(&self, u: Elem) -> Elem {
        u
    }

    pub fn d_of(&self, u: &FinSeq) -> Result<Elem> {
        self.inner.elem(u)
    }

    /// `{q_i}`
    pub fn singleton(&self, i: usize) -> Elem {
        Elem(self.inner.len() + i)
    }

    /// Point index when `e` is a singleton open.
    pub fn as_singleton(&self, e: Elem) -> Option<usize> {
        e.idx().checked_sub(self.inner.len())
    }

    /// Inner element when `e = D(u)`.
    pub fn as_d(&self, e: Elem) -> Option<Elem> {
        (e.idx() < self.inner.len()).then_some(e)
    }

    /// `μ: U → 𝒟(U)`, `μ(u, D(v)) ⟺ I(u, v)`.
    pub fn mu(&self) -> ContinuousMap {
        let id = ContinuousMap::identity(self.inner.space_arc());
        let mut pairs = Vec::new();
        for u in self.inner.basis().elems() {
            for v in id.graph()[u.idx()].iter() {
                pairs.push((u, self.d(v)));
            }
        }
        ContinuousMap::from_pairs(self.inner.space_arc(), self.space_arc(), pairs)
    }

    /// `π: 𝒟(U) → U`, `π(D(v), u) ⟺ I(v, u)`, closed so that `π({q}, u) ⟺ u ∈ q`.
    pub fn pi(&self) -> ContinuousMap {
        let id = ContinuousMap::identity(self.inner.space_arc());
        let mut pairs = Vec::new();
        for v in self.inner.basis().elems() {
            for u in id.graph()[v.idx()].iter() {
                pairs.push((self.d(v), u));
            }
        }
        ContinuousMap::from_pairs(self.space_arc(), self.inner.space_arc(), pairs)
    }

    /// The discrete space on the points, source of `ν`.
    pub fn point_space(&self) -> Arc<Space> {
        let labels = self.points.iter().map(|p| p.label()).collect();
        Arc::new(Space::discrete(labels).expect("points are distinct"))
    }

    /// `ν: Q_discr → 𝒟(U)`, `ν(q, {q})`.
    pub fn nu(&self) -> ContinuousMap {
        let pairs = (0..self.points.len()).map(|i| (Elem(i), self.singleton(i)));
        ContinuousMap::from_pairs(self.point_space(), self.space_arc(), pairs)
    }

    /// Lifts a covering system of the inner space: `C(D(u)) = {D[α] : α ∈ C(u)}`
    /// and `C({q}) = {{{q}}}`.
    pub fn covering_system(&self, inner: &CoveringSystem) -> CoveringSystem {
        let mut fams: Vec<Vec<Vec<Elem>>> = self
            .inner
            .basis()
            .elems()
            .map(|u| inner.families(u).to_vec())
            .collect();
        fams.extend((0..self.points.len()).map(|i| vec![vec![self.singleton(i)]]));
        CoveringSystem::new(self.basis().clone(), fams).expect("lifted families stay below")
    }

    /// `↑{q}`, the point of the double determined by a singleton open.
    pub fn singleton_point(&self, i: usize) -> ElemSet {
        self.basis().up(self.singleton(i)).clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::is_point;
    use crate::spaces::seq;

    fn four_points() -> Vec<Point> {
        vec![
            Point::constant(0),
            Point::new(&[0], 1),
            Point::new(&[1], 0),
            Point::constant(1),
        ]
    }

    fn double(depth: usize) -> DoubleSpace {
        DoubleSpace::build(Arc::new(TruncatedSpace::cantor(depth)), &four_points()).unwrap()
    }

    #[test]
    fn element_counts() {
        let d = double(2);
        assert_eq!(d.inner_len(), 7);
        assert_eq!(d.len(), 11);
    }

    #[test]
    fn order_rules() {
        let d = double(2);
        let zero = d.d_of(&seq(&[0])).unwrap();
        assert!(d.basis().leq(d.singleton(0), zero));
        assert!(!d.basis().leq(d.singleton(3), zero));
        assert!(!d.basis().leq(d.singleton(0), d.singleton(1)));
    }

    #[test]
    fn singletons_are_minimal_with_trivial_covers() {
        let d = double(2);
        for i in 0..4 {
            let s = d.singleton(i);
            assert!(d.basis().is_minimal(s));
            assert!(!d.space().covered_by(s, &d.basis().empty_set()));
            assert_eq!(d.space().minimal_covers(s, 10).unwrap().len(), 1);
        }
    }

    #[test]
    fn canonical_maps_are_continuous() {
        let d = double(2);
        let (mu, pi, nu) = (d.mu(), d.pi(), d.nu());
        assert!(mu.check().holds());
        assert!(pi.check().holds());
        assert!(nu.check().holds());
        let zero = d.inner().elem_of(&[0]).unwrap();
        assert!(pi.related(d.d(zero), zero));
        let id = ContinuousMap::identity(d.inner().space_arc());
        assert!(pi.compose(&mu).unwrap().same_graph(&id));
    }

    #[test]
    fn pi_sends_singleton_points_to_their_point() {
        let d = double(2);
        let pi = d.pi();
        for i in 0..4 {
            let up = d.singleton_point(i);
            assert!(is_point(d.space(), &up).holds());
            assert_eq!(pi.pt_functor(&up), d.point_sets()[i]);
        }
    }

    #[test]
    fn lifted_covering_system_generates_the_double() {
        let d = double(2);
        let c = d.covering_system(&d.inner().bracket_system());
        assert!(c.check_axiom().is_ok());
        let g = crate::site::generate_topology(&c).unwrap();
        for a in d.basis().elems() {
            for s in d.basis().downsets_below(a, 10_000).unwrap() {
                assert_eq!(g.covered_by(a, &s), d.space().covered_by(a, &s));
            }
        }
    }

    #[test]
    fn nu_is_injective_on_singletons() {
        let d = double(2);
        let nu = d.nu();
        for i in 0..4 {
            let img = nu.graph()[i].clone();
            assert!(img.contains(d.singleton(i)));
            for j in 0..4 {
                assert_eq!(img.contains(d.singleton(j)), i == j);
            }
        }
    }
}
