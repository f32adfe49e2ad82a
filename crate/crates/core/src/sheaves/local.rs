//! Sheaves of locally constant values: `ℕ`, `2`, `2^{<ℕ}`, `ℕ^{<ℕ}`.
//!
//! A section at `p` is kept in normal form as its value function: `val(r) = v`
//! exactly when `{s ≤ r : φ(s) = v}` covers `r`. Two families are `∼`-equal
//! iff their value functions coincide, provided no cover is empty.

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::points::COVER_CAP;
use crate::site::{Elem, ElemSet, Space};

use super::Presheaf;

/// A `∼`-class of compatible families `(S, φ)` at `root`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalSection<V> {
    root: Elem,
    vals: Vec<Option<V>>,
}

impl<V: Debug> Debug for LocalSection<V> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let defined: Vec<String> = self
            .vals
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.as_ref().map(|v| format!("#{i}:{v:?}")))
            .collect();
        write!(f, "@#{} {{{}}}", self.root.0, defined.join(" "))
    }
}

impl<V: Clone + Eq + Ord> LocalSection<V> {
    /// `(M_p, v)`
    pub fn pure(space: &Space, root: Elem, v: V) -> Self {
        let mut vals = vec![None; space.len()];
        for r in space.basis().down(root).iter() {
            vals[r.idx()] = Some(v.clone());
        }
        LocalSection { root, vals }
    }

    /// The class of the family taking value `v` on `↓g` for each `(g, v)`.
    /// Fails unless the generators cover `root` and agree on overlaps.
    pub fn from_family(space: &Space, root: Elem, family: &[(Elem, V)]) -> Result<Self> {
        let b = space.basis();
        for (i, (g, v)) in family.iter().enumerate() {
            if !b.leq(*g, root) {
                return Err(Error::Site(crate::site::SiteError::NotBelowRoot {
                    elem: b.label(*g).to_string(),
                    root: b.label(root).to_string(),
                }));
            }
            for (h, w) in &family[..i] {
                if v != w && !b.disjoint(*g, *h) {
                    return Err(Error::Input(format!(
                        "family is not compatible on {} and {}",
                        b.label(*g),
                        b.label(*h)
                    )));
                }
            }
        }
        let mut pieces: Vec<(V, ElemSet)> = Vec::new();
        for (g, v) in family {
            match pieces.iter_mut().find(|(w, _)| w == v) {
                Some((_, s)) => s.union_with(b.down(*g)),
                None => pieces.push((v.clone(), b.down(*g).clone())),
            }
        }
        let s = Self::from_pieces(space, root, &pieces);
        if !s.is_defined(root) && !s.domain_covers(space) {
            return Err(Error::NotCovering(b.label(root).to_string()));
        }
        Ok(s)
    }

    /// Value function from downsets `A_v` on which the value is `v`.
    pub(crate) fn from_pieces(space: &Space, root: Elem, pieces: &[(V, ElemSet)]) -> Self {
        let b = space.basis();
        let mut vals = vec![None; space.len()];
        for r in b.down(root).iter() {
            for (v, a) in pieces {
                if space.covered_by(r, a) {
                    vals[r.idx()] = Some(v.clone());
                    break;
                }
            }
        }
        LocalSection { root, vals }
    }

    pub fn root(&self) -> Elem {
        self.root
    }

    pub fn value(&self, r: Elem) -> Option<&V> {
        self.vals.get(r.idx()).and_then(|v| v.as_ref())
    }

    pub fn is_defined(&self, r: Elem) -> bool {
        self.value(r).is_some()
    }

    /// Pure iff represented over the maximal sieve.
    pub fn is_pure(&self) -> bool {
        self.is_defined(self.root)
    }

    pub fn pure_value(&self) -> Option<&V> {
        self.value(self.root)
    }

    /// Elements below the root where the section is defined.
    pub fn domain(&self) -> ElemSet {
        ElemSet::from_elems(
            self.vals.len(),
            (0..self.vals.len())
                .map(Elem)
                .filter(|&r| self.is_defined(r)),
        )
    }

    pub(crate) fn domain_covers(&self, space: &Space) -> bool {
        space.covered_by(self.root, &self.domain())
    }

    /// `(S, φ)↾q = (q*S, φ|q*S)`
    pub fn restrict(&self, space: &Space, q: Elem) -> Self {
        let b = space.basis();
        let mut vals = vec![None; self.vals.len()];
        for r in b.down(q).iter() {
            vals[r.idx()] = self.vals[r.idx()].clone();
        }
        LocalSection { root: q, vals }
    }

    /// Canonical representative: the maximal pieces of the domain with their values.
    pub fn representative(&self, space: &Space) -> Vec<(Elem, V)> {
        space
            .basis()
            .maximal(&self.domain())
            .into_iter()
            .map(|g| (g, self.vals[g.idx()].clone().expect("in domain")))
            .collect()
    }

    /// `{q ≤ p : x↾q is pure}`
    pub fn purity_sieve(&self, space: &Space) -> ElemSet {
        self.domain().intersection(space.basis().down(self.root))
    }
}

/// `(S, φ) ∼ (T, ψ)` by the definition: the largest agreeing part of `S ∩ T` covers.
pub fn families_equivalent<V: Eq>(
    space: &Space,
    root: Elem,
    f: &[(Elem, V)],
    g: &[(Elem, V)],
) -> bool {
    let b = space.basis();
    let value = |fam: &[(Elem, V)], r: Elem| -> Option<usize> {
        fam.iter().position(|(h, _)| b.leq(r, *h))
    };
    let agree = ElemSet::from_elems(
        space.len(),
        b.down(root).iter().filter(|&r| {
            match (value(f, r), value(g, r)) {
                (Some(i), Some(j)) => f[i].1 == g[j].1,
                _ => false,
            }
        }),
    );
    space.covered_by(root, &agree)
}

/// Fails when some element is covered by the empty sieve.
pub fn check_inhabited_covers(space: &Space) -> Result<()> {
    let empty = space.basis().empty_set();
    for a in space.basis().elems() {
        if space.covered_by(a, &empty) {
            return Err(Error::EmptyCoverPresent(space.basis().label(a).to_string()));
        }
    }
    Ok(())
}

/// Sheafification of a constant presheaf on a finite value universe.
#[derive(Clone, Debug)]
pub struct LocalSheaf<V> {
    space: Arc<Space>,
    universe: Vec<V>,
}

impl<V: Clone + Eq + Ord + Debug> LocalSheaf<V> {
    pub fn new(space: Arc<Space>, universe: Vec<V>) -> Result<Self> {
        check_inhabited_covers(&space)?;
        Ok(LocalSheaf { space, universe })
    }

    pub fn universe(&self) -> &[V] {
        &self.universe
    }

    pub fn space_arc(&self) -> Arc<Space> {
        Arc::clone(&self.space)
    }

    /// Every section at `p`, generated from assignments on the minimal covers.
    pub fn enumerate(&self, p: Elem) -> Vec<LocalSection<V>> {
        let sp = &self.space;
        let b = sp.basis();
        let covers = sp
            .minimal_covers(p, COVER_CAP)
            .unwrap_or_else(|| vec![b.down(p).clone()]);
        let mut out = BTreeSet::new();
        for cover in covers {
            let gens = b.maximal(&cover);
            let comps = components(sp, &gens);
            let mut choice = vec![0usize; comps.len()];
            loop {
                let mut pieces: Vec<(V, ElemSet)> = Vec::new();
                for (ci, comp) in comps.iter().enumerate() {
                    let v = &self.universe[choice[ci]];
                    let down = b.downset(comp.iter());
                    match pieces.iter_mut().find(|(w, _)| w == v) {
                        Some((_, s)) => s.union_with(&down),
                        None => pieces.push((v.clone(), down)),
                    }
                }
                out.insert(LocalSection::from_pieces(sp, p, &pieces));
                if !odometer(&mut choice, self.universe.len()) {
                    break;
                }
            }
        }
        out.into_iter().collect()
    }
}

impl<V: Clone + Eq + Ord + Debug> Presheaf for LocalSheaf<V> {
    type Section = LocalSection<V>;

    fn space(&self) -> &Space {
        &self.space
    }

    fn sections(&self, p: Elem) -> Vec<LocalSection<V>> {
        self.enumerate(p)
    }

    fn restrict(&self, x: &LocalSection<V>, q: Elem) -> LocalSection<V> {
        x.restrict(&self.space, q)
    }
}

/// Generators grouped by overlap: a compatible family is constant on each group.
pub(crate) fn components(space: &Space, gens: &[Elem]) -> Vec<Vec<Elem>> {
    let b = space.basis();
    let mut comp: Vec<usize> = (0..gens.len()).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while c[r] != r {
            r = c[r];
        }
        c[i] = r;
        r
    }
    for i in 0..gens.len() {
        for j in 0..i {
            if !b.disjoint(gens[i], gens[j]) {
                let (a, c) = (find(&mut comp, i), find(&mut comp, j));
                comp[a] = c;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Elem>)> = Vec::new();
    for i in 0..gens.len() {
        let r = find(&mut comp, i);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(gens[i]),
            None => groups.push((r, vec![gens[i]])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Mixed-radix increment; false once every digit has wrapped.
pub(crate) fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// `ℕ` with values below `nmax`.
pub fn nat_sheaf(space: Arc<Space>, nmax: u32) -> Result<LocalSheaf<u32>> {
    LocalSheaf::new(space, (0..nmax).collect())
}

/// `2`
pub fn two_sheaf(space: Arc<Space>) -> Result<LocalSheaf<u32>> {
    nat_sheaf(space, 2)
}

/// Lists over `0..alphabet` of length at most `max_len`, glued locally.
pub fn finseq_sheaf(space: Arc<Space>, alphabet: u32, max_len: usize) -> Result<LocalSheaf<Vec<u32>>> {
    let mut universe = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|u: &Vec<u32>| {
                (0..alphabet).map(move |x| {
                    let mut v = u.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
        universe.extend(level.iter().cloned());
    }
    LocalSheaf::new(space, universe)
}
