use super::{Basis, Elem, ElemSet, SiteError};

/// A downward closed subset of `↓root`, kept as a generator antichain together
/// with its (cached) membership set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sieve {
    root: Elem,
    generators: Vec<Elem>,
    members: ElemSet,
}

impl Sieve {
    /// The sieve `↓gens` on `root`. Every generator must lie below `root`.
    pub fn new(basis: &Basis, root: Elem, gens: &[Elem]) -> Result<Self, SiteError> {
        basis.check(root)?;
        for &g in gens {
            basis.check(g)?;
            if !basis.leq(g, root) {
                return Err(SiteError::NotBelowRoot {
                    elem: basis.label(g).to_string(),
                    root: basis.label(root).to_string(),
                });
            }
        }
        Ok(Self::from_members(basis, root, &basis.downset(gens)))
    }

    /// Down-closes `members ∩ ↓root` and normalizes the generators.
    pub fn from_members(basis: &Basis, root: Elem, members: &ElemSet) -> Self {
        let mut m = members.intersection(basis.down(root));
        m = basis.down_closure(&m);
        m.intersect_with(basis.down(root));
        let generators = basis.maximal(&m);
        Sieve {
            root,
            generators,
            members: m,
        }
    }

    /// `M_a`
    pub fn maximal(basis: &Basis, root: Elem) -> Self {
        Self::from_members(basis, root, basis.down(root))
    }

    pub fn empty(basis: &Basis, root: Elem) -> Self {
        Self::from_members(basis, root, &basis.empty_set())
    }

    pub fn root(&self) -> Elem {
        self.root
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn members(&self) -> &ElemSet {
        &self.members
    }

    pub fn contains(&self, v: Elem) -> bool {
        self.members.contains(v)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_maximal(&self, basis: &Basis) -> bool {
        basis.down(self.root).is_subset(&self.members)
    }

    /// `b*S = S ∩ ↓b`, a sieve on `b`.
    pub fn restrict(&self, basis: &Basis, b: Elem) -> Result<Sieve, SiteError> {
        basis.check(b)?;
        Ok(Sieve::from_members(basis, b, &self.members))
    }

    pub fn is_subset(&self, other: &Sieve) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// A downset of the whole basis (not attached to a root), e.g. a closed sieve.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Downset {
    generators: Vec<Elem>,
    members: ElemSet,
}

impl Downset {
    pub fn from_members(basis: &Basis, members: &ElemSet) -> Self {
        let m = basis.down_closure(members);
        Downset {
            generators: basis.maximal(&m),
            members: m,
        }
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn members(&self) -> &ElemSet {
        &self.members
    }

    pub fn contains(&self, v: Elem) -> bool {
        self.members.contains(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // ⊤ above two incomparable elements l, r; ll below l.
    fn vee() -> Basis {
        let labels = ["top", "l", "r", "ll"].map(String::from).to_vec();
        Basis::from_relation(
            labels,
            [(Elem(1), Elem(0)), (Elem(2), Elem(0)), (Elem(3), Elem(1))],
        )
        .unwrap()
    }

    #[test]
    fn generators_form_antichain() {
        let b = vee();
        let s = Sieve::new(&b, Elem(0), &[Elem(1), Elem(3)]).unwrap();
        assert_eq!(s.generators(), &[Elem(1)]);
        assert!(s.contains(Elem(3)));
        assert!(!s.contains(Elem(2)));
    }

    #[test]
    fn restriction_intersects_down_set() {
        let b = vee();
        let s = Sieve::new(&b, Elem(0), &[Elem(1)]).unwrap();
        assert!(s.restrict(&b, Elem(2)).unwrap().is_empty());
        assert!(s.restrict(&b, Elem(3)).unwrap().is_maximal(&b));
    }

    #[test]
    fn generator_above_root_rejected() {
        let b = vee();
        assert!(matches!(
            Sieve::new(&b, Elem(1), &[Elem(0)]),
            Err(SiteError::NotBelowRoot { .. })
        ));
    }
}
