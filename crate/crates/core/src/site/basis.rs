use std::collections::HashMap;

use super::{Elem, ElemSet, SiteError};

/// A finite preorder of basic opens.
///
/// `down[a]` holds every `x ≤ a`, `up[a]` every `x ≥ a`. Both include `a`.
#[derive(Clone, Debug)]
pub struct Basis {
    labels: Vec<String>,
    index: HashMap<String, Elem>,
    down: Vec<ElemSet>,
    up: Vec<ElemSet>,
}

impl Basis {
    /// Builds the reflexive-transitive closure of `pairs`, where `(a, b)` reads `a ≤ b`.
    pub fn from_relation(
        labels: Vec<String>,
        pairs: impl IntoIterator<Item = (Elem, Elem)>,
    ) -> Result<Self, SiteError> {
        let n = labels.len();
        let mut up: Vec<ElemSet> = (0..n)
            .map(|i| ElemSet::from_elems(n, [Elem(i)]))
            .collect();
        for (a, b) in pairs {
            if a.idx() >= n {
                return Err(SiteError::UnknownElement(a.to_string()));
            }
            if b.idx() >= n {
                return Err(SiteError::UnknownElement(b.to_string()));
            }
            up[a.idx()].insert(b);
        }
        // Warshall on the "≤" relation.
        for k in 0..n {
            let up_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(Elem(k)) {
                    row.union_with(&up_k);
                }
            }
        }
        Self::from_up_sets(labels, up)
    }

    /// Builds a basis from a decidable order. Fails unless `leq` is reflexive and transitive.
    pub fn from_leq_fn(
        labels: Vec<String>,
        leq: impl Fn(Elem, Elem) -> bool,
    ) -> Result<Self, SiteError> {
        let n = labels.len();
        let up: Vec<ElemSet> = (0..n)
            .map(|a| ElemSet::from_elems(n, (0..n).map(Elem).filter(|&b| leq(Elem(a), b))))
            .collect();
        for a in 0..n {
            if !up[a].contains(Elem(a)) {
                return Err(SiteError::NotPreorder(format!("{} is not ≤ itself", labels[a])));
            }
            for b in up[a].iter() {
                if !up[b.idx()].is_subset(&up[a]) {
                    return Err(SiteError::NotPreorder(format!(
                        "transitivity fails through {} ≤ {}",
                        labels[a],
                        labels[b.idx()]
                    )));
                }
            }
        }
        Self::from_up_sets(labels, up)
    }

    fn from_up_sets(labels: Vec<String>, up: Vec<ElemSet>) -> Result<Self, SiteError> {
        let n = labels.len();
        let mut down = vec![ElemSet::empty(n); n];
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                down[b.idx()].insert(Elem(a));
            }
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), Elem(i)).is_some() {
                return Err(SiteError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Basis {
            labels,
            index,
            down,
            up,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elems(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.len()).map(Elem)
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a.idx()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find(&self, label: &str) -> Option<Elem> {
        self.index.get(label).copied()
    }

    pub fn check(&self, a: Elem) -> Result<Elem, SiteError> {
        if a.idx() < self.len() {
            Ok(a)
        } else {
            Err(SiteError::UnknownElement(a.to_string()))
        }
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.up[a.idx()].contains(b)
    }

    /// `↓a`
    pub fn down(&self, a: Elem) -> &ElemSet {
        &self.down[a.idx()]
    }

    /// `↑a`
    pub fn up(&self, a: Elem) -> &ElemSet {
        &self.up[a.idx()]
    }

    pub fn empty_set(&self) -> ElemSet {
        ElemSet::empty(self.len())
    }

    pub fn full_set(&self) -> ElemSet {
        ElemSet::full(self.len())
    }

    /// `↓α`
    pub fn downset<'a>(&self, gens: impl IntoIterator<Item = &'a Elem>) -> ElemSet {
        let mut s = self.empty_set();
        for g in gens {
            s.union_with(self.down(*g));
        }
        s
    }

    /// Down-closure of an arbitrary set.
    pub fn down_closure(&self, set: &ElemSet) -> ElemSet {
        let mut s = self.empty_set();
        for g in set.iter() {
            s.union_with(self.down(g));
        }
        s
    }

    pub fn is_downset(&self, set: &ElemSet) -> bool {
        set.iter().all(|g| self.down(g).is_subset(set))
    }

    /// Maximal elements of `set`, one representative (the smallest index) per
    /// equivalence class of the preorder.
    pub fn maximal(&self, set: &ElemSet) -> Vec<Elem> {
        set.iter()
            .filter(|&x| {
                set.iter().all(|y| {
                    if y == x || !self.leq(x, y) {
                        return true;
                    }
                    // y ≥ x; x survives only if y ≤ x too and x is the canonical one.
                    self.leq(y, x) && x < y
                })
            })
            .collect()
    }

    /// Minimal elements of `set` (one per equivalence class).
    pub fn minimal(&self, set: &ElemSet) -> Vec<Elem> {
        set.iter()
            .filter(|&x| {
                set.iter()
                    .all(|y| y == x || !self.leq(y, x) || (self.leq(x, y) && x < y))
            })
            .collect()
    }

    /// `↓a ∩ ↓b = ∅`
    pub fn disjoint(&self, a: Elem, b: Elem) -> bool {
        self.down(a).is_disjoint(self.down(b))
    }

    /// Elements with nothing strictly below them.
    pub fn is_minimal(&self, a: Elem) -> bool {
        self.down(a).iter().all(|x| self.leq(a, x))
    }

    /// Every downset contained in `↓root`, enumerated through antichains.
    /// Returns `None` when there are more than `cap` of them.
    pub fn downsets_below(&self, root: Elem, cap: usize) -> Option<Vec<ElemSet>> {
        // One representative per equivalence class.
        let mut cands: Vec<Elem> = Vec::new();
        for x in self.down(root).iter() {
            let canon = self
                .down(x)
                .iter()
                .filter(|&y| self.leq(x, y))
                .min()
                .unwrap_or(x);
            if canon == x {
                cands.push(x);
            }
        }
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        if !self.antichains(&cands, 0, &mut chosen, &mut out, cap) {
            return None;
        }
        Some(out)
    }

    fn antichains(
        &self,
        cands: &[Elem],
        from: usize,
        chosen: &mut Vec<Elem>,
        out: &mut Vec<ElemSet>,
        cap: usize,
    ) -> bool {
        if out.len() >= cap {
            return false;
        }
        out.push(self.downset(chosen.iter()));
        for i in from..cands.len() {
            let c = cands[i];
            if chosen
                .iter()
                .all(|&g| !self.leq(c, g) && !self.leq(g, c))
            {
                chosen.push(c);
                let ok = self.antichains(cands, i + 1, chosen, out, cap);
                chosen.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> Basis {
        let labels = vec!["a".into(), "b".into(), "c".into()];
        Basis::from_relation(labels, [(Elem(0), Elem(1)), (Elem(1), Elem(2))]).unwrap()
    }

    #[test]
    fn closure_is_transitive() {
        let b = chain3();
        assert!(b.leq(Elem(0), Elem(2)));
        assert!(!b.leq(Elem(2), Elem(0)));
        assert_eq!(b.down(Elem(2)).len(), 3);
    }

    #[test]
    fn rejects_non_transitive_order() {
        let labels = vec!["a".into(), "b".into(), "c".into()];
        let err = Basis::from_leq_fn(labels, |x, y| {
            x == y || (x.0, y.0) == (0, 1) || (x.0, y.0) == (1, 2)
        });
        assert!(matches!(err, Err(SiteError::NotPreorder(_))));
    }

    #[test]
    fn downsets_of_chain() {
        let b = chain3();
        // ∅, ↓a, ↓b, ↓c
        assert_eq!(b.downsets_below(Elem(2), 100).unwrap().len(), 4);
    }

    #[test]
    fn maximal_picks_one_per_class() {
        let labels = vec!["a".into(), "b".into()];
        let b = Basis::from_relation(labels, [(Elem(0), Elem(1)), (Elem(1), Elem(0))]).unwrap();
        assert_eq!(b.maximal(&b.full_set()), vec![Elem(0)]);
    }
}
