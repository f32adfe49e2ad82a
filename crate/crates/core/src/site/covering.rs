use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    Basis, CoverDerivation, CoverRule, CoverVerdict, CoverWitness, Elem, ElemSet, Fuel, Sieve,
    SiteError, Space,
};

/// Generator data `C(a)`: for each element, a list of finite families below it.
#[derive(Clone, Debug)]
pub struct CoveringSystem {
    basis: Basis,
    families: Vec<Vec<Vec<Elem>>>,
}

/// A failure of the covering axiom: no `β ∈ C(q)` fits inside `q*(↓α)` for `α ∈ C(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub p: String,
    pub alpha: Vec<String>,
    pub q: String,
}

impl CoveringSystem {
    /// Validates that every family lies below its element. The covering axiom is
    /// checked separately by [`CoveringSystem::check_axiom`].
    pub fn new(basis: Basis, families: Vec<Vec<Vec<Elem>>>) -> Result<Self, SiteError> {
        if families.len() != basis.len() {
            return Err(SiteError::Malformed(format!(
                "expected {} family lists, got {}",
                basis.len(),
                families.len()
            )));
        }
        let mut normalized = Vec::with_capacity(families.len());
        for (a, fams) in families.into_iter().enumerate() {
            let mut out = Vec::with_capacity(fams.len());
            for mut alpha in fams {
                for &x in &alpha {
                    basis.check(x)?;
                    if !basis.leq(x, Elem(a)) {
                        return Err(SiteError::NotBelowRoot {
                            elem: basis.label(x).to_string(),
                            root: basis.label(Elem(a)).to_string(),
                        });
                    }
                }
                alpha.sort();
                alpha.dedup();
                out.push(alpha);
            }
            normalized.push(out);
        }
        Ok(CoveringSystem {
            basis,
            families: normalized,
        })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn families(&self, a: Elem) -> &[Vec<Elem>] {
        &self.families[a.idx()]
    }

    /// First violation of the covering axiom, scanning `p`, `α`, `q` in index order.
    pub fn check_axiom(&self) -> Result<(), AxiomViolation> {
        match self.first_violation() {
            None => Ok(()),
            Some((p, alpha, q)) => Err(AxiomViolation {
                p: self.basis.label(p).to_string(),
                alpha: alpha.iter().map(|&x| self.basis.label(x).to_string()).collect(),
                q: self.basis.label(q).to_string(),
            }),
        }
    }

    fn first_violation(&self) -> Option<(Elem, Vec<Elem>, Elem)> {
        let b = &self.basis;
        for p in b.elems() {
            for alpha in self.families(p) {
                let down_alpha = b.downset(alpha.iter());
                for q in b.down(p).iter() {
                    let target = down_alpha.intersection(b.down(q));
                    let ok = self
                        .families(q)
                        .iter()
                        .any(|beta| beta.iter().all(|&y| target.contains(y)));
                    if !ok {
                        return Some((p, alpha.clone(), q));
                    }
                }
            }
        }
        None
    }

    /// Adds `q*(↓α)` to `C(q)` for every violation until the axiom holds.
    /// Terminates because each repair adds a new subset of a finite basis.
    pub fn repair_axiom(mut self) -> Self {
        while let Some((_, alpha, q)) = self.first_violation() {
            let b = &self.basis;
            let target = b.downset(alpha.iter()).intersection(b.down(q));
            let beta: Vec<Elem> = target.to_vec();
            self.families[q.idx()].push(beta);
        }
        self
    }

    pub(crate) fn family_sets(&self) -> Vec<Vec<ElemSet>> {
        let n = self.basis.len();
        self.families
            .iter()
            .map(|fams| {
                fams.iter()
                    .map(|alpha| ElemSet::from_elems(n, alpha.iter().copied()))
                    .collect()
            })
            .collect()
    }

    /// JSON document `{elements, leq, C}`.
    pub fn to_document(&self) -> CoveringSystemDoc {
        let b = &self.basis;
        let mut leq = Vec::new();
        for a in b.elems() {
            for c in b.up(a).iter() {
                if a != c {
                    leq.push([b.label(a).to_string(), b.label(c).to_string()]);
                }
            }
        }
        let mut c = BTreeMap::new();
        for a in b.elems() {
            c.insert(
                b.label(a).to_string(),
                self.families(a)
                    .iter()
                    .map(|alpha| alpha.iter().map(|&x| b.label(x).to_string()).collect())
                    .collect(),
            );
        }
        CoveringSystemDoc {
            elements: b.labels().to_vec(),
            leq,
            c,
        }
    }

    pub fn from_document(doc: &CoveringSystemDoc) -> Result<Self, SiteError> {
        let labels = doc.elements.clone();
        let lookup = |name: &str| -> Result<Elem, SiteError> {
            labels
                .iter()
                .position(|l| l == name)
                .map(Elem)
                .ok_or_else(|| SiteError::UnknownElement(name.to_string()))
        };
        let mut pairs = Vec::new();
        for [a, b] in &doc.leq {
            pairs.push((lookup(a)?, lookup(b)?));
        }
        let basis = Basis::from_relation(labels.clone(), pairs)?;
        let mut families = vec![Vec::new(); labels.len()];
        for (name, fams) in &doc.c {
            let a = lookup(name)?;
            for alpha in fams {
                let elems = alpha.iter().map(|x| lookup(x)).collect::<Result<Vec<_>, _>>()?;
                families[a.idx()].push(elems);
            }
        }
        CoveringSystem::new(basis, families)
    }
}

/// Wire format for covering systems.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringSystemDoc {
    pub elements: Vec<String>,
    pub leq: Vec<[String; 2]>,
    #[serde(rename = "C")]
    pub c: BTreeMap<String, Vec<Vec<String>>>,
}

/// The least topology in which every `↓α` with `α ∈ C(a)` covers `a`.
pub fn generate_topology(c: &CoveringSystem) -> Result<Space, SiteError> {
    if let Some((p, alpha, q)) = c.first_violation() {
        let b = c.basis();
        return Err(SiteError::CoveringAxiomViolation {
            p: b.label(p).to_string(),
            alpha: alpha.iter().map(|&x| b.label(x).to_string()).collect(),
            q: b.label(q).to_string(),
        });
    }
    Ok(Space::new(
        c.basis.clone(),
        CoverRule::Generated {
            families: c.family_sets(),
            raw: Arc::new(c.families.clone()),
        },
    ))
}

/// One step of an induction-on-covers transcript: `P(elem)` is established
/// either because `elem ∈ S` or from `P` on a family `C(elem)[family]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductionStep {
    pub elem: Elem,
    pub family: Option<usize>,
}

/// Replayed induction: steps are ordered so premises come first; the last step is `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductionTranscript {
    pub root: Elem,
    pub steps: Vec<InductionStep>,
}

/// Induction on covers: if `S` covers `a`, `P` holds on `S`, and `P` is
/// inherited from every family `α ∈ C(x)` to `x`, then `P(a)`.
pub fn cover_induction(
    c: &CoveringSystem,
    p: impl Fn(Elem) -> bool,
    a: Elem,
    s: &Sieve,
    fuel: Fuel,
) -> Result<InductionTranscript, SiteError> {
    let space = generate_topology(c)?;
    let b = c.basis();
    let derivation = match space.cover(a, s, fuel) {
        CoverVerdict::Covered(CoverWitness::Derivation(d)) => d,
        CoverVerdict::Covered(CoverWitness::Member) => CoverDerivation::Member(a),
        _ => {
            return Err(SiteError::NotACover {
                root: b.label(a).to_string(),
            })
        }
    };
    for x in s.members().iter() {
        if !p(x) {
            return Err(SiteError::PremiseFails(b.label(x).to_string()));
        }
    }
    for x in b.elems() {
        for alpha in c.families(x) {
            if alpha.iter().all(|&y| p(y)) && !p(x) {
                return Err(SiteError::HypothesisFails {
                    elem: b.label(x).to_string(),
                    family: alpha.iter().map(|&y| b.label(y).to_string()).collect(),
                });
            }
        }
    }
    let mut steps = Vec::new();
    let mut done = b.empty_set();
    flatten(&derivation, &mut steps, &mut done);
    Ok(InductionTranscript { root: a, steps })
}

fn flatten(d: &CoverDerivation, steps: &mut Vec<InductionStep>, done: &mut ElemSet) {
    match d {
        CoverDerivation::Member(x) => {
            if !done.contains(*x) {
                done.insert(*x);
                steps.push(InductionStep { elem: *x, family: None });
            }
        }
        CoverDerivation::Rule { at, family, premises } => {
            for q in premises {
                flatten(q, steps, done);
            }
            if !done.contains(*at) {
                done.insert(*at);
                steps.push(InductionStep {
                    elem: *at,
                    family: Some(*family),
                });
            }
        }
    }
}

/// Re-checks a transcript without consulting the cover search: every step
/// must be a member of `S` or have all family premises earlier in the list,
/// `P` must hold at each step, and the last step must be the root.
pub fn check_induction_transcript(
    c: &CoveringSystem,
    p: impl Fn(Elem) -> bool,
    s: &Sieve,
    t: &InductionTranscript,
) -> bool {
    let mut known = c.basis().empty_set();
    for step in &t.steps {
        let justified = match step.family {
            None => s.contains(step.elem),
            Some(fi) => c
                .families(step.elem)
                .get(fi)
                .is_some_and(|alpha| alpha.iter().all(|&y| known.contains(y))),
        };
        if !justified || !p(step.elem) {
            return false;
        }
        known.insert(step.elem);
    }
    t.steps.last().map(|s| s.elem) == Some(t.root)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two-level binary tree ⟨⟩, ⟨0⟩, ⟨1⟩, ⟨00⟩, ⟨01⟩, ⟨10⟩, ⟨11⟩ with children covers.
    fn baire2() -> CoveringSystem {
        let labels = ["", "0", "1", "00", "01", "10", "11"].map(String::from).to_vec();
        let parent = [None, Some(0), Some(0), Some(1), Some(1), Some(2), Some(2)];
        let pairs = parent
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (Elem(i), Elem(p))));
        let basis = Basis::from_relation(labels, pairs).unwrap();
        let fams = vec![
            vec![vec![Elem(1), Elem(2)]],
            vec![vec![Elem(3), Elem(4)]],
            vec![vec![Elem(5), Elem(6)]],
            vec![vec![Elem(3)]],
            vec![vec![Elem(4)]],
            vec![vec![Elem(5)]],
            vec![vec![Elem(6)]],
        ];
        CoveringSystem::new(basis, fams).unwrap()
    }

    #[test]
    fn children_cover_root() {
        let c = baire2();
        let t = generate_topology(&c).unwrap();
        let s = Sieve::new(t.basis(), Elem(0), &[Elem(1), Elem(2)]).unwrap();
        assert!(t.cover(Elem(0), &s, Fuel(10)).is_covered());
    }

    #[test]
    fn mixed_depth_cover_needs_two_steps() {
        let c = baire2();
        let t = generate_topology(&c).unwrap();
        let s = Sieve::new(t.basis(), Elem(0), &[Elem(3), Elem(4), Elem(2)]).unwrap();
        match t.cover(Elem(0), &s, Fuel(10)) {
            CoverVerdict::Covered(w) => assert_eq!(w.depth(), 2),
            v => panic!("{v:?}"),
        }
        assert!(!t.cover(Elem(0), &s, Fuel(1)).is_covered());
    }

    #[test]
    fn missing_branch_never_covered() {
        let c = baire2();
        let t = generate_topology(&c).unwrap();
        let s = Sieve::new(t.basis(), Elem(0), &[Elem(1)]).unwrap();
        for f in 0..20 {
            assert!(!t.cover(Elem(0), &s, Fuel(f)).is_covered());
        }
        assert!(matches!(
            t.cover(Elem(0), &s, Fuel(20)),
            CoverVerdict::NotCoveredWithinFuel { saturated: true }
        ));
    }

    #[test]
    fn axiom_violation_reported() {
        let mut c = baire2();
        // Leaves lose their trivial families, so nothing in C(⟨00⟩) refines ⟨⟩'s family.
        for i in 3..7 {
            c.families[i].clear();
        }
        match generate_topology(&c) {
            Err(SiteError::CoveringAxiomViolation { p, q, .. }) => {
                assert_eq!(p, "");
                assert_eq!(q, "00");
            }
            other => panic!("{other:?}"),
        }
        assert!(c.repair_axiom().check_axiom().is_ok());
    }

    #[test]
    fn document_round_trip() {
        let c = baire2();
        let doc = c.to_document();
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains("\"C\""));
        let back = CoveringSystem::from_document(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.to_document(), doc);
    }

    #[test]
    fn induction_replays_closure() {
        let c = baire2();
        let leaves = Sieve::new(c.basis(), Elem(0), &[Elem(3), Elem(4), Elem(5), Elem(6)]).unwrap();
        // P(u): u lies in the inductive closure of the length-2 sequences.
        let closure = {
            let t = generate_topology(&c).unwrap();
            t.closed_closure(leaves.members(), Fuel(10)).set
        };
        let p = |x: Elem| closure.contains(x);
        let t = cover_induction(&c, p, Elem(0), &leaves, Fuel(10)).unwrap();
        assert!(check_induction_transcript(&c, p, &leaves, &t));
        assert_eq!(t.steps.last().unwrap().elem, Elem(0));
    }

    #[test]
    fn induction_trivial_predicate() {
        let c = baire2();
        let s = Sieve::maximal(c.basis(), Elem(0));
        let t = cover_induction(&c, |_| true, Elem(0), &s, Fuel(1)).unwrap();
        assert!(check_induction_transcript(&c, |_| true, &s, &t));
    }

    #[test]
    fn induction_hypothesis_counterexample() {
        let c = baire2();
        let leaves = Sieve::new(c.basis(), Elem(0), &[Elem(3), Elem(4), Elem(5), Elem(6)]).unwrap();
        let p = |x: Elem| !c.basis().label(x).is_empty();
        match cover_induction(&c, p, Elem(0), &leaves, Fuel(10)) {
            Err(SiteError::HypothesisFails { elem, family }) => {
                assert_eq!(elem, "");
                assert_eq!(family, vec!["0".to_string(), "1".to_string()]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn induction_rejects_non_cover() {
        let c = baire2();
        let s = Sieve::new(c.basis(), Elem(0), &[Elem(1)]).unwrap();
        assert!(matches!(
            cover_induction(&c, |_| true, Elem(0), &s, Fuel(10)),
            Err(SiteError::NotACover { .. })
        ));
    }
}
