//! Brouwer ordinals, the `k`-map onto basic covers of Baire space, and the
//! labelled-tree sheaf of Brouwer ordinals over a CC space.

mod labelled;

pub use labelled::{
    bo_sheaf_checks, enumerate_trees, restrict_tree, sup_star, sup_tuple, tree_equiv, BoSheafReport,
    LabelledTree, LawCheck, Piece,
};

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::site::{generate_topology, Elem, ElemSet};
use crate::spaces::{FinSeq, TruncatedSpace};

/// `∗` or `sup(t)` with `t` of length `B`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BrouwerTree {
    Star,
    Sup(Vec<BrouwerTree>),
}

impl BrouwerTree {
    pub fn sup(children: Vec<BrouwerTree>) -> Self {
        BrouwerTree::Sup(children)
    }

    /// `0` for `∗`, else one more than the tallest child.
    pub fn height(&self) -> usize {
        match self {
            BrouwerTree::Star => 0,
            BrouwerTree::Sup(ts) => 1 + ts.iter().map(|t| t.height()).max().unwrap_or(0),
        }
    }

    /// Every `B`-branching tree of height at most `height`, shortest first.
    pub fn enumerate(branch: u32, height: usize) -> Vec<BrouwerTree> {
        let mut all = vec![BrouwerTree::Star];
        for _ in 0..height {
            let mut next = vec![BrouwerTree::Star];
            for kids in tuples(&all, branch as usize) {
                next.push(BrouwerTree::Sup(kids));
            }
            all = next;
        }
        all.sort_by_key(|t| t.height());
        all
    }
}

/// All `n`-tuples over `xs`, lexicographically.
pub(crate) fn tuples<T: Clone>(xs: &[T], n: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                xs.iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(x.clone());
                    q
                })
            })
            .collect();
    }
    out
}

/// `k(∗) = {⟨⟩}`, `k(sup(t)) = ⋃ᵢ ⟨i⟩ * k(t(i))`.
pub fn k_map(t: &BrouwerTree, depth: usize) -> Result<BTreeSet<FinSeq>> {
    let h = t.height();
    if h > depth {
        return Err(Error::DepthExceeded { q: h, depth });
    }
    Ok(k_unchecked(t))
}

fn k_unchecked(t: &BrouwerTree) -> BTreeSet<FinSeq> {
    match t {
        BrouwerTree::Star => BTreeSet::from([FinSeq::empty()]),
        BrouwerTree::Sup(ts) => ts
            .iter()
            .enumerate()
            .flat_map(|(i, s)| {
                let head = FinSeq(vec![i as u32]);
                k_unchecked(s).into_iter().map(move |w| head.concat(&w))
            })
            .collect(),
    }
}

/// Membership in `BCov(⟨⟩)` by unfolding its two rules.
pub fn is_basic_cover(branch: u32, t: &BTreeSet<FinSeq>) -> bool {
    if t.len() == 1 && t.contains(&FinSeq::empty()) {
        return true;
    }
    if t.is_empty() || t.contains(&FinSeq::empty()) {
        return false;
    }
    if t.iter().any(|w| w.0[0] >= branch) {
        return false;
    }
    (0..branch).all(|i| {
        let tail: BTreeSet<FinSeq> = t
            .iter()
            .filter(|w| w.0[0] == i)
            .map(|w| FinSeq(w.0[1..].to_vec()))
            .collect();
        is_basic_cover(branch, &tail)
    })
}

/// `S ∈ BCov(u)` read as `S = u*T` for some `T ∈ BCov(⟨⟩)`.
pub fn is_basic_cover_at(branch: u32, u: &FinSeq, s: &BTreeSet<FinSeq>) -> bool {
    s.iter().all(|w| w.extends(u))
        && is_basic_cover(
            branch,
            &s.iter().map(|w| FinSeq(w.0[u.len()..].to_vec())).collect(),
        )
}

/// The image of `k` on trees of height at most `h`, for each `h ≤ depth`.
pub fn k_images(branch: u32, depth: usize) -> Vec<BTreeSet<BTreeSet<FinSeq>>> {
    let trees = BrouwerTree::enumerate(branch, depth);
    (0..=depth)
        .map(|h| {
            trees
                .iter()
                .filter(|t| t.height() <= h)
                .map(k_unchecked)
                .collect()
        })
        .collect()
}

/// A sieve on which the generated cover relation and the alternative one disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub root: FinSeq,
    pub sieve: Vec<FinSeq>,
    pub generated: bool,
    pub alternative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AltBaireReport {
    pub branch: u32,
    pub depth: usize,
    pub image_size: usize,
    /// Sieves compared, summed over roots.
    pub instances: usize,
    /// Roots whose sieves were all enumerated.
    pub exhaustive_roots: usize,
    /// Roots compared on minimal covers, their one-generator deletions and samples.
    pub boundary_roots: Vec<FinSeq>,
    pub disagreements: Vec<Disagreement>,
    pub lemma_failures: Vec<String>,
}

impl AltBaireReport {
    pub fn holds(&self) -> bool {
        self.disagreements.is_empty() && self.lemma_failures.is_empty()
    }
}

const SIEVE_CAP: usize = 200_000;
const SAMPLES: usize = 20_000;

/// Compares `Cov` generated by the children covers with
/// `S ∈ Cov(u) ⟺ ∃T ∈ k[BO]: u*T ⊆ S` on truncated Baire space, and checks
/// finiteness, closure under composition, and restriction of basic covers.
pub fn alt_baire_equiv_check(branch: u32, depth: usize) -> Result<AltBaireReport> {
    let ts = TruncatedSpace::baire(branch, depth);
    let generated = generate_topology(&ts.children_system())?;
    let images = k_images(branch, depth);
    let b = ts.basis();
    let mut report = AltBaireReport {
        branch,
        depth,
        image_size: images[depth].len(),
        instances: 0,
        exhaustive_roots: 0,
        boundary_roots: Vec::new(),
        disagreements: Vec::new(),
        lemma_failures: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for u in b.elems() {
        let useq = ts.seq(u).clone();
        let room = depth - useq.len();
        let basics: Vec<ElemSet> = images[room]
            .iter()
            .map(|t| {
                let gens: Vec<Elem> = t
                    .iter()
                    .map(|w| ts.elem(&useq.concat(w)))
                    .collect::<Result<_>>()?;
                Ok(b.downset(gens.iter()))
            })
            .collect::<Result<_>>()?;
        let alternative = |s: &ElemSet| basics.iter().any(|t| t.is_subset(s));
        let compare = |s: &ElemSet, report: &mut AltBaireReport| {
            report.instances += 1;
            let g = generated.covered_by(u, s);
            let a = alternative(s);
            if g != a {
                report.disagreements.push(Disagreement {
                    root: useq.clone(),
                    sieve: b.maximal(s).into_iter().map(|e| ts.seq(e).clone()).collect(),
                    generated: g,
                    alternative: a,
                });
            }
        };
        match b.downsets_below(u, SIEVE_CAP) {
            Some(all) => {
                for s in &all {
                    compare(s, &mut report);
                }
                report.exhaustive_roots += 1;
            }
            None => {
                for t in &basics {
                    compare(t, &mut report);
                    for g in b.maximal(t) {
                        let mut s = t.clone();
                        s.remove(g);
                        compare(&s, &mut report);
                    }
                }
                let below: Vec<Elem> = b.down(u).iter().collect();
                for _ in 0..SAMPLES {
                    let gens: Vec<Elem> = below.iter().copied().filter(|_| rng.gen_bool(0.3)).collect();
                    compare(&b.downset(gens.iter()), &mut report);
                }
                report.boundary_roots.push(useq.clone());
            }
        }
    }
    check_basic_cover_lemma(branch, depth, &images, &mut report.lemma_failures);
    Ok(report)
}

fn check_basic_cover_lemma(
    branch: u32,
    depth: usize,
    images: &[BTreeSet<BTreeSet<FinSeq>>],
    failures: &mut Vec<String>,
) {
    let ts = TruncatedSpace::baire(branch, depth);
    for t in &images[depth] {
        if !is_basic_cover(branch, t) {
            failures.push(format!("k-image {t:?} is not a basic cover"));
        }
        // Composition: substitute any basic cover below each leaf of `t` that fits.
        for r in &images[depth] {
            let glued: BTreeSet<FinSeq> = t
                .iter()
                .flat_map(|v| {
                    if v.len() + r.iter().map(|w| w.len()).max().unwrap_or(0) <= depth {
                        r.iter().map(|w| v.concat(w)).collect::<Vec<_>>()
                    } else {
                        vec![v.clone()]
                    }
                })
                .collect();
            if !is_basic_cover(branch, &glued) {
                failures.push(format!("{t:?} composed with {r:?} leaves BCov"));
            }
        }
        // Restriction: some S ∈ BCov(v) lies in v*↓T.
        for v in ts.seqs() {
            let s: BTreeSet<FinSeq> = if t.iter().any(|w| v.extends(w)) {
                BTreeSet::from([v.clone()])
            } else {
                t.iter().filter(|w| w.extends(v)).cloned().collect()
            };
            if !is_basic_cover_at(branch, v, &s) {
                failures.push(format!("no basic cover of {v} below {t:?}"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::seq;

    #[test]
    fn k_of_star_and_one_unfolding() {
        assert_eq!(k_map(&BrouwerTree::Star, 0).unwrap(), BTreeSet::from([seq(&[])]));
        let t = BrouwerTree::sup(vec![BrouwerTree::Star; 3]);
        assert_eq!(
            k_map(&t, 1).unwrap(),
            BTreeSet::from([seq(&[0]), seq(&[1]), seq(&[2])])
        );
    }

    #[test]
    fn k_of_nested_sup() {
        let t = BrouwerTree::sup(vec![
            BrouwerTree::sup(vec![BrouwerTree::Star, BrouwerTree::Star]),
            BrouwerTree::Star,
        ]);
        assert_eq!(
            k_map(&t, 2).unwrap(),
            BTreeSet::from([seq(&[0, 0]), seq(&[0, 1]), seq(&[1])])
        );
        assert!(matches!(k_map(&t, 1), Err(Error::DepthExceeded { .. })));
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (0..4).map(|h| BrouwerTree::enumerate(2, h).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 26]);
        assert_eq!(BrouwerTree::enumerate(3, 3).len(), 730);
    }

    #[test]
    fn k_is_injective() {
        let trees = BrouwerTree::enumerate(2, 3);
        let images: BTreeSet<_> = trees.iter().map(k_unchecked).collect();
        assert_eq!(images.len(), trees.len());
    }

    #[test]
    fn sieve_examples() {
        let ts = TruncatedSpace::baire(2, 2);
        let images = k_images(2, 2);
        let covers = |gens: &[FinSeq]| {
            let s = ts.sieve(&seq(&[]), gens).unwrap();
            images[2].iter().any(|t| {
                let tg: Vec<Elem> = t.iter().map(|w| ts.elem(w).unwrap()).collect();
                ts.basis().downset(tg.iter()).is_subset(s.members())
            })
        };
        assert!(covers(&[seq(&[0]), seq(&[1])]));
        assert!(covers(&[seq(&[])]));
        assert!(!covers(&[seq(&[0])]));
    }

    #[test]
    fn alternative_description_agrees() {
        for (b, l) in [(1, 3), (2, 2), (2, 3), (3, 2)] {
            let r = alt_baire_equiv_check(b, l).unwrap();
            assert!(r.holds(), "{r:?}");
            assert!(r.boundary_roots.is_empty());
        }
    }
}
