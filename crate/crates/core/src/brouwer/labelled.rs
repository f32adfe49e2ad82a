use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forcing::{cc_refine, check_refinement};
use crate::site::{Elem, Space, SiteError};

use super::tuples;

/// One element `q ∈ α` of a root label with `φ(q) = 0` (`kids = None`) or
/// `φ(q) = 1` and the subtrees `v(q, n)` for `n < B`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Piece {
    pub at: Elem,
    pub kids: Option<Vec<LabelledTree>>,
}

/// A hereditarily composable tree with root label `(p, α, φ)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LabelledTree {
    root: Elem,
    pieces: Vec<Piece>,
}

impl LabelledTree {
    /// Checks that `α` is a disjoint refinement of `p`, that `φ(q) = 1`
    /// pieces carry exactly `branch` subtrees, and that each is rooted at `q`.
    pub fn new(space: &Space, branch: u32, root: Elem, mut pieces: Vec<Piece>) -> Result<Self> {
        let at: Vec<Elem> = pieces.iter().map(|p| p.at).collect();
        check_refinement(space, root, &at)?;
        let b = space.basis();
        for p in &pieces {
            if let Some(kids) = &p.kids {
                if kids.len() != branch as usize {
                    return Err(Error::Input(format!(
                        "{} subtrees at {}, expected {branch}",
                        kids.len(),
                        b.label(p.at)
                    )));
                }
                if let Some(k) = kids.iter().find(|k| k.root != p.at) {
                    return Err(Error::Input(format!(
                        "subtree at {} is rooted at {}",
                        b.label(p.at),
                        b.label(k.root)
                    )));
                }
            }
        }
        pieces.sort();
        Ok(LabelledTree { root, pieces })
    }

    fn raw(root: Elem, mut pieces: Vec<Piece>) -> Self {
        pieces.sort();
        LabelledTree { root, pieces }
    }

    pub fn root(&self) -> Elem {
        self.root
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn height(&self) -> usize {
        self.pieces
            .iter()
            .filter_map(|p| p.kids.as_ref())
            .map(|ks| 1 + ks.iter().map(|k| k.height()).max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }
}

/// `sup_p(∗)`: the label `(p, {p}, 0)`.
pub fn sup_star(p: Elem) -> LabelledTree {
    LabelledTree::raw(p, vec![Piece { at: p, kids: None }])
}

/// `sup_p(t)`: the label `(p, {p}, 1)` with `v(p, n) = t(n)`.
pub fn sup_tuple(p: Elem, t: Vec<LabelledTree>) -> Result<LabelledTree> {
    if t.iter().any(|k| k.root != p) {
        return Err(Error::Input("sup of trees rooted elsewhere".into()));
    }
    Ok(LabelledTree::raw(p, vec![Piece { at: p, kids: Some(t) }]))
}

/// `[w]↾q`: a disjoint refinement `β` of `q*↓α`, with each `r ∈ β`
/// inheriting `φ` from the unique piece above it and the subtrees restricted to `r`.
pub fn restrict_tree(space: &Space, w: &LabelledTree, q: Elem) -> Result<LabelledTree> {
    let b = space.basis();
    if !b.leq(q, w.root) {
        return Err(SiteError::NotBelowRoot {
            elem: b.label(q).to_string(),
            root: b.label(w.root).to_string(),
        }
        .into());
    }
    let below = b.downset(w.pieces.iter().map(|p| &p.at));
    let beta = cc_refine(space, q, &below.intersection(b.down(q)))?;
    let mut pieces = Vec::with_capacity(beta.len());
    for r in beta {
        let above = w
            .pieces
            .iter()
            .find(|p| b.leq(r, p.at))
            .expect("refinement lies below α");
        let kids = match &above.kids {
            None => None,
            Some(ks) => Some(
                ks.iter()
                    .map(|k| restrict_tree(space, k, r))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        pieces.push(Piece { at: r, kids });
    }
    Ok(LabelledTree::raw(q, pieces))
}

/// `v ∼ v'`: same root `p`, and `p` is covered by the `r ≤ q, q'` with
/// `φ(q) = φ'(q')` and, when both are `1`, `v(q,n)↾r ∼ v'(q',n)↾r` for all `n`.
pub fn tree_equiv(space: &Space, v: &LabelledTree, w: &LabelledTree) -> bool {
    Equiv::new(space).eq(v, w)
}

struct Equiv<'a> {
    space: &'a Space,
    memo: HashMap<(LabelledTree, LabelledTree), bool>,
}

impl<'a> Equiv<'a> {
    fn new(space: &'a Space) -> Self {
        Equiv {
            space,
            memo: HashMap::new(),
        }
    }

    fn eq(&mut self, v: &LabelledTree, w: &LabelledTree) -> bool {
        if v.root != w.root {
            return false;
        }
        if v == w {
            return true;
        }
        let key = (v.clone(), w.clone());
        if let Some(&x) = self.memo.get(&key) {
            return x;
        }
        let b = self.space.basis();
        let p = v.root;
        let mut good = b.empty_set();
        for r in b.down(p).iter() {
            let ok = v.pieces.iter().any(|a| {
                b.leq(r, a.at)
                    && w.pieces.iter().any(|c| {
                        b.leq(r, c.at)
                            && match (&a.kids, &c.kids) {
                                (None, None) => true,
                                (Some(ks), Some(ls)) => ks.iter().zip(ls).all(|(k, l)| {
                                    match (
                                        restrict_tree(self.space, k, r),
                                        restrict_tree(self.space, l, r),
                                    ) {
                                        (Ok(k), Ok(l)) => self.eq(&k, &l),
                                        _ => false,
                                    }
                                }),
                                _ => false,
                            }
                    })
            });
            if ok {
                good.insert(r);
            }
        }
        let x = self.space.covered_by(p, &good);
        self.memo.insert(key, x);
        x
    }
}

/// The disjoint antichains of `↓p` whose downset covers `p`.
fn refinements(space: &Space, p: Elem, cap: usize) -> Result<Vec<Vec<Elem>>> {
    let b = space.basis();
    let sieves = space
        .covering_sieves(p, cap)
        .ok_or_else(|| Error::Unsupported(format!("more than {cap} sieves at {}", b.label(p))))?;
    let mut out: BTreeSet<Vec<Elem>> = BTreeSet::new();
    for s in sieves {
        let gens = b.maximal(&s);
        if check_refinement(space, p, &gens).is_ok() {
            out.insert(gens);
        }
    }
    Ok(out.into_iter().collect())
}

/// Every tree in `𝒲(p)` of height at most `height`, ordered by height.
pub fn enumerate_trees(
    space: &Space,
    branch: u32,
    p: Elem,
    height: usize,
    cap: usize,
) -> Result<Vec<LabelledTree>> {
    Enumerator {
        space,
        branch,
        cap,
        memo: BTreeMap::new(),
    }
    .trees(p, height)
}

struct Enumerator<'a> {
    space: &'a Space,
    branch: u32,
    cap: usize,
    memo: BTreeMap<(Elem, usize), Vec<LabelledTree>>,
}

impl Enumerator<'_> {
    fn trees(&mut self, p: Elem, h: usize) -> Result<Vec<LabelledTree>> {
        if let Some(ts) = self.memo.get(&(p, h)) {
            return Ok(ts.clone());
        }
        let mut out: BTreeSet<LabelledTree> = BTreeSet::new();
        for alpha in refinements(self.space, p, self.cap)? {
            // Choices per piece: φ = 0, or φ = 1 with a tuple of lower trees.
            let mut options: Vec<Vec<Option<Vec<LabelledTree>>>> = Vec::new();
            for &q in &alpha {
                let mut opts = vec![None];
                if h > 0 {
                    let lower = self.trees(q, h - 1)?;
                    opts.extend(tuples(&lower, self.branch as usize).into_iter().map(Some));
                }
                options.push(opts);
            }
            let total: usize = options.iter().map(|o| o.len()).product();
            if out.len() + total > self.cap {
                return Err(Error::Unsupported(format!(
                    "more than {} labelled trees at {}",
                    self.cap,
                    self.space.basis().label(p)
                )));
            }
            let mut idx = vec![0usize; alpha.len()];
            loop {
                let pieces = alpha
                    .iter()
                    .zip(&idx)
                    .zip(&options)
                    .map(|((&at, &i), o)| Piece {
                        at,
                        kids: o[i].clone(),
                    })
                    .collect();
                out.insert(LabelledTree::raw(p, pieces));
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if idx[k] < options[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
        }
        let mut v: Vec<LabelledTree> = out.into_iter().collect();
        v.sort_by_key(|t| t.height());
        self.memo.insert((p, h), v.clone());
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawCheck {
    pub law: String,
    pub instances: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoSheafReport {
    pub branch: u32,
    pub height: usize,
    pub trees: usize,
    pub classes: usize,
    pub laws: Vec<LawCheck>,
}

impl BoSheafReport {
    pub fn holds(&self) -> bool {
        self.laws.iter().all(|l| l.failures.is_empty())
    }
}

const MAX_FAILURES: usize = 10;
const MAX_FAMILIES: usize = 4000;

struct Law {
    check: LawCheck,
}

impl Law {
    fn new(name: &str) -> Self {
        Law {
            check: LawCheck {
                law: name.to_string(),
                instances: 0,
                failures: Vec::new(),
            },
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.check.instances += 1;
        if !ok && self.check.failures.len() < MAX_FAILURES {
            self.check.failures.push(what());
        }
    }
}

/// Per basic open: enumerated trees, the class index of each, and one
/// representative (of least height) per class.
struct Quotient {
    trees: Vec<LabelledTree>,
    class_of: Vec<usize>,
    reps: Vec<usize>,
}

/// Builds `𝒲/∼` up to `height` and checks the equivalence, presheaf,
/// separation, sheaf, algebra, and initiality laws on the enumerated data.
pub fn bo_sheaf_checks(space: &Space, branch: u32, height: usize, cap: usize) -> Result<BoSheafReport> {
    let b = space.basis();
    let mut eq = Equiv::new(space);
    let mut en = Enumerator {
        space,
        branch,
        cap,
        memo: BTreeMap::new(),
    };
    let lbl = |e: Elem| b.label(e).to_string();

    let mut equivalence = Law::new("equivalence");
    let mut quot: Vec<Quotient> = Vec::new();
    for p in b.elems() {
        let trees = en.trees(p, height)?;
        let n = trees.len();
        let m: Vec<Vec<bool>> = trees
            .iter()
            .map(|v| trees.iter().map(|w| eq.eq(v, w)).collect())
            .collect();
        for i in 0..n {
            equivalence.record(m[i][i], || format!("not reflexive at {}", lbl(p)));
            for j in 0..n {
                equivalence.record(m[i][j] == m[j][i], || format!("not symmetric at {}", lbl(p)));
                if m[i][j] {
                    for k in 0..n {
                        equivalence.record(!m[j][k] || m[i][k], || {
                            format!("not transitive at {}: #{i} #{j} #{k}", lbl(p))
                        });
                    }
                }
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            if class_of[i] == usize::MAX {
                let c = reps.len();
                reps.push(i);
                for j in i..n {
                    if m[i][j] {
                        class_of[j] = c;
                    }
                }
            }
        }
        quot.push(Quotient {
            trees,
            class_of,
            reps,
        });
    }
    let find_class = |eq: &mut Equiv, p: Elem, t: &LabelledTree| -> Option<usize> {
        let q = &quot[p.idx()];
        (0..q.reps.len()).find(|&c| eq.eq(&q.trees[q.reps[c]], t))
    };

    let mut presheaf = Law::new("presheaf");
    for p in b.elems() {
        let qp = &quot[p.idx()];
        for (i, w) in qp.trees.iter().enumerate() {
            let id = restrict_tree(space, w, p);
            presheaf.record(id.as_ref().is_ok_and(|x| eq.eq(x, w)), || {
                format!("identity fails at {} for #{i}", lbl(p))
            });
            for q in b.down(p).iter() {
                let wq = match restrict_tree(space, w, q) {
                    Ok(x) => x,
                    Err(e) => {
                        presheaf.record(false, || e.to_string());
                        continue;
                    }
                };
                let valid = LabelledTree::new(space, branch, q, wq.pieces.clone()).is_ok();
                presheaf.record(valid, || format!("restriction to {} leaves 𝒲", lbl(q)));
                for r in b.down(q).iter() {
                    let two = restrict_tree(space, &wq, r);
                    let one = restrict_tree(space, w, r);
                    let ok = matches!((&two, &one), (Ok(x), Ok(y)) if eq.eq(x, y));
                    presheaf.record(ok, || {
                        format!("composition fails for #{i} at {}, {}, {}", lbl(p), lbl(q), lbl(r))
                    });
                }
            }
        }
        for (i, v) in qp.trees.iter().enumerate() {
            for (j, w) in qp.trees.iter().enumerate().skip(i + 1) {
                if qp.class_of[i] != qp.class_of[j] {
                    continue;
                }
                for q in b.down(p).iter() {
                    let ok = matches!(
                        (restrict_tree(space, v, q), restrict_tree(space, w, q)),
                        (Ok(x), Ok(y)) if eq.eq(&x, &y)
                    );
                    presheaf.record(ok, || {
                        format!("restriction to {} breaks ∼ of #{i}, #{j}", lbl(q))
                    });
                }
            }
        }
    }

    let mut separated = Law::new("separated");
    for p in b.elems() {
        let qp = &quot[p.idx()];
        let covers = space.minimal_covers(p, cap).unwrap_or_default();
        for s in covers {
            let gens = b.maximal(&s);
            let restricted: Vec<Vec<LabelledTree>> = qp
                .trees
                .iter()
                .map(|v| {
                    gens.iter()
                        .map(|&t| restrict_tree(space, v, t))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            for i in 0..qp.trees.len() {
                for j in 0..qp.trees.len() {
                    let agree = restricted[i]
                        .iter()
                        .zip(&restricted[j])
                        .all(|(x, y)| eq.eq(x, y));
                    if agree {
                        separated.record(qp.class_of[i] == qp.class_of[j], || {
                            format!("#{i}, #{j} at {} agree on a cover but differ", lbl(p))
                        });
                    }
                }
            }
        }
    }

    let mut sheaf = Law::new("sheaf");
    for p in b.elems() {
        for alpha in refinements(space, p, cap)? {
            if alpha == [p] {
                continue;
            }
            let choices: Vec<Vec<usize>> = alpha
                .iter()
                .map(|q| quot[q.idx()].reps.clone())
                .collect();
            for fam in product(&choices).into_iter().take(MAX_FAMILIES) {
                let reps: Vec<&LabelledTree> = alpha
                    .iter()
                    .zip(&fam)
                    .map(|(q, &i)| &quot[q.idx()].trees[i])
                    .collect();
                let pieces: Vec<Piece> = reps.iter().flat_map(|w| w.pieces.clone()).collect();
                let glued = match LabelledTree::new(space, branch, p, pieces) {
                    Ok(t) => t,
                    Err(e) => {
                        sheaf.record(false, || format!("amalgamation at {}: {e}", lbl(p)));
                        continue;
                    }
                };
                let restricts = alpha.iter().zip(&reps).all(|(&q, w)| {
                    restrict_tree(space, &glued, q).is_ok_and(|x| eq.eq(&x, w))
                });
                sheaf.record(restricts, || format!("amalgamation at {} restricts wrongly", lbl(p)));
                let qp = &quot[p.idx()];
                let matching = qp
                    .reps
                    .iter()
                    .filter(|&&c| {
                        alpha.iter().zip(&reps).all(|(&q, w)| {
                            restrict_tree(space, &qp.trees[c], q).is_ok_and(|x| eq.eq(&x, w))
                        })
                    })
                    .count();
                sheaf.record(matching == 1, || {
                    format!("{matching} classes at {} amalgamate one family", lbl(p))
                });
            }
        }
    }

    let mut algebra = Law::new("algebra");
    let mut monic = Law::new("sup monic");
    for p in b.elems() {
        let star = sup_star(p);
        for q in b.down(p).iter() {
            let ok = restrict_tree(space, &star, q).is_ok_and(|x| eq.eq(&x, &sup_star(q)));
            algebra.record(ok, || format!("sup(∗) not natural at {}, {}", lbl(p), lbl(q)));
        }
        if height == 0 {
            continue;
        }
        let qp = &quot[p.idx()];
        let lower: Vec<&LabelledTree> = qp
            .reps
            .iter()
            .map(|&i| &qp.trees[i])
            .filter(|t| t.height() < height)
            .collect();
        let tups = tuples(&lower, branch as usize);
        let sups: Vec<LabelledTree> = tups
            .iter()
            .map(|t| sup_tuple(p, t.iter().map(|x| (*x).clone()).collect()))
            .collect::<Result<_>>()?;
        for (t, s) in tups.iter().zip(&sups) {
            for q in b.down(p).iter() {
                let tq: Result<Vec<LabelledTree>> =
                    t.iter().map(|x| restrict_tree(space, x, q)).collect();
                let ok = match (restrict_tree(space, s, q), tq.and_then(|tq| sup_tuple(q, tq))) {
                    (Ok(x), Ok(y)) => eq.eq(&x, &y),
                    _ => false,
                };
                algebra.record(ok, || format!("sup(t) not natural at {}, {}", lbl(p), lbl(q)));
            }
            monic.record(!eq.eq(s, &star), || format!("sup(t) ∼ sup(∗) at {}", lbl(p)));
        }
        for i in 0..sups.len() {
            for j in 0..sups.len() {
                if eq.eq(&sups[i], &sups[j]) {
                    let same = tups[i].iter().zip(&tups[j]).all(|(x, y)| eq.eq(x, y));
                    monic.record(same, || format!("sup identifies distinct tuples at {}", lbl(p)));
                }
            }
        }
    }

    // Least subcollection closed under sup, restriction and amalgamation.
    let mut initial = Law::new("no proper subalgebra");
    let mut inside: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); b.len()];
    loop {
        let mut grew = false;
        for p in b.elems() {
            let mut found: Vec<usize> = Vec::new();
            found.extend(find_class(&mut eq, p, &sup_star(p)));
            let members: Vec<LabelledTree> = inside[p.idx()]
                .iter()
                .map(|&c| quot[p.idx()].trees[quot[p.idx()].reps[c]].clone())
                .collect();
            for t in tuples(&members, branch as usize) {
                if let Ok(s) = sup_tuple(p, t) {
                    found.extend(find_class(&mut eq, p, &s));
                }
            }
            for q in b.up(p).iter().filter(|&q| q != p) {
                for &c in &inside[q.idx()] {
                    let w = &quot[q.idx()].trees[quot[q.idx()].reps[c]];
                    if let Ok(x) = restrict_tree(space, w, p) {
                        found.extend(find_class(&mut eq, p, &x));
                    }
                }
            }
            for alpha in refinements(space, p, cap)? {
                let choices: Vec<Vec<usize>> =
                    alpha.iter().map(|q| inside[q.idx()].iter().copied().collect()).collect();
                for fam in product(&choices).into_iter().take(MAX_FAMILIES) {
                    let pieces: Vec<Piece> = alpha
                        .iter()
                        .zip(&fam)
                        .flat_map(|(q, &c)| {
                            let qq = &quot[q.idx()];
                            qq.trees[qq.reps[c]].pieces.clone()
                        })
                        .collect();
                    if let Ok(t) = LabelledTree::new(space, branch, p, pieces) {
                        found.extend(find_class(&mut eq, p, &t));
                    }
                }
            }
            for c in found {
                grew |= inside[p.idx()].insert(c);
            }
        }
        if !grew {
            break;
        }
    }
    for p in b.elems() {
        let all = quot[p.idx()].reps.len();
        initial.record(inside[p.idx()].len() == all, || {
            format!(
                "closure reaches {} of {all} classes at {}",
                inside[p.idx()].len(),
                lbl(p)
            )
        });
    }

    Ok(BoSheafReport {
        branch,
        height,
        trees: quot.iter().map(|q| q.trees.len()).sum(),
        classes: quot.iter().map(|q| q.reps.len()).sum(),
        laws: [equivalence, presheaf, separated, sheaf, algebra, monic, initial]
            .into_iter()
            .map(|l| l.check)
            .collect(),
    })
}

fn product(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for c in choices {
        out = out
            .into_iter()
            .flat_map(|p| {
                c.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::DoubleSpace;
    use crate::points::Point;
    use crate::spaces::{seq, TruncatedSpace};
    use std::sync::Arc;

    const CAP: usize = 100_000;

    fn cantor(l: usize) -> TruncatedSpace {
        TruncatedSpace::cantor(l)
    }

    #[test]
    fn one_point_space_is_plain_brouwer_trees() {
        let s = Space::one_point();
        let ts = enumerate_trees(&s, 2, Elem(0), 2, CAP).unwrap();
        assert_eq!(ts.len(), super::super::BrouwerTree::enumerate(2, 2).len());
        let r = bo_sheaf_checks(&s, 2, 2, CAP).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.classes, 5);
    }

    #[test]
    fn cantor_depth_one_laws() {
        let c = cantor(1);
        let r = bo_sheaf_checks(c.space(), 2, 1, CAP).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn cantor_double_laws() {
        let c = Arc::new(cantor(1));
        let d = DoubleSpace::build(c, &[Point::constant(0), Point::constant(1)]).unwrap();
        let r = bo_sheaf_checks(d.space(), 2, 1, CAP).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn star_and_sup_amalgamate() {
        let c = cantor(1);
        let s = c.space();
        let (e, z, o) = (c.root(), c.elem(&seq(&[0])).unwrap(), c.elem(&seq(&[1])).unwrap());
        let left = sup_star(z);
        let right = sup_tuple(o, vec![sup_star(o), sup_star(o)]).unwrap();
        let pieces: Vec<Piece> = [left.clone(), right.clone()]
            .iter()
            .flat_map(|t| t.pieces.clone())
            .collect();
        let glued = LabelledTree::new(s, 2, e, pieces).unwrap();
        assert!(tree_equiv(s, &restrict_tree(s, &glued, z).unwrap(), &left));
        assert!(tree_equiv(s, &restrict_tree(s, &glued, o).unwrap(), &right));
    }

    #[test]
    fn refining_a_piece_keeps_the_class() {
        let c = cantor(1);
        let s = c.space();
        let (e, z, o) = (c.root(), c.elem(&seq(&[0])).unwrap(), c.elem(&seq(&[1])).unwrap());
        let coarse = sup_star(e);
        let fine = LabelledTree::new(
            s,
            2,
            e,
            vec![Piece { at: z, kids: None }, Piece { at: o, kids: None }],
        )
        .unwrap();
        assert_ne!(coarse, fine);
        assert!(tree_equiv(s, &coarse, &fine));
        let t = sup_tuple(e, vec![coarse.clone(), coarse.clone()]).unwrap();
        assert!(!tree_equiv(s, &coarse, &t));
    }

    #[test]
    fn restriction_to_root_and_of_stars() {
        let c = cantor(2);
        let s = c.space();
        let e = c.root();
        let z = c.elem(&seq(&[0])).unwrap();
        let t = sup_tuple(e, vec![sup_star(e), sup_tuple(e, vec![sup_star(e), sup_star(e)]).unwrap()])
            .unwrap();
        assert!(tree_equiv(s, &restrict_tree(s, &t, e).unwrap(), &t));
        let r = restrict_tree(s, &t, z).unwrap();
        assert_eq!(r.root(), z);
        assert_eq!(r.height(), 2);
        assert!(tree_equiv(s, &restrict_tree(s, &sup_star(e), z).unwrap(), &sup_star(z)));
        assert!(restrict_tree(s, &sup_star(z), e).is_err());
    }

    #[test]
    fn malformed_trees_rejected() {
        let c = cantor(1);
        let s = c.space();
        let (e, z) = (c.root(), c.elem(&seq(&[0])).unwrap());
        assert!(LabelledTree::new(s, 2, e, vec![Piece { at: z, kids: None }]).is_err());
        assert!(LabelledTree::new(
            s,
            2,
            e,
            vec![Piece {
                at: e,
                kids: Some(vec![sup_star(z), sup_star(e)])
            }]
        )
        .is_err());
    }
}
