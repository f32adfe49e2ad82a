//! Countable disjoint refinements of covers and the amalgamation of choices
//! made on them.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::points::COVER_CAP;
use crate::sheaves::{LocalSection, SeqSection};
use crate::site::{CoverRule, Elem, ElemSet, SiteError, Space};

fn pairwise_disjoint(space: &Space, xs: &[Elem]) -> Option<(Elem, Elem)> {
    let b = space.basis();
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[..i] {
            if !b.disjoint(x, y) {
                return Some((y, x));
            }
        }
    }
    None
}

/// A finite pairwise disjoint `α ⊆ S` with `↓α` covering `p`.
///
/// The generators of `S` are returned when already disjoint. Otherwise Cantor
/// uses `p[q]` for the least sufficient `q`, the double lifts the inner
/// refinement and keeps any untouched singletons, and other spaces search
/// their basic covers.
pub fn cc_refine(space: &Space, p: Elem, s: &ElemSet) -> Result<Vec<Elem>> {
    let b = space.basis();
    b.check(p)?;
    let s = b.down_closure(&s.intersection(b.down(p)));
    if !space.covered_by(p, &s) {
        return Err(Error::NotACover(b.label(p).to_string()));
    }
    let gens = b.maximal(&s);
    if pairwise_disjoint(space, &gens).is_none() {
        return Ok(gens);
    }
    match space.rule() {
        CoverRule::Uniform { brackets } => {
            let (_, br) = brackets[p.idx()]
                .iter()
                .find(|(_, br)| br.is_subset(&s))
                .expect("a uniform cover contains some bracket");
            Ok(br.to_vec())
        }
        CoverRule::Double { inner, inner_len } => {
            let proj = ElemSet::from_elems(*inner_len, s.iter().filter(|e| e.idx() < *inner_len));
            let mut alpha = cc_refine(inner, p, &proj)?;
            let lifted = b.downset(alpha.iter());
            alpha.extend(
                s.iter()
                    .filter(|e| e.idx() >= *inner_len && !lifted.contains(*e)),
            );
            Ok(alpha)
        }
        _ => {
            let covers = space
                .minimal_covers(p, COVER_CAP)
                .ok_or_else(|| Error::NoRefinementFound(b.label(p).to_string()))?;
            covers
                .iter()
                .filter(|c| c.is_subset(&s))
                .map(|c| b.maximal(c))
                .find(|g| pairwise_disjoint(space, g).is_none())
                .ok_or_else(|| Error::NoRefinementFound(b.label(p).to_string()))
        }
    }
}

pub(crate) fn check_refinement(space: &Space, p: Elem, at: &[Elem]) -> Result<()> {
    let b = space.basis();
    for &g in at {
        if !b.leq(g, p) {
            return Err(SiteError::NotBelowRoot {
                elem: b.label(g).to_string(),
                root: b.label(p).to_string(),
            }
            .into());
        }
    }
    if let Some((x, y)) = pairwise_disjoint(space, at) {
        return Err(Error::NotDisjoint(
            b.label(x).to_string(),
            b.label(y).to_string(),
        ));
    }
    if !space.covered_by(p, &b.downset(at.iter())) {
        return Err(Error::NotCovering(b.label(p).to_string()));
    }
    Ok(())
}

/// Glues sections chosen on a disjoint refinement of `p` into the unique `x`
/// with `x↾g = x_g` for each piece.
pub fn choice_amalgamation<V: Clone + Ord>(
    space: &Space,
    p: Elem,
    pieces: &[(Elem, LocalSection<V>)],
) -> Result<LocalSection<V>> {
    let at: Vec<Elem> = pieces.iter().map(|(g, _)| *g).collect();
    check_refinement(space, p, &at)?;
    let b = space.basis();
    let mut groups: BTreeMap<V, ElemSet> = BTreeMap::new();
    for (g, x) in pieces {
        if x.root() != *g {
            return Err(Error::Input(format!(
                "section chosen at {} lives at another stage",
                b.label(*g)
            )));
        }
        for r in x.domain().iter() {
            let v = x.value(r).expect("in domain").clone();
            groups
                .entry(v)
                .or_insert_with(|| b.empty_set())
                .insert(r);
        }
    }
    let groups: Vec<(V, ElemSet)> = groups.into_iter().collect();
    Ok(LocalSection::from_pieces(space, p, &groups))
}

/// Coordinatewise [`choice_amalgamation`] for sequence sections.
pub fn choice_amalgamation_seq(
    space: &Space,
    p: Elem,
    pieces: &[(Elem, SeqSection)],
) -> Result<SeqSection> {
    let at: Vec<Elem> = pieces.iter().map(|(g, _)| *g).collect();
    check_refinement(space, p, &at)?;
    let coords = pieces.first().map(|(_, x)| x.len()).unwrap_or(0);
    if pieces.iter().any(|(_, x)| x.len() != coords) {
        return Err(Error::Input("sections of different lengths".into()));
    }
    let out = (0..coords)
        .map(|i| {
            let fam: Vec<(Elem, LocalSection<u32>)> = pieces
                .iter()
                .map(|(g, x)| (*g, x.coords()[i].clone()))
                .collect();
            choice_amalgamation(space, p, &fam)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SeqSection::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{seq, TruncatedSpace};

    #[test]
    fn already_disjoint_cover_is_kept() {
        let c = TruncatedSpace::cantor(3);
        let s = c
            .sieve(&seq(&[]), &[seq(&[0]), seq(&[1, 0]), seq(&[1, 1])])
            .unwrap();
        let alpha = cc_refine(c.space(), c.root(), s.members()).unwrap();
        let want: Vec<Elem> = [seq(&[0]), seq(&[1, 0]), seq(&[1, 1])]
            .iter()
            .map(|u| c.elem(u).unwrap())
            .collect();
        assert_eq!(alpha, want);
    }

    #[test]
    fn maximal_sieve_refines_to_root() {
        let c = TruncatedSpace::cantor(2);
        let u = c.elem_of(&[1]).unwrap();
        let alpha = cc_refine(c.space(), u, c.basis().down(u)).unwrap();
        assert_eq!(alpha, vec![u]);
    }

    #[test]
    fn tree_generators_are_disjoint() {
        let c = TruncatedSpace::cantor(2);
        let s = c
            .sieve(&seq(&[]), &[seq(&[0]), seq(&[0, 1]), seq(&[1, 0]), seq(&[1, 1])])
            .unwrap();
        // ⟨0⟩ absorbs ⟨0,1⟩; incomparable sequences never overlap.
        assert_eq!(cc_refine(c.space(), c.root(), s.members()).unwrap().len(), 3);
        let not_cover = c.sieve(&seq(&[]), &[seq(&[0])]).unwrap();
        assert!(matches!(
            cc_refine(c.space(), c.root(), not_cover.members()),
            Err(Error::NotACover(_))
        ));
    }

    #[test]
    fn amalgamation_of_two_choices() {
        let c = TruncatedSpace::cantor(3);
        let l = c.elem_of(&[0]).unwrap();
        let r = c.elem_of(&[1]).unwrap();
        let x = choice_amalgamation(
            c.space(),
            c.root(),
            &[
                (l, LocalSection::pure(c.space(), l, 5u32)),
                (r, LocalSection::pure(c.space(), r, 7)),
            ],
        )
        .unwrap();
        let want = LocalSection::from_family(c.space(), c.root(), &[(l, 5u32), (r, 7)]).unwrap();
        assert_eq!(x, want);
        assert_eq!(x.restrict(c.space(), l), LocalSection::pure(c.space(), l, 5));
    }

    #[test]
    fn single_piece_returns_the_witness() {
        let c = TruncatedSpace::cantor(2);
        let mixed = LocalSection::from_family(
            c.space(),
            c.root(),
            &[(c.elem_of(&[0]).unwrap(), 1u32), (c.elem_of(&[1]).unwrap(), 0)],
        )
        .unwrap();
        let x = choice_amalgamation(c.space(), c.root(), &[(c.root(), mixed.clone())]).unwrap();
        assert_eq!(x, mixed);
    }

    #[test]
    fn overlapping_family_rejected() {
        let c = TruncatedSpace::cantor(2);
        let l = c.elem_of(&[0]).unwrap();
        let ll = c.elem_of(&[0, 0]).unwrap();
        let r = c.elem_of(&[1]).unwrap();
        let res = choice_amalgamation(
            c.space(),
            c.root(),
            &[
                (l, LocalSection::pure(c.space(), l, 1u32)),
                (ll, LocalSection::pure(c.space(), ll, 2)),
                (r, LocalSection::pure(c.space(), r, 3)),
            ],
        );
        assert!(matches!(res, Err(Error::NotDisjoint(..))));
    }
}
