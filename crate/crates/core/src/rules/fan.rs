use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::double::DoubleSpace;
use crate::error::{Error, Result};
use crate::forcing::{AtomTable, Derivation, ForcingContext};
use crate::points::leaf_points;
use crate::site::{Fuel, Sieve};
use crate::spaces::{Bar, CantorVerdict, FinSeq, SpaceKind};

use super::{
    cover_pieces, discharge, forced, recheck_premise, recheck_stages, WitnessStage, INSTANCE,
    MONOTONE,
};

const PREMISE: &str = "forall a:Seq2. exists u:FinSeq. Prefix(a,u) & InBar(u)";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanTranscript {
    pub premise: Derivation,
    pub monotone: Derivation,
    /// `D(⟨⟩) ⊩ ∃u (π ∈ u ∧ φ(u))`
    pub instance: Derivation,
    /// Generators `v` of the extracted cover with their witnesses `u_v`.
    pub cover: Vec<(FinSeq, FinSeq)>,
    /// Least `q` with `⟨⟩[q]` inside the extracted cover.
    pub cover_depth: usize,
    /// Depth after enlarging until every witness below `D(v)` is pure.
    pub n: usize,
    pub stages: Vec<WitnessStage>,
}

fn context(bar: &Bar) -> Result<(DoubleSpace, ForcingContext)> {
    let inner = Arc::clone(bar.space());
    if inner.kind() != SpaceKind::Cantor {
        return Err(Error::Unsupported("the fan rule runs over Cantor space".into()));
    }
    let depth = inner.depth();
    let d = DoubleSpace::build(Arc::clone(&inner), &leaf_points(&inner, 1))?;
    let ctx = ForcingContext::on_double(&d, 2, depth)?.with_atoms(AtomTable::bar(bar));
    Ok((d, ctx))
}

/// From `∀α ∃u (α ∈ u ∧ φ(u))` and monotonicity of `φ`, both forced over the
/// double of Cantor space, extracts `n` with `φ(v)` for all `v ∈ ⟨⟩[n]`.
pub fn fan_rule(bar: &Bar, fuel: Fuel) -> Result<(usize, FanTranscript)> {
    bar.check_monotone()?;
    let (d, ctx) = context(bar)?;
    let inner = d.inner();
    let top = d.d(inner.root());
    let premise = forced(&ctx, top, PREMISE, &Vec::new(), fuel)?;
    let monotone = forced(&ctx, top, MONOTONE, &Vec::new(), fuel)?;
    let instance = forced(&ctx, top, INSTANCE, &Vec::new(), fuel)?;
    let cover = cover_pieces(&d, &instance);
    let gens = cover
        .iter()
        .map(|(v, _)| inner.elem(v))
        .collect::<Result<Vec<_>>>()?;
    let sieve = Sieve::new(inner.basis(), inner.root(), &gens)?;
    let cover_depth = match inner.cantor_cover_test(&FinSeq::empty(), &sieve)? {
        CantorVerdict::Covered(q) => q,
        CantorVerdict::NotCovered { .. } => {
            return Err(Error::PremiseNotForced(
                "the extracted family does not cover ⟨⟩".into(),
            ))
        }
    };
    let witness_above = |v: &FinSeq| cover.iter().find(|(g, _)| v.extends(g)).map(|(_, u)| u.clone());
    let mut n = cover_depth;
    while !inner.level(n).iter().all(|v| witness_above(v).is_some()) {
        n += 1;
        if n > inner.depth() {
            return Err(Error::PremiseNotForced("no depth with pure witnesses".into()));
        }
    }
    let mut stages = Vec::new();
    for v in inner.level(n) {
        let u = witness_above(v).expect("checked above");
        let stage = discharge(&ctx, &d, v, &u, fuel)?;
        if !stage.ok() {
            return Err(Error::PremiseNotForced(format!("stage {v}: {stage:?}")));
        }
        stages.push(stage);
    }
    Ok((
        n,
        FanTranscript {
            premise,
            monotone,
            instance,
            cover,
            cover_depth,
            n,
            stages,
        },
    ))
}

impl FanTranscript {
    /// Rechecks every stage against `bar`; returns the failing ones.
    pub fn recheck(&self, bar: &Bar) -> Vec<String> {
        let mut failures = Vec::new();
        let (d, ctx) = match context(bar) {
            Ok(x) => x,
            Err(e) => return vec![e.to_string()],
        };
        let inner = d.inner();
        let top = d.d(inner.root());
        recheck_premise(&ctx, top, PREMISE, &self.premise, &mut failures);
        recheck_premise(&ctx, top, MONOTONE, &self.monotone, &mut failures);
        recheck_premise(&ctx, top, super::INSTANCE, &self.instance, &mut failures);
        if cover_pieces(&d, &self.instance) != self.cover {
            failures.push("cover differs from the existential derivation".into());
        }
        let covered_at = |q: usize| {
            inner
                .level(q)
                .iter()
                .all(|v| self.cover.iter().any(|(g, _)| v.extends(g)))
        };
        if !covered_at(self.cover_depth) || (0..self.cover_depth).any(covered_at) {
            failures.push(format!("cover depth {} is not least", self.cover_depth));
        }
        if self.n < self.cover_depth || self.stages.len() != inner.level(self.n).len() {
            failures.push("stages do not enumerate ⟨⟩[n]".into());
        }
        for (s, v) in self.stages.iter().zip(inner.level(self.n)) {
            if &s.v != v {
                failures.push(format!("stage for {} out of order", s.v));
            }
        }
        recheck_stages(&ctx, &d, &self.stages, &mut failures);
        failures
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::TruncatedSpace;

    fn run(depth: usize, pred: impl Fn(&FinSeq) -> bool) -> (usize, FanTranscript, Bar) {
        let c = Arc::new(TruncatedSpace::cantor(depth));
        let bar = Bar::new(c, pred, true, false).unwrap();
        let (n, t) = fan_rule(&bar, Fuel(1_000_000)).unwrap();
        (n, t, bar)
    }

    #[test]
    fn uniform_depth_three() {
        let (n, t, bar) = run(4, |u| u.len() >= 3);
        assert_eq!(n, 3);
        assert!(t.recheck(&bar).is_empty());
    }

    #[test]
    fn contains_a_one_or_long() {
        let (n, t, bar) = run(4, |u| u.0.contains(&1) || u.len() >= 3);
        assert_eq!(n, 3);
        assert!(t.recheck(&bar).is_empty());
    }

    #[test]
    fn trivial_bar() {
        let (n, _, _) = run(3, |_| true);
        assert_eq!(n, 0);
    }

    #[test]
    fn not_a_bar() {
        let c = Arc::new(TruncatedSpace::cantor(3));
        let bar = Bar::new(c, |u| u.0.first() == Some(&0), true, false).unwrap();
        assert!(matches!(
            fan_rule(&bar, Fuel(1_000_000)),
            Err(Error::PremiseNotForced(_))
        ));
    }

    #[test]
    fn tampered_transcript_fails_recheck() {
        let (_, mut t, bar) = run(3, |u| u.len() >= 2);
        t.stages[0].witness = FinSeq(vec![1, 1]);
        assert!(!t.recheck(&bar).is_empty());
    }
}
