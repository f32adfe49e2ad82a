use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::double::DoubleSpace;
use crate::error::{Error, Result};
use crate::forcing::{AtomTable, Datum, Derivation, ForcingContext, Sort};
use crate::points::leaf_points;
use crate::site::{check_induction_transcript, cover_induction, Fuel, InductionTranscript, Sieve};
use crate::spaces::{Bar, FinSeq, SpaceKind};

use super::{
    cover_pieces, discharge, forced, recheck_premise, recheck_stages, WitnessStage, INSTANCE,
    MONOTONE,
};

const PREMISE: &str = "forall a:SeqN. exists u:FinSeq. Prefix(a,u) & InBar(u)";
const INDUCTIVE: &str =
    "forall u:FinSeq. (forall n:Nat. forall v:FinSeq. Child(v,u,n) -> InBar(v)) -> InBar(u)";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarTranscript {
    pub premise: Derivation,
    pub monotone: Derivation,
    pub inductive: Derivation,
    pub instance: Derivation,
    /// The extracted cover `S` of `⟨⟩` with witnesses.
    pub cover: Vec<(FinSeq, FinSeq)>,
    pub stages: Vec<WitnessStage>,
    /// Induction on covers from `φ` on `S` to `φ(⟨⟩)`.
    pub induction: InductionTranscript,
    pub conclusion: bool,
}

fn context(bar: &Bar) -> Result<(DoubleSpace, ForcingContext)> {
    let inner = Arc::clone(bar.space());
    if inner.kind() != SpaceKind::Baire {
        return Err(Error::Unsupported("the bar rule runs over Baire space".into()));
    }
    let d = DoubleSpace::build(Arc::clone(&inner), &leaf_points(&inner, 1))?;
    let mut atoms = AtomTable::bar(bar);
    atoms.insert(
        "Child",
        vec![Sort::FinSeq, Sort::FinSeq, Sort::Nat],
        |a| match a {
            [Datum::Seq(v), Datum::Seq(u), Datum::Nat(n)] => {
                v.len() == u.len() + 1 && v.starts_with(u) && v[u.len()] == *n
            }
            _ => false,
        },
    );
    let ctx = ForcingContext::on_double(&d, inner.branch(), inner.depth())?.with_atoms(atoms);
    Ok((d, ctx))
}

/// From the bar, monotonicity and inductiveness premises forced over the
/// double of Baire space, concludes `φ(⟨⟩)` through a cover of `⟨⟩` on which
/// `φ` holds and induction on covers.
pub fn bar_rule(bar: &Bar, fuel: Fuel) -> Result<BarTranscript> {
    bar.check_monotone()?;
    bar.check_inductive()?;
    let (d, ctx) = context(bar)?;
    let inner = d.inner();
    let top = d.d(inner.root());
    let premise = forced(&ctx, top, PREMISE, &Vec::new(), fuel)?;
    let monotone = forced(&ctx, top, MONOTONE, &Vec::new(), fuel)?;
    let inductive = forced(&ctx, top, INDUCTIVE, &Vec::new(), fuel)?;
    let instance = forced(&ctx, top, INSTANCE, &Vec::new(), fuel)?;
    let cover = cover_pieces(&d, &instance);
    let mut stages = Vec::new();
    for (v, u) in &cover {
        let stage = discharge(&ctx, &d, v, u, fuel)?;
        if !stage.ok() {
            return Err(Error::PremiseNotForced(format!("stage {v}: {stage:?}")));
        }
        stages.push(stage);
    }
    let gens = cover
        .iter()
        .map(|(v, _)| inner.elem(v))
        .collect::<Result<Vec<_>>>()?;
    let sieve = Sieve::new(inner.basis(), inner.root(), &gens)?;
    let c = inner.children_system();
    let induction = cover_induction(
        &c,
        |e| bar.holds_at(e),
        inner.root(),
        &sieve,
        Fuel(inner.depth() + 1),
    )?;
    Ok(BarTranscript {
        premise,
        monotone,
        inductive,
        instance,
        cover,
        stages,
        induction,
        conclusion: bar.holds(&FinSeq::empty()),
    })
}

impl BarTranscript {
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
        recheck_premise(&ctx, top, INDUCTIVE, &self.inductive, &mut failures);
        recheck_premise(&ctx, top, INSTANCE, &self.instance, &mut failures);
        if cover_pieces(&d, &self.instance) != self.cover {
            failures.push("cover differs from the existential derivation".into());
        }
        if self.stages.len() != self.cover.len()
            || self.stages.iter().zip(&self.cover).any(|(s, (v, _))| &s.v != v)
        {
            failures.push("stages do not follow the cover".into());
        }
        recheck_stages(&ctx, &d, &self.stages, &mut failures);
        let members = match self
            .cover
            .iter()
            .map(|(v, _)| inner.elem(v))
            .collect::<Result<Vec<_>>>()
            .and_then(|g| Ok(Sieve::new(inner.basis(), inner.root(), &g)?))
        {
            Ok(s) => s,
            Err(e) => {
                failures.push(e.to_string());
                return failures;
            }
        };
        let c = inner.children_system();
        if !check_induction_transcript(&c, |e| bar.holds_at(e), &members, &self.induction) {
            failures.push("induction transcript does not recheck".into());
        }
        if self.induction.root != inner.root() || !self.conclusion {
            failures.push("conclusion is not φ(⟨⟩)".into());
        }
        failures
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::TruncatedSpace;

    #[test]
    fn closure_of_long_sequences() {
        let b = Arc::new(TruncatedSpace::baire(2, 3));
        let long = b.inductive_closure(&crate::site::ElemSet::from_elems(
            b.len(),
            b.basis().elems().filter(|&e| b.seq(e).len() >= 2),
        ));
        let bar = Bar::from_members(b.clone(), long, true, true).unwrap();
        let t = bar_rule(&bar, Fuel(1_000_000)).unwrap();
        assert!(t.conclusion);
        assert!(t.recheck(&bar).is_empty());
    }

    #[test]
    fn trivial_bar() {
        let b = Arc::new(TruncatedSpace::baire(2, 2));
        let bar = Bar::new(b, |_| true, true, true).unwrap();
        assert!(bar_rule(&bar, Fuel(100_000)).unwrap().conclusion);
    }

    #[test]
    fn non_inductive_rejected() {
        let b = Arc::new(TruncatedSpace::baire(2, 3));
        let bar = Bar::new(b, |u| u.len() >= 2, true, false).unwrap();
        assert!(matches!(
            bar_rule(&bar, Fuel(100_000)),
            Err(Error::NotInductive(_))
        ));
    }
}
