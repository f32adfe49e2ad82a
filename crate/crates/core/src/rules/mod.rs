//! Extraction pipelines for the fan, bar induction, and continuity rules,
//! replayed over the double of a truncated space.

mod bar;
mod continuity;
mod fan;

pub use bar::{bar_rule, BarTranscript};
pub use continuity::{continuity_rule, ContinuityTranscript, PointOutcome, RelationTable};
pub use fan::{fan_rule, FanTranscript};

use serde::{Deserialize, Serialize};

use crate::double::DoubleSpace;
use crate::error::{Error, Result};
use crate::forcing::{
    check_derivation, classical_eval, force, parse_formula, Derivation, Env, ForceVerdict,
    ForcingContext, Formula, Value,
};
use crate::site::{Elem, Fuel};
use crate::spaces::FinSeq;

/// `φ(u) ≡ InBar(u)` premises, with `a` ranging over sequence sections.
pub(crate) const MONOTONE: &str = "forall u:FinSeq. forall v:FinSeq. Leq(v,u) & InBar(u) -> InBar(v)";
pub(crate) const INSTANCE: &str = "exists u:FinSeq. Prefix(pi,u) & InBar(u)";
const PREFIX: &str = "Prefix(pi,u)";
const AT_U: &str = "InBar(u)";
const AT_V: &str = "InBar(v)";
const MONOTONE_STEP: &str = "Leq(v,u) & InBar(u) -> InBar(v)";

pub(crate) fn formula(text: &str) -> Formula {
    parse_formula(text).expect("built-in formula parses")
}

/// Forces a premise at `p`, returning its derivation.
pub(crate) fn forced(
    ctx: &ForcingContext,
    p: Elem,
    text: &str,
    env: &Env,
    fuel: Fuel,
) -> Result<Derivation> {
    match force(ctx, p, &formula(text), env, fuel)? {
        ForceVerdict::Holds(d) => Ok(d),
        ForceVerdict::FailsWithinFuel { exhausted } => Err(Error::PremiseNotForced(format!(
            "{text} at {}{}",
            ctx.space().basis().label(p),
            if exhausted { " (fuel exhausted)" } else { "" }
        ))),
    }
}

/// The pieces `(D(v), u_v)` of an existential derivation at the top.
pub(crate) fn cover_pieces(d: &DoubleSpace, der: &Derivation) -> Vec<(FinSeq, FinSeq)> {
    let Derivation::Exists { pieces, .. } = der else {
        return Vec::new();
    };
    pieces
        .iter()
        .filter_map(|p| {
            let v = d.as_d(p.at)?;
            match &p.witness {
                Value::Seq(u) => Some((d.inner().seq(v).clone(), u.clone())),
                _ => None,
            }
        })
        .collect()
}

/// From `D(v) ⊩ π ∈ u ∧ φ(u)` to `φ(v)`, one recorded step at a time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStage {
    pub v: FinSeq,
    pub witness: FinSeq,
    /// `D(v) ⊩ π ∈ u_v`
    pub prefix_forced: bool,
    /// `v ≤ u_v`
    pub extends: bool,
    /// `D(v) ⊩ φ(u_v)`
    pub witness_forced: bool,
    /// `D(v) ⊩ v ≤ u_v ∧ φ(u_v) → φ(v)`
    pub monotone_forced: bool,
    /// `D(v) ⊩ φ(v)`
    pub conclusion_forced: bool,
    /// The point `α ∈ v` used for the discharge.
    pub point: String,
    /// `{α} ⊩ φ(v)`
    pub minimal_forced: bool,
    /// `φ(v)` by direct evaluation at `α`.
    pub holds: bool,
}

impl WitnessStage {
    pub fn ok(&self) -> bool {
        self.prefix_forced
            && self.extends
            && self.witness_forced
            && self.monotone_forced
            && self.conclusion_forced
            && self.minimal_forced
            && self.holds
    }
}

pub(crate) fn discharge(
    ctx: &ForcingContext,
    d: &DoubleSpace,
    v: &FinSeq,
    u: &FinSeq,
    fuel: Fuel,
) -> Result<WitnessStage> {
    let dv = d.d_of(v)?;
    let env: Env = vec![
        ("u".to_string(), Value::Seq(u.clone())),
        ("v".to_string(), Value::Seq(v.clone())),
    ];
    let holds_at = |p: Elem, text: &str| -> Result<bool> {
        Ok(force(ctx, p, &formula(text), &env, fuel)?.holds())
    };
    let k = d
        .points()
        .iter()
        .position(|q| q.passes(v))
        .ok_or_else(|| Error::Input(format!("no enumerated point passes {v}")))?;
    Ok(WitnessStage {
        v: v.clone(),
        witness: u.clone(),
        prefix_forced: holds_at(dv, PREFIX)?,
        extends: v.extends(u),
        witness_forced: holds_at(dv, AT_U)?,
        monotone_forced: holds_at(dv, MONOTONE_STEP)?,
        conclusion_forced: holds_at(dv, AT_V)?,
        point: d.points()[k].label(),
        minimal_forced: holds_at(d.singleton(k), AT_V)?,
        holds: classical_eval(ctx, k, &formula(AT_V), &env)?,
    })
}

/// Rechecks a recorded premise derivation; pushes a failure line otherwise.
pub(crate) fn recheck_premise(
    ctx: &ForcingContext,
    p: Elem,
    text: &str,
    der: &Derivation,
    failures: &mut Vec<String>,
) {
    if !check_derivation(ctx, p, &formula(text), &Env::new(), der) {
        failures.push(format!("derivation of {text} does not recheck"));
    }
}

/// Recomputes each stage and reports those that differ or fail.
pub(crate) fn recheck_stages(
    ctx: &ForcingContext,
    d: &DoubleSpace,
    stages: &[WitnessStage],
    failures: &mut Vec<String>,
) {
    for s in stages {
        match discharge(ctx, d, &s.v, &s.witness, Fuel(usize::MAX)) {
            Ok(again) if again == *s && s.ok() => {}
            Ok(_) => failures.push(format!("stage {} does not recheck", s.v)),
            Err(e) => failures.push(format!("stage {}: {e}", s.v)),
        }
    }
}
