use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::double::DoubleSpace;
use crate::error::{Error, Result};
use crate::forcing::{
    check_derivation, choice_amalgamation_seq, force, AtomTable, Datum, Derivation, Env,
    ForceVerdict, ForcingContext, Sort, Value,
};
use crate::maps::MapVerdict;
use crate::points::{leaf_points, point_members, Point};
use crate::sheaves::{LocalSection, SeqSection};
use crate::site::{Elem, ElemSet, Fuel};
use crate::spaces::TruncatedSpace;

use super::formula;

const EXISTS_UNIQUE: &str = "exists b:SeqN. Rel(b) & (forall c:SeqN. Rel(c) -> Eq(b,c))";

type Rel = Arc<dyn Fn(&Point, &[u32]) -> bool + Send + Sync>;

/// A decidable relation `φ(α, β)` between points of Baire space and their
/// images truncated to `depth` entries.
#[derive(Clone)]
pub struct RelationTable {
    name: String,
    branch: u32,
    depth: usize,
    rel: Rel,
}

impl fmt::Debug for RelationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RelationTable({}, B={}, L={})", self.name, self.branch, self.depth)
    }
}

impl RelationTable {
    pub fn new(
        name: &str,
        branch: u32,
        depth: usize,
        rel: impl Fn(&Point, &[u32]) -> bool + Send + Sync + 'static,
    ) -> Self {
        RelationTable {
            name: name.to_string(),
            branch,
            depth,
            rel: Arc::new(rel),
        }
    }

    /// The graph of `f`, which must return `depth` entries below `branch`.
    pub fn from_function(
        name: &str,
        branch: u32,
        depth: usize,
        f: impl Fn(&Point) -> Vec<u32> + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, branch, depth, move |a, b| f(a) == b)
    }

    /// `β(n) = α(n+1)`
    pub fn shift(branch: u32, depth: usize) -> Self {
        Self::from_function("shift", branch, depth, move |a| {
            (1..=depth).map(|i| a.at(i)).collect()
        })
    }

    pub fn identity(branch: u32, depth: usize) -> Self {
        Self::from_function("identity", branch, depth, move |a| a.initial(depth).0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn branch(&self) -> u32 {
        self.branch
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn holds(&self, alpha: &Point, beta: &[u32]) -> bool {
        (self.rel)(alpha, beta)
    }

    /// Every `β ∈ B^L` related to `α`, in lexicographic order.
    pub fn solutions(&self, alpha: &Point) -> Vec<Vec<u32>> {
        let ts = TruncatedSpace::baire(self.branch, self.depth);
        ts.level(self.depth)
            .iter()
            .filter(|b| self.holds(alpha, &b.0))
            .map(|b| b.0.clone())
            .collect()
    }
}

/// What the pipeline computed at one enumerated point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointOutcome {
    pub point: Point,
    /// `pt(ρ∘μ)(α)`
    pub f: Vec<u32>,
    /// `ρ` read at `{α}`, i.e. `pt(ρ∘ν)(α)`.
    pub at_singleton: Vec<u32>,
    /// The table's related `β`, found by search.
    pub brute: Vec<Vec<u32>>,
    pub rel_holds: bool,
    /// `modulus[k]`: least `m` such that `ρ(j)` for `j < k` is determined on `D(α|m)`.
    pub modulus: Vec<usize>,
    /// Every enumerated point sharing `α|m` shares `f(α)|k`.
    pub modulus_valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuityTranscript {
    pub table: String,
    pub branch: u32,
    pub depth: usize,
    /// `D(⟨⟩) ⊩ ∃!β φ(π, β)`
    pub existence: Derivation,
    /// Cover pieces of the existential with the section chosen on each.
    pub pieces: Vec<(String, String)>,
    /// The morphism conditions for `ρ` as a map into truncated Baire space.
    pub map: MapVerdict,
    pub points: Vec<PointOutcome>,
}

impl ContinuityTranscript {
    pub fn f(&self, alpha: &Point) -> Option<&[u32]> {
        let a = alpha.canonical();
        self.points.iter().find(|o| o.point == a).map(|o| o.f.as_slice())
    }

    pub fn modulus(&self, alpha: &Point, k: usize) -> Option<usize> {
        let a = alpha.canonical();
        self.points
            .iter()
            .find(|o| o.point == a)
            .and_then(|o| o.modulus.get(k).copied())
    }

    /// Reruns the pipeline, checks the existence derivation against a fresh
    /// context, and re-validates every point independently.
    pub fn recheck(&self, table: &RelationTable, fuel: Fuel) -> Vec<String> {
        let mut failures = Vec::new();
        let setup = match Setup::build(table) {
            Ok(s) => s,
            Err(e) => return vec![e.to_string()],
        };
        if !check_derivation(
            &setup.ctx,
            setup.top(),
            &formula(EXISTS_UNIQUE),
            &Env::new(),
            &self.existence,
        ) {
            failures.push("existence derivation does not recheck".into());
        }
        match continuity_rule(table, fuel) {
            Ok(again) if again == *self => {}
            Ok(_) => failures.push("pipeline output differs".into()),
            Err(e) => failures.push(e.to_string()),
        }
        if !self.map.holds() {
            failures.push(format!("ρ is not a morphism: {:?}", self.map));
        }
        for o in &self.points {
            let brute = table.solutions(&o.point);
            if brute.len() != 1 || brute[0] != o.f || !table.holds(&o.point, &o.f) {
                failures.push(format!("f disagrees with the table at {}", o.point));
            }
            if o.f != o.at_singleton {
                failures.push(format!("ρμ and ρν differ at {}", o.point));
            }
            for (k, &m) in o.modulus.iter().enumerate() {
                let same = self
                    .points
                    .iter()
                    .filter(|p| p.point.initial(m) == o.point.initial(m))
                    .all(|p| p.f[..k] == o.f[..k]);
                if !same {
                    failures.push(format!("modulus {m} for k={k} fails at {}", o.point));
                }
            }
        }
        failures
    }
}

struct Setup {
    d: DoubleSpace,
    ctx: ForcingContext,
    /// Per point, the table's solutions.
    brute: Vec<Vec<Vec<u32>>>,
}

impl Setup {
    fn top(&self) -> Elem {
        self.d.d(self.d.inner().root())
    }

    /// Source `Baire(B, L+1)` so shifts are determined at the leaves; one
    /// point `w·t^ω` per leaf `w` and tail `t`. Candidate sections `ρ` are the
    /// first and last solution at each point, glued wherever the points below
    /// a basic open agree.
    fn build(table: &RelationTable) -> Result<Setup> {
        if table.branch < 1 || table.depth < 1 {
            return Err(Error::Input("continuity tables need B ≥ 1 and L ≥ 1".into()));
        }
        let inner = Arc::new(TruncatedSpace::baire(table.branch, table.depth + 1));
        let points = leaf_points(&inner, table.branch);
        let d = DoubleSpace::build(Arc::clone(&inner), &points)?;
        let brute: Vec<Vec<Vec<u32>>> = points.iter().map(|p| table.solutions(p)).collect();
        if let Some(k) = brute.iter().position(|s| s.is_empty()) {
            return Err(Error::NotForced(format!("no β is related to {}", points[k])));
        }
        let mut ctx = ForcingContext::on_double(&d, table.branch, table.depth)?;
        let firsts: Vec<Vec<u32>> = brute.iter().map(|s| s[0].clone()).collect();
        let lasts: Vec<Vec<u32>> = brute.iter().map(|s| s[s.len() - 1].clone()).collect();
        let mut candidates = vec![("rho", firsts)];
        if lasts != candidates[0].1 {
            candidates.push(("rho'", lasts));
        }
        let mut first_gap = None;
        for (label, choice) in &candidates {
            match glue(&d, choice, table.depth) {
                Ok(s) => {
                    ctx.add_section(label, s);
                }
                Err(gap) => {
                    first_gap.get_or_insert(gap);
                }
            }
        }
        if ctx.sections().len() == 1 + d.points().len() {
            return Err(Error::NoModulus(first_gap.unwrap_or_default()));
        }
        let rel = Arc::clone(&table.rel);
        let pts = points.clone();
        let mut atoms = AtomTable::new();
        atoms.insert_pointwise("Rel", vec![Sort::SeqN], move |k, data| match data {
            [Datum::Seq(b)] => rel(&pts[k], b),
            _ => false,
        });
        let ctx = ctx.with_atoms(atoms);
        Ok(Setup { d, ctx, brute })
    }
}

/// The section taking `choice[k]` at `{q_k}` and each common value on the
/// `D(w)` whose points agree. Fails with a witness when some coordinate is
/// not determined on a cover of the top.
fn glue(d: &DoubleSpace, choice: &[Vec<u32>], depth: usize) -> std::result::Result<SeqSection, String> {
    let inner = d.inner();
    let space = d.space();
    let top = d.d(inner.root());
    let mut coords = Vec::with_capacity(depth);
    for i in 0..depth {
        let mut groups: BTreeMap<u32, ElemSet> = BTreeMap::new();
        for (k, b) in choice.iter().enumerate() {
            groups
                .entry(b[i])
                .or_insert_with(|| space.basis().empty_set())
                .insert(d.singleton(k));
        }
        for w in inner.basis().elems() {
            let mut vals = d
                .point_sets()
                .iter()
                .zip(choice)
                .filter(|(ps, _)| ps.contains(w))
                .map(|(_, b)| b[i]);
            if let Some(v) = vals.next() {
                if vals.all(|x| x == v) {
                    groups.get_mut(&v).expect("seen at a point").insert(d.d(w));
                }
            }
        }
        let pieces: Vec<(u32, ElemSet)> = groups.into_iter().collect();
        let s = LocalSection::from_pieces(space, top, &pieces);
        if !s.domain_covers(space) {
            let w = inner
                .level(inner.depth())
                .iter()
                .find(|w| inner.elem(w).is_ok_and(|e| !s.is_defined(d.d(e))))
                .map(|w| w.to_string())
                .unwrap_or_default();
            return Err(format!("β({i}) is not determined on D({w})"));
        }
        coords.push(s);
    }
    Ok(SeqSection::new(coords))
}

fn longest(ts: &TruncatedSpace, s: &ElemSet) -> Vec<u32> {
    s.iter()
        .map(|e| ts.seq(e))
        .max_by_key(|u| u.len())
        .map(|u| u.0.clone())
        .unwrap_or_default()
}

/// Forces `∃!β φ(π, β)` at `D(⟨⟩)` of the double of Baire space, glues the
/// witnesses into the unique section `ρ`, and reads `f = pt(ρ∘μ)` with a
/// modulus of continuity at every enumerated point.
pub fn continuity_rule(table: &RelationTable, fuel: Fuel) -> Result<ContinuityTranscript> {
    let setup = Setup::build(table)?;
    let Setup { d, ctx, brute } = &setup;
    let top = setup.top();
    let space = d.space();
    let existence = match force(ctx, top, &formula(EXISTS_UNIQUE), &Env::new(), fuel)? {
        ForceVerdict::Holds(der) => der,
        ForceVerdict::FailsWithinFuel { exhausted } => {
            let rel = formula("Rel(b)");
            let mut related: Vec<usize> = Vec::new();
            for i in 0..ctx.sections().len() {
                let env: Env = vec![("b".to_string(), Value::Section(i))];
                if force(ctx, top, &rel, &env, fuel)?.holds()
                    && related.iter().all(|&j| ctx.sections()[j] != ctx.sections()[i])
                {
                    related.push(i);
                }
            }
            return Err(match related[..] {
                [a, b, ..] => Error::NotUnique(
                    ctx.section_label(a).to_string(),
                    ctx.section_label(b).to_string(),
                ),
                _ => Error::NotForced(format!(
                    "∃!β {}({}) at D(⟨⟩){}",
                    table.name,
                    "π, β",
                    if exhausted { " (fuel exhausted)" } else { "" }
                )),
            });
        }
    };
    let Derivation::Exists { pieces, .. } = &existence else {
        return Err(Error::NotForced("existence derivation has no witnesses".into()));
    };
    let mut chosen = Vec::new();
    let mut labels = Vec::new();
    for p in pieces {
        let Value::Section(i) = p.witness else {
            return Err(Error::Sort("witness is not a section".into()));
        };
        chosen.push((p.at, ctx.sections()[i].restrict(space, p.at)));
        labels.push((
            space.basis().label(p.at).to_string(),
            ctx.section_label(i).to_string(),
        ));
    }
    let rho = choice_amalgamation_seq(space, top, &chosen)?;
    let target = TruncatedSpace::baire(table.branch, table.depth);
    let rho_map = rho.to_map(d.space_arc(), &target);
    let map = rho_map.check();
    let via_mu = rho_map.compose(&d.mu())?;
    let inner = d.inner();
    let mut outcomes = Vec::with_capacity(d.points().len());
    for (k, alpha) in d.points().iter().enumerate() {
        let f = longest(&target, &via_mu.pt_functor(&point_members(inner, alpha)?));
        let at_singleton = longest(&target, &rho_map.pt_functor(&d.singleton_point(k)));
        let modulus = (0..=table.depth)
            .map(|kk| {
                (0..=inner.depth())
                    .find(|&m| {
                        let e = inner.elem(&alpha.initial(m)).expect("within depth");
                        (0..kk).all(|j| rho.value(j, d.d(e)).is_some())
                    })
                    .ok_or_else(|| {
                        Error::NoModulus(format!("β({}) at {alpha} is not determined", kk - 1))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        outcomes.push(PointOutcome {
            point: alpha.clone(),
            rel_holds: table.holds(alpha, &f),
            f,
            at_singleton,
            brute: brute[k].clone(),
            modulus,
            modulus_valid: false,
        });
    }
    let fs: Vec<(Point, Vec<u32>)> = outcomes.iter().map(|o| (o.point.clone(), o.f.clone())).collect();
    for o in &mut outcomes {
        o.modulus_valid = o.modulus.iter().enumerate().all(|(k, &m)| {
            fs.iter()
                .filter(|(p, _)| p.initial(m) == o.point.initial(m))
                .all(|(_, g)| g.len() >= k && o.f.len() >= k && g[..k] == o.f[..k])
        });
    }
    Ok(ContinuityTranscript {
        table: table.name.clone(),
        branch: table.branch,
        depth: table.depth,
        existence,
        pieces: labels,
        map,
        points: outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FUEL: Fuel = Fuel(10_000_000);

    #[test]
    fn shift_has_modulus_k_plus_one() {
        let t = RelationTable::shift(2, 2);
        let out = continuity_rule(&t, FUEL).unwrap();
        for o in &out.points {
            assert_eq!(o.f, vec![o.point.at(1), o.point.at(2)]);
            assert!(o.rel_holds && o.modulus_valid);
            assert_eq!(o.modulus[1..], [2, 3]);
        }
        assert!(out.map.holds());
        assert!(out.recheck(&t, FUEL).is_empty());
    }

    #[test]
    fn identity_has_modulus_k() {
        let t = RelationTable::identity(2, 2);
        let out = continuity_rule(&t, FUEL).unwrap();
        for o in &out.points {
            assert_eq!(o.f, o.point.initial(2).0);
            assert_eq!(o.modulus, vec![0, 1, 2]);
        }
    }

    #[test]
    fn tail_dependence_has_no_modulus() {
        let t = RelationTable::from_function("tail", 2, 1, |a| vec![a.tail]);
        assert!(matches!(continuity_rule(&t, FUEL), Err(Error::NoModulus(_))));
    }

    #[test]
    fn two_solutions_are_not_unique() {
        let t = RelationTable::new("any", 2, 1, |_, _| true);
        assert!(matches!(continuity_rule(&t, FUEL), Err(Error::NotUnique(_, _))));
    }

    #[test]
    fn empty_relation_is_not_forced() {
        let t = RelationTable::new("none", 2, 1, |a, b| a.at(0) == 0 && b[0] == 0);
        assert!(matches!(continuity_rule(&t, FUEL), Err(Error::NotForced(_))));
    }
}
