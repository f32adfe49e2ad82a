//! Seeded invariant suites. Each returns a [`Report`] whose verdicts name the
//! property checked and whose witnesses list counterexamples, so equal seeds
//! give byte-identical reports.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::brouwer::{alt_baire_equiv_check, bo_sheaf_checks, k_map, BrouwerTree};
use crate::double::DoubleSpace;
use crate::error::{Error, Result};
use crate::forcing::{
    cc_refine, check_derivation, check_refinement, choice_amalgamation, classical_eval, force,
    forced_set, Env, ForceVerdict, ForcingContext, Formula, Sort, Term,
};
use crate::io::{Report, RelationDoc};
use crate::points::Point;
use crate::rules::{bar_rule, continuity_rule, fan_rule, RelationTable};
use crate::sheaves::{
    all_covers, finseq_sheaf, global_sections_vs_maps, nat_sheaf, pure_density_check,
    sheaf_check, sheaf_check_covering_system, two_sheaf, FinitePresheaf, LocalSection, LocalSheaf,
    PurityVerdict, SeqSheaf,
};
use crate::site::{
    check_topology, generate_topology, Basis, CoveringSystem, Elem, ElemSet, Fuel,
    InductiveDefinition, Rule, Space,
};
use crate::spaces::{Bar, CantorVerdict, FinSeq, TruncatedSpace};

/// Suite names accepted by [`run_suite`], in report order.
pub const SUITES: [&str; 11] = [
    "topology",
    "cantor",
    "forcing",
    "truth",
    "fan",
    "bar",
    "continuity",
    "sheaves",
    "cc",
    "brouwer",
    "compactness",
];

const FUEL: Fuel = Fuel(50_000_000);
const MAX_WITNESSES: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
}

/// Runs one named suite; `samples` overrides its default instance count.
pub fn run_suite(name: &str, seed: u64, samples: Option<usize>) -> Result<Report> {
    let n = samples.unwrap_or_else(|| default_samples(name));
    let config = SuiteConfig {
        suite: name.to_string(),
        seed,
        samples: n,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::new("check", &config);
    match name {
        "topology" => topology(&mut r, &mut rng, n)?,
        "cantor" => cantor(&mut r)?,
        "forcing" => forcing_lemma(&mut r, &mut rng, n)?,
        "truth" => minimal_truth(&mut r, &mut rng, n)?,
        "fan" => fan(&mut r, &mut rng, n)?,
        "bar" => bar(&mut r, &mut rng, n)?,
        "continuity" => continuity(&mut r, &mut rng, n)?,
        "sheaves" => sheaves(&mut r)?,
        "cc" => cc(&mut r, &mut rng, n)?,
        "brouwer" => brouwer(&mut r)?,
        "compactness" => compactness(&mut r, &mut rng, n)?,
        other => return Err(Error::Input(format!("unknown suite {other}"))),
    }
    Ok(r)
}

pub fn default_samples(name: &str) -> usize {
    match name {
        "topology" | "forcing" | "truth" => 200,
        "fan" => 50,
        "bar" => 20,
        "continuity" => 10,
        "cc" | "compactness" => 100,
        _ => 0,
    }
}

/// Records at most [`MAX_WITNESSES`] counterexamples.
fn witness(r: &mut Report, w: &impl Serialize) {
    if r.witnesses.len() < MAX_WITNESSES {
        r.witness(w);
    }
}

fn zero_failures(r: &mut Report, name: &str, failures: usize, instances: usize) {
    r.verdict(
        name,
        failures == 0,
        format!("{failures} failures in {instances} instances"),
    );
}

// ---------------------------------------------------------------- generators

/// A random preorder on at most `max_elems` elements with up to two random
/// families per element, repaired until the covering axiom holds.
pub fn random_covering_system(rng: &mut impl Rng, max_elems: usize) -> CoveringSystem {
    let n = rng.gen_range(1..=max_elems);
    let labels = (0..n).map(|i| format!("e{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..i {
            if rng.gen_bool(0.3) {
                pairs.push((Elem(i), Elem(j)));
            }
        }
    }
    let basis = Basis::from_relation(labels, pairs).expect("acyclic by construction");
    let families = basis
        .elems()
        .map(|a| {
            (0..rng.gen_range(0..=2))
                .map(|_| basis.down(a).iter().filter(|_| rng.gen_bool(0.5)).collect())
                .collect()
        })
        .collect();
    CoveringSystem::new(basis, families)
        .expect("families lie below their element")
        .repair_axiom()
}

/// A bar of the truncated space given by a random front: each node stops
/// with probability `stop` or at the leaves.
pub fn random_front(rng: &mut impl Rng, ts: &TruncatedSpace, stop: f64) -> Vec<FinSeq> {
    let mut out = Vec::new();
    let mut stack = vec![FinSeq::empty()];
    while let Some(u) = stack.pop() {
        if u.len() == ts.depth() || rng.gen_bool(stop) {
            out.push(u);
        } else {
            stack.extend((0..ts.branch()).rev().map(|x| u.child(x)));
        }
    }
    out
}

/// A closed formula of depth at most `depth` in the built-in atoms, with
/// quantifiers over `Nat`, `FinSeq` and sequences (`Seq2` when `branch` is
/// 2, else `SeqN`), numbers below `nmax`, and sequence literals over
/// `0..branch` of length at most `max_len`.
pub fn random_formula(
    rng: &mut impl Rng,
    depth: usize,
    nmax: u32,
    branch: u32,
    max_len: usize,
) -> Formula {
    FormulaGen {
        nmax,
        branch,
        max_len,
        seq_sort: if branch == 2 { Sort::Seq2 } else { Sort::SeqN },
        scope: Vec::new(),
    }
    .formula(rng, depth)
}

struct FormulaGen {
    nmax: u32,
    branch: u32,
    max_len: usize,
    seq_sort: Sort,
    scope: Vec<(String, Sort)>,
}

impl FormulaGen {
    fn formula(&mut self, rng: &mut impl Rng, depth: usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.25) {
            return self.atom(rng);
        }
        match rng.gen_range(0..5) {
            0 => Formula::and(self.formula(rng, depth - 1), self.formula(rng, depth - 1)),
            1 => Formula::or(self.formula(rng, depth - 1), self.formula(rng, depth - 1)),
            2 => Formula::imp(self.formula(rng, depth - 1), self.formula(rng, depth - 1)),
            q => {
                let sort = *[Sort::Nat, Sort::FinSeq, self.seq_sort].choose(rng).expect("nonempty");
                let var = format!("x{}", self.scope.len());
                self.scope.push((var.clone(), sort));
                let body = self.formula(rng, depth - 1);
                self.scope.pop();
                if q == 3 {
                    Formula::exists(&var, sort, body)
                } else {
                    Formula::forall(&var, sort, body)
                }
            }
        }
    }

    fn var(&self, rng: &mut impl Rng, sort: Sort) -> Option<Term> {
        let vs: Vec<&String> = self
            .scope
            .iter()
            .filter(|(_, s)| *s == sort)
            .map(|(v, _)| v)
            .collect();
        if vs.is_empty() || rng.gen_bool(0.3) {
            None
        } else {
            Some(Term::Var(vs[rng.gen_range(0..vs.len())].clone()))
        }
    }

    fn nat(&self, rng: &mut impl Rng, below: u32) -> Term {
        self.var(rng, Sort::Nat)
            .unwrap_or_else(|| Term::Num(rng.gen_range(0..below)))
    }

    fn finseq(&self, rng: &mut impl Rng) -> Term {
        self.var(rng, Sort::FinSeq).unwrap_or_else(|| {
            let n = rng.gen_range(0..=self.max_len);
            Term::Seq((0..n).map(|_| rng.gen_range(0..self.branch)).collect())
        })
    }

    fn section(&self, rng: &mut impl Rng) -> Term {
        self.var(rng, self.seq_sort).unwrap_or(Term::Pi)
    }

    fn atom(&self, rng: &mut impl Rng) -> Formula {
        let a = |name: &str, args: Vec<Term>| Formula::atom(name, args);
        match rng.gen_range(0..11) {
            0 => Formula::Bot,
            1 => a("Eq", vec![self.nat(rng, self.nmax), self.nat(rng, self.nmax)]),
            2 => a("Leq", vec![self.nat(rng, self.nmax), self.nat(rng, self.nmax)]),
            3 => a("Eq", vec![self.finseq(rng), self.finseq(rng)]),
            4 => a("Leq", vec![self.finseq(rng), self.finseq(rng)]),
            5..=7 => a("Prefix", vec![self.section(rng), self.finseq(rng)]),
            8 | 9 => a(
                "App",
                vec![
                    self.section(rng),
                    self.nat(rng, self.max_len as u32 + 1),
                    self.nat(rng, self.branch),
                ],
            ),
            _ => a("Eq", vec![self.section(rng), self.section(rng)]),
        }
    }
}

/// The double of Cantor space of depth 3 over `0^ω`, `1^ω`, `01^ω`, `10^ω`.
pub fn cantor_double(depth: usize) -> Result<DoubleSpace> {
    let pts = [
        Point::constant(0),
        Point::constant(1),
        Point::new(&[0], 1),
        Point::new(&[1], 0),
    ];
    DoubleSpace::build(Arc::new(TruncatedSpace::cantor(depth)), &pts)
}

/// The double of binary Baire space over the same four points.
pub fn baire_double(depth: usize) -> Result<DoubleSpace> {
    let pts = [
        Point::constant(0),
        Point::constant(1),
        Point::new(&[0], 1),
        Point::new(&[1], 0),
    ];
    DoubleSpace::build(Arc::new(TruncatedSpace::baire(2, depth)), &pts)
}

/// A random definition on `0..carrier` with up to eight rules of at most three premises.
pub fn random_inductive_definition(rng: &mut impl Rng, carrier: usize) -> InductiveDefinition {
    let rules = (0..rng.gen_range(1..=8))
        .map(|_| Rule {
            premises: (0..rng.gen_range(0..=3))
                .map(|_| rng.gen_range(0..carrier))
                .collect(),
            conclusion: rng.gen_range(0..carrier),
        })
        .collect();
    InductiveDefinition::new(carrier, rules).expect("rules inside the carrier")
}

// -------------------------------------------------------------------- suites

fn topology(r: &mut Report, rng: &mut ChaCha8Rng, n: usize) -> Result<()> {
    let (mut instances, mut unreached, mut failures) = (0, 0, 0);
    for i in 0..n {
        let c = random_covering_system(rng, 8);
        if let Err(v) = c.check_axiom() {
            failures += 1;
            witness(r, &serde_json::json!({"system": i, "axiom": format!("{v:?}")}));
            continue;
        }
        let space = generate_topology(&c)?;
        let rep = check_topology(&space, Fuel(100_000), 4096)?;
        instances += rep.instances;
        unreached += rep.unreached;
        if !rep.holds() {
            failures += 1;
            witness(
                r,
                &serde_json::json!({"system": c.to_document(), "violations": rep.violations}),
            );
        }
    }
    r.verdict(
        "maximality, stability, local character",
        failures == 0,
        format!("{n} systems, {instances} instances, {unreached} unreached, {failures} failing"),
    );
    Ok(())
}

fn cantor(r: &mut Report) -> Result<()> {
    let ts = Arc::new(TruncatedSpace::cantor(4));
    let level = ts.level(3).to_vec();
    let roots: Vec<FinSeq> = (0..=3).flat_map(|k| ts.level(k).to_vec()).collect();
    let (mut instances, mut failures) = (0, 0);
    for mask in 0u32..1 << level.len() {
        let gens: Vec<FinSeq> = (0..level.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| level[i].clone())
            .collect();
        let bar = Bar::from_generators(Arc::clone(&ts), &gens, true, false)?;
        for u in &roots {
            instances += 1;
            let below: Vec<FinSeq> = gens.iter().filter(|g| g.extends(u)).cloned().collect();
            let sieve = ts.sieve(u, &below)?;
            let brute = (u.len()..=ts.depth()).find(|&q| {
                ts.level(q)
                    .iter()
                    .filter(|v| v.extends(u))
                    .all(|v| bar.holds(v))
            });
            if u.is_empty() && brute != bar.minimal_uniform_depth() {
                failures += 1;
            }
            let verdict = ts.cantor_cover_test(u, &sieve)?;
            let ok = match (&verdict, brute) {
                (CantorVerdict::Covered(q), Some(b)) => {
                    let sub = ts.kfinite_subcover(u, &sieve)?;
                    let elems = sub.iter().map(|v| ts.elem(v)).collect::<Result<Vec<_>>>()?;
                    *q == b
                        && elems.iter().all(|&e| sieve.contains(e))
                        && ts
                            .space()
                            .covered_by(ts.elem(u)?, &ts.basis().downset(elems.iter()))
                }
                (CantorVerdict::NotCovered { frontier }, None) => {
                    !frontier.is_empty()
                        && frontier
                            .iter()
                            .all(|v| ts.elem(v).map(|e| !sieve.contains(e)).unwrap_or(false))
                }
                _ => false,
            };
            if !ok {
                failures += 1;
                witness(
                    r,
                    &serde_json::json!({"root": u, "gens": below, "verdict": verdict, "brute": brute}),
                );
            }
        }
    }
    r.verdict(
        "cover test equals minimal uniform depth",
        failures == 0,
        format!("{} bars, {instances} instances, {failures} disagreements", 1u32 << level.len()),
    );
    Ok(())
}

fn forcing_context() -> Result<ForcingContext> {
    ForcingContext::on_double(&cantor_double(3)?, 8, 3)
}

fn forcing_lemma(r: &mut Report, rng: &mut ChaCha8Rng, n: usize) -> Result<()> {
    let ctx = forcing_context()?;
    let sp = ctx.space();
    let b = sp.basis();
    let (mut mono, mut local, mut derivs, mut unreached, mut mixed) = (0, 0, 0, 0, 0);
    for _ in 0..n {
        let phi = random_formula(rng, 4, 8, 2, 3);
        let Some(set) = forced_set(&ctx, &phi, &Env::new(), FUEL)? else {
            unreached += 1;
            continue;
        };
        if !set.is_empty() && set.len() < sp.len() {
            mixed += 1;
        }
        if let Some(p) = set.iter().find(|&p| !b.down(p).is_subset(&set)) {
            mono += 1;
            witness(r, &serde_json::json!({"law": "monotonicity", "formula": phi.to_string(), "at": b.label(p)}));
        }
        if let Some(p) = b
            .elems()
            .find(|&p| !set.contains(p) && sp.covered_by(p, &set.intersection(b.down(p))))
        {
            local += 1;
            witness(r, &serde_json::json!({"law": "local character", "formula": phi.to_string(), "at": b.label(p)}));
        }
        for p in set.iter() {
            match force(&ctx, p, &phi, &Env::new(), FUEL)? {
                ForceVerdict::Holds(d) if check_derivation(&ctx, p, &phi, &Env::new(), &d) => {}
                _ => {
                    derivs += 1;
                    witness(r, &serde_json::json!({"law": "derivation", "formula": phi.to_string(), "at": b.label(p)}));
                    break;
                }
            }
        }
    }
    zero_failures(r, "monotonicity", mono, n - unreached);
    zero_failures(r, "local character", local, n - unreached);
    zero_failures(r, "derivations recheck", derivs, n - unreached);
    r.verdict(
        "within fuel",
        unreached == 0,
        format!("{unreached} formulas unreached, {mixed} forced on a proper nonempty part"),
    );
    Ok(())
}

fn minimal_truth(r: &mut Report, rng: &mut ChaCha8Rng, n: usize) -> Result<()> {
    let ctx = forcing_context()?;
    let (mut instances, mut failures, mut truths) = (0, 0, 0);
    for (k, (q, label)) in ctx.points().iter().enumerate() {
        for _ in 0..n {
            let phi = random_formula(rng, 4, 8, 2, 3);
            let forced = force(&ctx, *q, &phi, &Env::new(), FUEL)?;
            if matches!(forced, ForceVerdict::FailsWithinFuel { exhausted: true }) {
                return Err(Error::Input(format!("fuel exhausted on {phi}")));
            }
            let truth = classical_eval(&ctx, k, &phi, &Env::new())?;
            instances += 1;
            truths += usize::from(truth);
            if forced.holds() != truth {
                failures += 1;
                witness(
                    r,
                    &serde_json::json!({"point": label, "formula": phi.to_string(), "forced": forced.holds(), "true": truth}),
                );
            }
        }
    }
    r.verdict(
        "forcing at minimal points is truth",
        failures == 0,
        format!(
            "{} points, {instances} formulas ({truths} true), {failures} disagreements",
            ctx.points().len()
        ),
    );
    Ok(())
}

fn fan(r: &mut Report, rng: &mut ChaCha8Rng, n: usize) -> Result<()> {
    let (mut sound, mut exact, mut uniform, mut rechecks) = (0, 0, 0, 0);
    for i in 0..n {
        let depth = rng.gen_range(1..=5);
        let ts = Arc::new(TruncatedSpace::cantor(depth));
        let closure = i % 2 == 0;
        let gens = if closure {
            ts.level(rng.gen_range(0..=depth)).to_vec()
        } else {
            random_front(rng, &ts, 0.35)
        };
        let bar = Bar::from_generators(Arc::clone(&ts), &gens, true, false)?;
        let (k, t) = fan_rule(&bar, FUEL)?;
        let brute = bar.minimal_uniform_depth();
        let doc = bar.to_document();
        if !ts.level(k).iter().all(|v| bar.holds(v)) || brute.is_none_or(|m| m > k) {
            sound += 1;
            witness(r, &serde_json::json!({"bar": doc, "n": k, "brute": brute}));
        }
        if closure {
            uniform += 1;
            if brute != Some(k) {
                exact += 1;
                witness(r, &serde_json::json!({"bar": doc, "n": k, "brute": brute}));
            }
        }
        let failures = t.recheck(&bar);
        if !failures.is_empty() {
            rechecks += 1;
            witness(r, &serde_json::json!({"bar": doc, "recheck": failures}));
        }
    }
    zero_failures(r, "phi holds on the extracted level", sound, n);
    zero_failures(r, "n is minimal for uniform closures", exact, uniform);
    zero_failures(r, "transcripts recheck", rechecks, n);
    Ok(())
}

fn bar(r: &mut Report, rng: &mut ChaCha8Rng, n: usize) -> Result<()> {
    let ts = Arc::new(TruncatedSpace::baire(2, 4));
    let (mut concl, mut oracle, mut rechecks) = (0, 0, 0);
    for _ in 0..n {
        let gens = random_front(rng, &ts, 0.3);
        let elems = gens.iter().map(|u| ts.elem(u)).collect::<Result<Vec<_>>>()?;
        let members = ts.inductive_closure(&ts.basis().downset(elems.iter()));
        let bar = Bar::from_members(Arc::clone(&ts), members, true, true)?;
        let t = bar_rule(&bar, FUEL)?;
        let direct = ts
            .inductive_closure(&ts.basis().downset(elems.iter()))
            .contains(ts.root());
        let doc = bar.to_document();
        if !t.conclusion || !bar.holds(&FinSeq::empty()) {
            concl += 1;
            witness(r, &serde_json::json!({"bar": doc, "conclusion": t.conclusion}));
        }
        if direct != t.conclusion {
            oracle += 1;
            witness(r, &serde_json::json!({"bar": doc, "oracle": direct}));
        }
        let failures = t.recheck(&bar);
        if !failures.is_empty() {
            rechecks += 1;
            witness(r, &serde_json::json!({"bar": doc, "recheck": failures}));
        }
    }
    zero_failures(r, "concludes phi at the root", concl, n);
    zero_failures(r, "inductive closure oracle agrees", oracle, n);
    zero_failures(r, "transcripts recheck", rechecks, n);
    Ok(())
}

/// A random continuous table `β = values[α|read]` on binary sequences.
pub fn random_relation_doc(rng: &mut impl Rng, name: &str, depth: usize, max_read: usize) -> RelationDoc {
    let read = rng.gen_range(0..=max_read);
    let ts = TruncatedSpace::baire(2, read);
    let values = ts
        .level(read)
        .iter()
        .map(|u| (u.label(), (0..depth).map(|_| rng.gen_range(0..2)).collect()))
        .collect::<BTreeMap<_, _>>();
    RelationDoc {
        name: name.to_string(),
        branch: 2,
        depth,
        read,
        values,
    }
}

/// Functions whose value depends on the eventual tail of `α`, which no
/// truncated stage can see.
pub fn discontinuous_tables(depth: usize) -> Vec<RelationTable> {
    let d = depth;
    vec![
        RelationTable::from_function("tail", 2, d, move |a| vec![a.tail; d]),
        RelationTable::from_function("head-tail", 2, d, move |a| {
            (0..d).map(|i| if i == 0 { a.at(0) } else { a.tail }).collect()
        }),
        RelationTable::from_function("far-entry", 2, d, move |a| {
            (0..d).map(|i| a.at(d + 2 + i)).collect()
        }),
        RelationTable::from_function("parity", 2, d, move |a| {
            (0..d).map(|i| (a.at(i) + a.at(d + 5)) % 2).collect()
        }),
        RelationTable::from_function("eventually-one", 2, d, move |a| {
            (0..d)
                .map(|i| if i == 0 { u32::from(a.tail == 1 && a.at(0) == 0) } else { a.at(i) })
                .collect()
        }),
    ]
}

fn continuity(r: &mut Report, rng: &mut ChaCha8Rng, n: usize) -> Result<()> {
    const L: usize = 2;
    let mut tables = vec![RelationTable::shift(2, L), RelationTable::identity(2, L)];
    let mut docs = Vec::new();
    for i in 0..n {
        let doc = random_relation_doc(rng, &format!("random-{i}"), L, L + 1);
        tables.push(doc.to_table()?);
        docs.push(doc);
    }
    let (mut agree, mut modulus, mut rechecks, mut points) = (0, 0, 0, 0);
    for t in &tables {
        let out = continuity_rule(t, FUEL)?;
        for o in &out.points {
            points += 1;
            if !(o.brute.len() == 1 && o.brute[0] == o.f && o.rel_holds && o.at_singleton == o.f) {
                agree += 1;
                witness(r, &serde_json::json!({"table": t.name(), "point": o.point, "f": o.f, "brute": o.brute}));
            }
            if !o.modulus_valid || o.modulus.len() != L + 1 {
                modulus += 1;
                witness(r, &serde_json::json!({"table": t.name(), "point": o.point, "modulus": o.modulus}));
            }
        }
        let failures = out.recheck(t, FUEL);
        if !failures.is_empty() {
            rechecks += 1;
            witness(r, &serde_json::json!({"table": t.name(), "recheck": failures}));
        }
    }
    zero_failures(r, "f agrees with the unique beta", agree, points);
    zero_failures(r, "modulus valid for every k <= L", modulus, points);
    zero_failures(r, "transcripts recheck", rechecks, tables.len());
    let mut missed = 0;
    let bad = discontinuous_tables(L);
    for t in &bad {
        match continuity_rule(t, FUEL) {
            Err(Error::NoModulus(_)) => {}
            other => {
                missed += 1;
                witness(
                    r,
                    &serde_json::json!({"table": t.name(), "outcome": format!("{:?}", other.map(|o| o.points.len()))}),
                );
            }
        }
    }
    zero_failures(r, "NoModulus on discontinuous tables", missed, bad.len());
    for doc in docs {
        witness(r, &doc);
    }
    Ok(())
}

struct SheafSite {
    name: &'static str,
    space: Arc<Space>,
    system: CoveringSystem,
    top: Elem,
}

fn sheaf_sites(depth: usize) -> Result<Vec<SheafSite>> {
    let c = TruncatedSpace::cantor(depth);
    let b = TruncatedSpace::baire(2, depth);
    let dc = cantor_double(depth)?;
    let db = baire_double(depth)?;
    Ok(vec![
        SheafSite {
            name: "cantor",
            space: c.space_arc(),
            system: c.children_system(),
            top: c.root(),
        },
        SheafSite {
            name: "baire",
            space: b.space_arc(),
            system: b.children_system(),
            top: b.root(),
        },
        SheafSite {
            name: "cantor double",
            space: dc.space_arc(),
            system: dc.covering_system(&dc.inner().children_system()),
            top: dc.d(dc.inner().root()),
        },
        SheafSite {
            name: "baire double",
            space: db.space_arc(),
            system: db.covering_system(&db.inner().children_system()),
            top: db.d(db.inner().root()),
        },
    ])
}

fn sheaf_laws<T: Clone + Ord + std::fmt::Debug>(
    r: &mut Report,
    site: &SheafSite,
    covers: &[(Elem, ElemSet)],
    name: &str,
    table: &FinitePresheaf<T>,
) {
    let laws = table.check_laws();
    let full = sheaf_check(table, covers);
    let gen = sheaf_check_covering_system(table, &site.system);
    let ok = laws.is_ok() && full.holds() && gen.holds();
    if !ok {
        witness(
            r,
            &serde_json::json!({"site": site.name, "sheaf": name, "laws": format!("{laws:?}"), "covers": full, "system": gen}),
        );
    }
    r.verdict(
        &format!("{name} sheaf on {}", site.name),
        ok,
        format!("{} covers", covers.len()),
    );
}

fn purity<V: Clone + Eq + Ord + std::fmt::Debug>(
    r: &mut Report,
    site: &SheafSite,
    name: &str,
    x: &LocalSheaf<V>,
) {
    let mut sections = 0;
    let mut fails = Vec::new();
    for p in site.space.basis().elems() {
        match pure_density_check(x, p) {
            PurityVerdict::Holds { sections: s } => sections += s,
            PurityVerdict::Fails { index } => fails.push((site.space.basis().label(p).to_string(), index)),
        }
    }
    if !fails.is_empty() {
        witness(r, &serde_json::json!({"site": site.name, "sheaf": name, "impure": fails}));
    }
    r.verdict(
        &format!("pure elements dense in {name} on {}", site.name),
        fails.is_empty(),
        format!("{sections} sections"),
    );
}

fn sheaves(r: &mut Report) -> Result<()> {
    for site in sheaf_sites(3)? {
        let covers = all_covers(&site.space);
        let nat = nat_sheaf(Arc::clone(&site.space), 2)?;
        let two = two_sheaf(Arc::clone(&site.space))?;
        let fin = finseq_sheaf(Arc::clone(&site.space), 2, 1)?;
        sheaf_laws(r, &site, &covers, "nat", &FinitePresheaf::tabulate(&nat)?);
        sheaf_laws(r, &site, &covers, "finseq", &FinitePresheaf::tabulate(&fin)?);
        let seq = SeqSheaf::new(two.clone(), 2);
        sheaf_laws(r, &site, &covers, "seq", &FinitePresheaf::tabulate(&seq)?);
        purity(r, &site, "nat", &nat);
        purity(r, &site, "two", &two);
        purity(r, &site, "finseq", &fin);
        let g = global_sections_vs_maps(&nat, site.top);
        let ok = g.all_continuous && g.bijective;
        if !ok {
            witness(r, &serde_json::json!({"site": site.name, "global": g}));
        }
        r.verdict(
            &format!("global sections are continuous maps on {}", site.name),
            ok,
            format!("{} sections, {} maps", g.sections, g.maps),
        );
    }
    Ok(())
}

fn cc(r: &mut Report, rng: &mut ChaCha8Rng, n: usize) -> Result<()> {
    let sites = sheaf_sites(3)?;
    let mut per_site: Vec<Vec<(Elem, ElemSet)>> = Vec::new();
    for site in &sites {
        let covers = all_covers(&site.space);
        let b = site.space.basis();
        let mut failures = 0;
        for (p, s) in &covers {
            let s = b.down_closure(&s.intersection(b.down(*p)));
            let ok = match cc_refine(&site.space, *p, &s) {
                Ok(alpha) => {
                    alpha.iter().all(|g| s.contains(*g))
                        && check_refinement(&site.space, *p, &alpha).is_ok()
                }
                Err(_) => false,
            };
            if !ok {
                failures += 1;
                witness(
                    r,
                    &serde_json::json!({"site": site.name, "root": b.label(*p), "cover": b.maximal(&s).iter().map(|&g| b.label(g)).collect::<Vec<_>>()}),
                );
            }
        }
        zero_failures(r, &format!("disjoint refinements on {}", site.name), failures, covers.len());
        per_site.push(covers);
    }

    let sheaves = sites
        .iter()
        .map(|s| nat_sheaf(Arc::clone(&s.space), 2))
        .collect::<Result<Vec<_>>>()?;
    let mut cache: BTreeMap<(usize, Elem), Vec<LocalSection<u32>>> = BTreeMap::new();
    let mut sections = |i: usize, p: Elem| -> Vec<LocalSection<u32>> {
        cache
            .entry((i, p))
            .or_insert_with(|| sheaves[i].enumerate(p))
            .clone()
    };
    let mut failures = 0;
    for _ in 0..n {
        let i = rng.gen_range(0..sites.len());
        let site = &sites[i];
        let (p, s) = per_site[i][rng.gen_range(0..per_site[i].len())].clone();
        let alpha = cc_refine(&site.space, p, &s)?;
        let pieces: Vec<(Elem, _)> = alpha
            .iter()
            .map(|&g| {
                let xs = sections(i, g);
                (g, xs[rng.gen_range(0..xs.len())].clone())
            })
            .collect();
        let x = choice_amalgamation(&site.space, p, &pieces)?;
        let restricts = pieces
            .iter()
            .all(|(g, xg)| x.restrict(&site.space, *g) == *xg);
        let matching: Vec<_> = sections(i, p)
            .into_iter()
            .filter(|y| pieces.iter().all(|(g, xg)| y.restrict(&site.space, *g) == *xg))
            .collect();
        if !(restricts && matching.len() == 1 && matching[0] == x) {
            failures += 1;
            let b = site.space.basis();
            witness(
                r,
                &serde_json::json!({"site": site.name, "root": b.label(p), "pieces": alpha.iter().map(|&g| b.label(g)).collect::<Vec<_>>(), "amalgamations": matching.len()}),
            );
        }
    }
    zero_failures(r, "choice amalgamation is the unique amalgamation", failures, n);
    Ok(())
}

fn brouwer(r: &mut Report) -> Result<()> {
    for branch in 1..=3 {
        for depth in 1..=3 {
            let rep = alt_baire_equiv_check(branch, depth)?;
            if !rep.holds() {
                witness(r, &rep);
            }
            r.verdict(
                &format!("alternative Baire covers agree at B={branch}, L={depth}"),
                rep.holds(),
                format!(
                    "{} instances, {} exhaustive roots, {} sampled roots",
                    rep.instances,
                    rep.exhaustive_roots,
                    rep.boundary_roots.len()
                ),
            );
        }
    }
    let one = Space::one_point();
    let cantor = TruncatedSpace::cantor(1);
    for (name, space) in [("one-point space", &one), ("Cantor L=1", cantor.space())] {
        let rep = bo_sheaf_checks(space, 2, 2, 100_000)?;
        for law in &rep.laws {
            if !law.failures.is_empty() {
                witness(r, &serde_json::json!({"space": name, "law": law}));
            }
            r.verdict(
                &format!("{} on {name}", law.law),
                law.failures.is_empty(),
                format!("{} instances", law.instances),
            );
        }
    }
    let mut failures = 0;
    let mut trees = 0;
    for (branch, height) in [(1, 3), (2, 3), (3, 2)] {
        let all = BrouwerTree::enumerate(branch, height);
        trees += all.len();
        let mut covers = BTreeSet::new();
        let mut kids = BTreeSet::new();
        for t in &all {
            covers.insert(k_map(t, height)?);
            if let BrouwerTree::Sup(ch) = t {
                if !kids.insert(ch.clone()) {
                    failures += 1;
                }
            }
        }
        if covers.len() != all.len() {
            failures += 1;
            witness(r, &serde_json::json!({"branch": branch, "height": height, "trees": all.len(), "covers": covers.len()}));
        }
    }
    zero_failures(r, "sup and k are injective", failures, trees);
    Ok(())
}

fn compactness(r: &mut Report, rng: &mut ChaCha8Rng, n: usize) -> Result<()> {
    let (mut witnesses, mut failures) = (0, 0);
    for _ in 0..n {
        let carrier = rng.gen_range(1..=6);
        let def = random_inductive_definition(rng, carrier);
        let u: BTreeSet<usize> = (0..carrier).filter(|_| rng.gen_bool(0.5)).collect();
        let closed = def.close(&u)?;
        let pool: Vec<usize> = u.iter().copied().collect();
        for a in 0..carrier {
            let got = def.set_compactness_witness(&u, a);
            let ok = match (&got, closed.contains(&a)) {
                (Ok(v), true) => {
                    witnesses += 1;
                    let smallest = (0u32..1 << pool.len())
                        .map(|m| -> BTreeSet<usize> {
                            (0..pool.len()).filter(|i| m >> i & 1 == 1).map(|i| pool[i]).collect()
                        })
                        .filter(|w| def.close(w).map(|c| c.contains(&a)).unwrap_or(false))
                        .map(|w| w.len())
                        .min();
                    v.is_subset(&u)
                        && def.close(v)?.contains(&a)
                        && smallest == Some(v.len())
                }
                (Err(_), false) => true,
                _ => false,
            };
            if !ok {
                failures += 1;
                witness(
                    r,
                    &serde_json::json!({"definition": def, "u": u, "a": a, "witness": format!("{got:?}")}),
                );
            }
        }
    }
    zero_failures(r, "witnesses revalidate and are minimal", failures, witnesses);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_formulas_are_closed_and_shallow() {
        let ctx = forcing_context().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let phi = random_formula(&mut rng, 4, 8, 2, 3);
            assert!(phi.depth() <= 4);
            ctx.check_sorts(&phi, &Env::new()).unwrap();
        }
    }

    #[test]
    fn random_fronts_are_bars() {
        let ts = TruncatedSpace::cantor(4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let gens = random_front(&mut rng, &ts, 0.4);
            let e: Vec<Elem> = gens.iter().map(|u| ts.elem(u).unwrap()).collect();
            assert!(ts.space().covered_by(ts.root(), &ts.basis().downset(e.iter())));
        }
    }

    #[test]
    fn unknown_suite_is_an_input_error() {
        assert!(matches!(run_suite("nope", 0, None), Err(Error::Input(_))));
    }

    #[test]
    fn compactness_suite_small() {
        assert!(run_suite("compactness", 1, Some(10)).unwrap().passed());
    }
}
