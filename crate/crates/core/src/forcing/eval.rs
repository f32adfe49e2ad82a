//! The forcing relation, evaluated set-wise: `⟦φ⟧ = {r : r ⊩ φ}` over the
//! whole truncated basis.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::double::DoubleSpace;
use crate::error::{Error, Result};
use crate::sheaves::{pi_section, SeqSection};
use crate::site::{Elem, ElemSet, Fuel, Space};
use crate::spaces::{Bar, FinSeq, TruncatedSpace};

use super::syntax::{sort_check_with, Formula, Signature, Sort, Term};

/// Pure data handed to table atoms; sections arrive as their reading at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Datum {
    Nat(u32),
    Seq(Vec<u32>),
}

#[derive(Clone)]
enum Pred {
    Pure(Arc<dyn Fn(&[Datum]) -> bool + Send + Sync>),
    /// Also receives the index of the minimal point it is evaluated at.
    Pointwise(Arc<dyn Fn(usize, &[Datum]) -> bool + Send + Sync>),
}

/// Named decidable predicates. An atom with a section argument, or a
/// pointwise atom, holds at `r` iff it holds at every minimal point below `r`.
#[derive(Clone, Default)]
pub struct AtomTable {
    atoms: BTreeMap<String, (Vec<Sort>, Pred)>,
}

impl fmt::Debug for AtomTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.atoms.iter().map(|(k, (s, _))| (k, s)))
            .finish()
    }
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        name: &str,
        sorts: Vec<Sort>,
        pred: impl Fn(&[Datum]) -> bool + Send + Sync + 'static,
    ) {
        self.atoms
            .insert(name.to_string(), (sorts, Pred::Pure(Arc::new(pred))));
    }

    /// An atom whose truth at a minimal point may depend on the point itself.
    pub fn insert_pointwise(
        &mut self,
        name: &str,
        sorts: Vec<Sort>,
        pred: impl Fn(usize, &[Datum]) -> bool + Send + Sync + 'static,
    ) {
        self.atoms
            .insert(name.to_string(), (sorts, Pred::Pointwise(Arc::new(pred))));
    }

    pub fn with(
        mut self,
        name: &str,
        sorts: Vec<Sort>,
        pred: impl Fn(&[Datum]) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.insert(name, sorts, pred);
        self
    }

    /// `InBar(u)` for the given bar.
    pub fn bar(bar: &Bar) -> Self {
        let bar = bar.clone();
        AtomTable::new().with("InBar", vec![Sort::FinSeq], move |d| match &d[0] {
            Datum::Seq(u) => bar.holds(&FinSeq(u.clone())),
            Datum::Nat(_) => false,
        })
    }

    fn get(&self, name: &str) -> Result<&Pred> {
        self.atoms
            .get(name)
            .map(|(_, p)| p)
            .ok_or_else(|| Error::Sort(format!("unknown atom {name}")))
    }

    pub fn signature(&self) -> Signature {
        self.atoms
            .iter()
            .map(|(k, (s, _))| (k.clone(), s.clone()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Value {
    Nat(u32),
    Seq(FinSeq),
    /// Index into the context's section domain.
    Section(usize),
}

impl Value {
    fn sort(&self) -> Sort {
        match self {
            Value::Nat(_) => Sort::Nat,
            Value::Seq(_) => Sort::FinSeq,
            Value::Section(_) => Sort::SeqN,
        }
    }
}

pub type Env = Vec<(String, Value)>;

/// The space, quantifier domains and atoms a formula is forced over.
///
/// `Nat` ranges over pure `0..nmax`, `FinSeq` over the pure basis sequences,
/// and section sorts over an enumerated family of global sections (restricted
/// on use).
#[derive(Clone, Debug)]
pub struct ForcingContext {
    space: Arc<Space>,
    branch: u32,
    seqs: Vec<FinSeq>,
    nmax: u32,
    sections: Vec<SeqSection>,
    section_labels: Vec<String>,
    pi: Option<usize>,
    points: Vec<(Elem, String)>,
    atoms: AtomTable,
}

impl ForcingContext {
    /// Forcing over a truncated space; no sections.
    pub fn on_space(ts: &TruncatedSpace, nmax: u32) -> Self {
        let space = ts.space_arc();
        let points = minimal_points(&space);
        ForcingContext {
            space,
            branch: ts.branch(),
            seqs: ts.seqs().to_vec(),
            nmax,
            sections: Vec::new(),
            section_labels: Vec::new(),
            pi: None,
            points,
            atoms: AtomTable::new(),
        }
    }

    /// Forcing over the double with `π` and the constant sections of its
    /// points, each with `coords` coordinates.
    pub fn on_double(d: &DoubleSpace, nmax: u32, coords: usize) -> Result<Self> {
        let inner = d.inner();
        let top = d.d(inner.root());
        let mut sections = vec![pi_section(d, coords)?];
        let mut section_labels = vec!["pi".to_string()];
        for q in d.points() {
            sections.push(SeqSection::constant(d.space(), top, q, coords));
            section_labels.push(format!("const({})", q.label()));
        }
        let points = (0..d.points().len())
            .map(|i| (d.singleton(i), d.basis().label(d.singleton(i)).to_string()))
            .collect();
        Ok(ForcingContext {
            space: d.space_arc(),
            branch: inner.branch(),
            seqs: inner.seqs().to_vec(),
            nmax,
            sections,
            section_labels,
            pi: Some(0),
            points,
            atoms: AtomTable::new(),
        })
    }

    pub fn with_atoms(mut self, atoms: AtomTable) -> Self {
        self.atoms = atoms;
        self
    }

    pub fn atoms_mut(&mut self) -> &mut AtomTable {
        &mut self.atoms
    }

    /// Adds a global section to the section domain.
    pub fn add_section(&mut self, label: &str, s: SeqSection) -> usize {
        self.sections.push(s);
        self.section_labels.push(label.to_string());
        self.sections.len() - 1
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn space_arc(&self) -> Arc<Space> {
        Arc::clone(&self.space)
    }

    pub fn nmax(&self) -> u32 {
        self.nmax
    }

    pub fn branch(&self) -> u32 {
        self.branch
    }

    pub fn seqs(&self) -> &[FinSeq] {
        &self.seqs
    }

    pub fn sections(&self) -> &[SeqSection] {
        &self.sections
    }

    pub fn section_label(&self, i: usize) -> &str {
        &self.section_labels[i]
    }

    pub fn pi(&self) -> Option<usize> {
        self.pi
    }

    /// Minimal elements whose only cover is the maximal sieve.
    pub fn points(&self) -> &[(Elem, String)] {
        &self.points
    }

    pub fn signature(&self) -> Signature {
        self.atoms.signature()
    }

    /// Sort-checks `phi` with the variables of `env` in scope.
    pub fn check_sorts(&self, phi: &Formula, env: &Env) -> Result<()> {
        let free: Vec<(String, Sort)> = env.iter().map(|(n, v)| (n.clone(), v.sort())).collect();
        sort_check_with(phi, &self.signature(), &free)
    }

    pub fn domain(&self, sort: Sort) -> Result<Vec<Value>> {
        Ok(match sort {
            Sort::Nat => (0..self.nmax).map(Value::Nat).collect(),
            Sort::FinSeq => self.seqs.iter().cloned().map(Value::Seq).collect(),
            Sort::Seq2 if self.branch != 2 => {
                return Err(Error::Unsupported(format!(
                    "Seq2 over a space with branching {}",
                    self.branch
                )))
            }
            Sort::Seq2 | Sort::SeqN => (0..self.sections.len()).map(Value::Section).collect(),
        })
    }

    pub fn describe(&self, v: &Value) -> String {
        match v {
            Value::Nat(n) => n.to_string(),
            Value::Seq(u) => u.to_string(),
            Value::Section(i) => self.section_labels[*i].clone(),
        }
    }
}

fn minimal_points(space: &Space) -> Vec<(Elem, String)> {
    let b = space.basis();
    b.elems()
        .filter(|&e| b.is_minimal(e) && !space.covered_by(e, &b.empty_set()))
        .map(|e| (e, b.label(e).to_string()))
        .collect()
}

/// `Holds` carries a derivation; otherwise `exhausted` says whether the step
/// budget ran out before the answer was known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForceVerdict {
    Holds(Derivation),
    FailsWithinFuel { exhausted: bool },
}

impl ForceVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ForceVerdict::Holds(_))
    }
}

/// Evidence for `p ⊩ φ`. Disjunctions and existentials record the cover and
/// the chosen disjunct or witness on each piece; implications and universals
/// are rechecked by recomputation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Derivation {
    Atom { at: Elem },
    And(Box<Derivation>, Box<Derivation>),
    Or { at: Elem, pieces: Vec<OrPiece> },
    Exists { at: Elem, pieces: Vec<ExistsPiece> },
    Bot { at: Elem },
    Recheck { at: Elem },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrPiece {
    pub at: Elem,
    pub left: bool,
    pub proof: Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistsPiece {
    pub at: Elem,
    pub witness: Value,
    pub proof: Derivation,
}

impl Derivation {
    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Derivation::Atom { .. } | Derivation::Bot { .. } | Derivation::Recheck { .. } => 1,
            Derivation::And(a, b) => 1 + a.size() + b.size(),
            Derivation::Or { pieces, .. } => 1 + pieces.iter().map(|p| p.proof.size()).sum::<usize>(),
            Derivation::Exists { pieces, .. } => {
                1 + pieces.iter().map(|p| p.proof.size()).sum::<usize>()
            }
        }
    }
}

enum Stop {
    Fuel,
    Fail(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Fail(e)
    }
}

struct Eval<'a> {
    ctx: &'a ForcingContext,
    left: usize,
}

impl<'a> Eval<'a> {
    fn new(ctx: &'a ForcingContext, fuel: Fuel) -> Self {
        Eval { ctx, left: fuel.0 }
    }

    fn tick(&mut self) -> std::result::Result<(), Stop> {
        if self.left == 0 {
            return Err(Stop::Fuel);
        }
        self.left -= 1;
        Ok(())
    }

    fn all(&self) -> ElemSet {
        ElemSet::full(self.ctx.space.len())
    }

    fn none(&self) -> ElemSet {
        ElemSet::empty(self.ctx.space.len())
    }

    /// `{r : u ∈ Cov(r)}`
    fn covered(&self, u: &ElemSet) -> ElemSet {
        let sp = &self.ctx.space;
        ElemSet::from_elems(sp.len(), sp.basis().elems().filter(|&r| sp.covered_by(r, u)))
    }

    fn set(&mut self, phi: &Formula, env: &mut Env) -> std::result::Result<ElemSet, Stop> {
        self.tick()?;
        Ok(match phi {
            Formula::Bot => self.covered(&self.none()),
            Formula::Atom { name, args } => atom_set(self.ctx, name, args, env)?,
            Formula::And(a, b) => self.set(a, env)?.intersection(&self.set(b, env)?),
            Formula::Or(a, b) => {
                let u = self.set(a, env)?.union(&self.set(b, env)?);
                self.covered(&u)
            }
            Formula::Imp(a, b) => {
                let sa = self.set(a, env)?;
                let sb = self.set(b, env)?;
                let bad = sa.difference(&sb);
                let basis = self.ctx.space.basis();
                ElemSet::from_elems(
                    basis.len(),
                    basis.elems().filter(|&r| basis.down(r).is_disjoint(&bad)),
                )
            }
            Formula::Exists { var, sort, body } => {
                let mut u = self.none();
                for x in self.ctx.domain(*sort)? {
                    env.push((var.clone(), x));
                    let s = self.set(body, env);
                    env.pop();
                    u.union_with(&s?);
                }
                self.covered(&u)
            }
            Formula::Forall { var, sort, body } => {
                let mut u = self.all();
                for x in self.ctx.domain(*sort)? {
                    env.push((var.clone(), x));
                    let s = self.set(body, env);
                    env.pop();
                    u.intersect_with(&s?);
                }
                u
            }
        })
    }

    fn derive(
        &mut self,
        phi: &Formula,
        env: &mut Env,
        p: Elem,
    ) -> std::result::Result<Derivation, Stop> {
        let basis = self.ctx.space.basis();
        Ok(match phi {
            Formula::Bot => Derivation::Bot { at: p },
            Formula::Atom { .. } => Derivation::Atom { at: p },
            Formula::And(a, b) => Derivation::And(
                Box::new(self.derive(a, env, p)?),
                Box::new(self.derive(b, env, p)?),
            ),
            Formula::Imp(..) | Formula::Forall { .. } => Derivation::Recheck { at: p },
            Formula::Or(a, b) => {
                let sa = self.set(a, env)?;
                let sb = self.set(b, env)?;
                let u = sa.union(&sb).intersection(basis.down(p));
                let mut pieces = Vec::new();
                for g in basis.maximal(&u) {
                    let left = sa.contains(g);
                    let side = if left { a } else { b };
                    pieces.push(OrPiece {
                        at: g,
                        left,
                        proof: self.derive(side, env, g)?,
                    });
                }
                Derivation::Or { at: p, pieces }
            }
            Formula::Exists { var, sort, body } => {
                let dom = self.ctx.domain(*sort)?;
                let mut sets = Vec::with_capacity(dom.len());
                let mut u = self.none();
                for x in &dom {
                    env.push((var.clone(), x.clone()));
                    let s = self.set(body, env);
                    env.pop();
                    let s = s?;
                    u.union_with(&s);
                    sets.push(s);
                }
                u.intersect_with(basis.down(p));
                let mut pieces = Vec::new();
                for g in basis.maximal(&u) {
                    let k = sets
                        .iter()
                        .position(|s| s.contains(g))
                        .expect("piece lies in some witness set");
                    env.push((var.clone(), dom[k].clone()));
                    let proof = self.derive(body, env, g);
                    env.pop();
                    pieces.push(ExistsPiece {
                        at: g,
                        witness: dom[k].clone(),
                        proof: proof?,
                    });
                }
                Derivation::Exists { at: p, pieces }
            }
        })
    }
}

fn term_value(ctx: &ForcingContext, t: &Term, env: &Env) -> Result<Value> {
    match t {
        Term::Var(v) => env
            .iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|(_, x)| x.clone())
            .ok_or_else(|| Error::Sort(format!("free variable {v}"))),
        Term::Num(n) => Ok(Value::Nat(*n)),
        Term::Seq(s) => Ok(Value::Seq(FinSeq(s.clone()))),
        Term::Pi => ctx
            .pi
            .map(Value::Section)
            .ok_or_else(|| Error::Unsupported("pi exists only over a double".into())),
        Term::Add(a, b) => match (term_value(ctx, a, env)?, term_value(ctx, b, env)?) {
            (Value::Nat(x), Value::Nat(y)) => x.checked_add(y).map(Value::Nat).ok_or(
                Error::ValueCeiling {
                    value: x as u64 + y as u64,
                    ceiling: u32::MAX as u64,
                },
            ),
            _ => Err(Error::Sort(format!("{t} is not a sum of naturals"))),
        },
    }
}

fn sort_mismatch(name: &str, args: &[Value]) -> Error {
    Error::Sort(format!("{name} applied to {args:?}"))
}

fn atom_set(ctx: &ForcingContext, name: &str, args: &[Term], env: &Env) -> Result<ElemSet> {
    let vals = args
        .iter()
        .map(|t| term_value(ctx, t, env))
        .collect::<Result<Vec<_>>>()?;
    let sp = &ctx.space;
    let basis = sp.basis();
    let n = sp.len();
    let constant = |b: bool| if b { ElemSet::full(n) } else { ElemSet::empty(n) };
    let filter = |f: &dyn Fn(Elem) -> bool| ElemSet::from_elems(n, basis.elems().filter(|&r| f(r)));
    Ok(match (name, vals.as_slice()) {
        ("Eq", [Value::Nat(a), Value::Nat(b)]) => constant(a == b),
        ("Eq", [Value::Seq(a), Value::Seq(b)]) => constant(a == b),
        ("Eq", [Value::Section(i), Value::Section(j)]) => {
            let (a, b) = (&ctx.sections[*i], &ctx.sections[*j]);
            let coords = a.len().max(b.len());
            let bad = filter(&|t| (0..coords).any(|c| a.value(c, t) != b.value(c, t)));
            filter(&|r| basis.down(r).is_disjoint(&bad))
        }
        ("Leq", [Value::Nat(a), Value::Nat(b)]) => constant(a <= b),
        ("Leq", [Value::Seq(a), Value::Seq(b)]) => constant(a.extends(b)),
        ("Prefix", [Value::Section(i), Value::Seq(u)]) => {
            let a = &ctx.sections[*i];
            filter(&|r| a.passes_at(r, &u.0))
        }
        ("App", [Value::Section(i), Value::Nat(k), Value::Nat(m)]) => {
            let a = &ctx.sections[*i];
            filter(&|r| a.value(*k as usize, r) == Some(*m))
        }
        ("Eq" | "Leq" | "Prefix" | "App", _) => return Err(sort_mismatch(name, &vals)),
        (other, _) => {
            let pred = ctx.atoms.get(other)?;
            let spatial = matches!(pred, Pred::Pointwise(_))
                || vals.iter().any(|v| matches!(v, Value::Section(_)));
            if spatial {
                let bad = ElemSet::from_elems(
                    n,
                    ctx.points
                        .iter()
                        .enumerate()
                        .filter(|(k, (e, _))| !pred.eval(*k, &data_at(ctx, &vals, *e)))
                        .map(|(_, (e, _))| *e),
                );
                filter(&|r| basis.down(r).is_disjoint(&bad))
            } else {
                constant(pred.eval(0, &data_at(ctx, &vals, Elem(0))))
            }
        }
    })
}

impl Pred {
    fn eval(&self, point: usize, data: &[Datum]) -> bool {
        match self {
            Pred::Pure(f) => f(data),
            Pred::Pointwise(f) => f(point, data),
        }
    }
}

fn data_at(ctx: &ForcingContext, vals: &[Value], point: Elem) -> Vec<Datum> {
    vals.iter()
        .map(|v| match v {
            Value::Nat(n) => Datum::Nat(*n),
            Value::Seq(u) => Datum::Seq(u.0.clone()),
            Value::Section(i) => Datum::Seq(ctx.sections[*i].reading(point)),
        })
        .collect()
}

/// `{r : r ⊩ φ}`, or `None` when the step budget runs out.
pub fn forced_set(
    ctx: &ForcingContext,
    phi: &Formula,
    env: &Env,
    fuel: Fuel,
) -> Result<Option<ElemSet>> {
    ctx.check_sorts(phi, env)?;
    let mut ev = Eval::new(ctx, fuel);
    match ev.set(phi, &mut env.clone()) {
        Ok(s) => Ok(Some(s)),
        Err(Stop::Fuel) => Ok(None),
        Err(Stop::Fail(e)) => Err(e),
    }
}

/// `p ⊩ φ` under `env`. Fuel bounds the number of subformula evaluations.
pub fn force(
    ctx: &ForcingContext,
    p: Elem,
    phi: &Formula,
    env: &Env,
    fuel: Fuel,
) -> Result<ForceVerdict> {
    ctx.space.basis().check(p)?;
    let Some(set) = forced_set(ctx, phi, env, fuel)? else {
        return Ok(ForceVerdict::FailsWithinFuel { exhausted: true });
    };
    if !set.contains(p) {
        return Ok(ForceVerdict::FailsWithinFuel { exhausted: false });
    }
    let mut ev = Eval::new(ctx, Fuel(usize::MAX));
    match ev.derive(phi, &mut env.clone(), p) {
        Ok(d) => Ok(ForceVerdict::Holds(d)),
        Err(Stop::Fail(e)) => Err(e),
        Err(Stop::Fuel) => unreachable!("unbounded budget"),
    }
}

/// Rechecks a derivation of `p ⊩ φ`: covers are re-tested, witnesses must lie
/// in their domains, and recheck nodes are recomputed.
pub fn check_derivation(
    ctx: &ForcingContext,
    p: Elem,
    phi: &Formula,
    env: &Env,
    d: &Derivation,
) -> bool {
    let mut ev = Eval::new(ctx, Fuel(usize::MAX));
    recheck(&mut ev, p, phi, &mut env.clone(), d).unwrap_or(false)
}

fn recheck(
    ev: &mut Eval<'_>,
    p: Elem,
    phi: &Formula,
    env: &mut Env,
    d: &Derivation,
) -> std::result::Result<bool, Stop> {
    let ctx = ev.ctx;
    let basis = ctx.space.basis();
    let covers = |gens: &[Elem]| -> bool {
        gens.iter().all(|&g| basis.leq(g, p)) && ctx.space.covered_by(p, &basis.downset(gens))
    };
    Ok(match (phi, d) {
        (Formula::Bot, Derivation::Bot { at }) => {
            *at == p && ctx.space.covered_by(p, &basis.empty_set())
        }
        (Formula::Atom { name, args }, Derivation::Atom { at }) => {
            *at == p && atom_set(ctx, name, args, env)?.contains(p)
        }
        (Formula::And(a, b), Derivation::And(da, db)) => {
            recheck(ev, p, a, env, da)? && recheck(ev, p, b, env, db)?
        }
        (Formula::Or(a, b), Derivation::Or { at, pieces }) => {
            let gens: Vec<Elem> = pieces.iter().map(|x| x.at).collect();
            if *at != p || !covers(&gens) {
                return Ok(false);
            }
            for piece in pieces {
                let side = if piece.left { a } else { b };
                if !recheck(ev, piece.at, side, env, &piece.proof)? {
                    return Ok(false);
                }
            }
            true
        }
        (Formula::Exists { var, sort, body }, Derivation::Exists { at, pieces }) => {
            let gens: Vec<Elem> = pieces.iter().map(|x| x.at).collect();
            if *at != p || !covers(&gens) {
                return Ok(false);
            }
            let dom = ctx.domain(*sort)?;
            for piece in pieces {
                if !dom.contains(&piece.witness) {
                    return Ok(false);
                }
                env.push((var.clone(), piece.witness.clone()));
                let ok = recheck(ev, piece.at, body, env, &piece.proof);
                env.pop();
                if !ok? {
                    return Ok(false);
                }
            }
            true
        }
        (Formula::Imp(..) | Formula::Forall { .. }, Derivation::Recheck { at }) => {
            *at == p && ev.set(phi, env)?.contains(p)
        }
        _ => false,
    })
}

/// Direct two-valued evaluation at the minimal point `ctx.points()[k]`, with
/// every section replaced by its reading there.
pub fn classical_eval(ctx: &ForcingContext, k: usize, phi: &Formula, env: &Env) -> Result<bool> {
    ctx.check_sorts(phi, env)?;
    if k >= ctx.points.len() {
        return Err(Error::Input(format!("no minimal point #{k}")));
    }
    classical(ctx, k, phi, &mut env.clone())
}

fn classical(ctx: &ForcingContext, k: usize, phi: &Formula, env: &mut Env) -> Result<bool> {
    let point = ctx.points[k].0;
    Ok(match phi {
        Formula::Bot => false,
        Formula::Atom { name, args } => {
            let vals = args
                .iter()
                .map(|t| term_value(ctx, t, env))
                .collect::<Result<Vec<_>>>()?;
            let data = data_at(ctx, &vals, point);
            match (name.as_str(), data.as_slice()) {
                ("Eq", [a, b]) => a == b,
                ("Leq", [Datum::Nat(a), Datum::Nat(b)]) => a <= b,
                ("Leq", [Datum::Seq(a), Datum::Seq(b)]) => a.starts_with(b),
                ("Prefix", [Datum::Seq(alpha), Datum::Seq(u)]) => alpha.starts_with(u),
                ("App", [Datum::Seq(alpha), Datum::Nat(i), Datum::Nat(m)]) => {
                    alpha.get(*i as usize) == Some(m)
                }
                ("Eq" | "Leq" | "Prefix" | "App", _) => return Err(sort_mismatch(name, &vals)),
                (other, d) => ctx.atoms.get(other)?.eval(k, d),
            }
        }
        Formula::And(a, b) => classical(ctx, k, a, env)? && classical(ctx, k, b, env)?,
        Formula::Or(a, b) => classical(ctx, k, a, env)? || classical(ctx, k, b, env)?,
        Formula::Imp(a, b) => !classical(ctx, k, a, env)? || classical(ctx, k, b, env)?,
        Formula::Exists { var, sort, body } | Formula::Forall { var, sort, body } => {
            let universal = matches!(phi, Formula::Forall { .. });
            for x in ctx.domain(*sort)? {
                env.push((var.clone(), x));
                let r = classical(ctx, k, body, env);
                env.pop();
                if r? != universal {
                    return Ok(!universal);
                }
            }
            universal
        }
    })
}
