//! Brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use formtop::forcing::{Env, ForcingContext, Formula, Term, Value};
use formtop::site::{Elem, ElemSet, InductiveDefinition};
use formtop::spaces::{Bar, FinSeq};

/// Forcing decided stage by stage from the Kripke-Joyal clauses, memoised on
/// (subformula, environment, stage). Shares no code with the library evaluator.
pub struct KripkeJoyal<'a> {
    ctx: &'a ForcingContext,
    memo: HashMap<(*const Formula, Vec<Value>, Elem), bool>,
}

impl<'a> KripkeJoyal<'a> {
    pub fn new(ctx: &'a ForcingContext) -> Self {
        KripkeJoyal {
            ctx,
            memo: HashMap::new(),
        }
    }

    pub fn forced_set(&mut self, phi: &Formula) -> ElemSet {
        let b = self.ctx.space().basis();
        let stages: Vec<Elem> = b.elems().collect();
        let hits: Vec<Elem> = stages
            .into_iter()
            .filter(|&r| self.forces(r, phi, &mut Env::new()))
            .collect();
        ElemSet::from_elems(b.len(), hits)
    }

    fn term(&self, t: &Term, env: &Env) -> Value {
        match t {
            Term::Var(v) => env.iter().rev().find(|(n, _)| n == v).expect("bound").1.clone(),
            Term::Num(n) => Value::Nat(*n),
            Term::Seq(s) => Value::Seq(FinSeq(s.clone())),
            Term::Pi => Value::Section(self.ctx.pi().expect("a double")),
            Term::Add(a, b) => match (self.term(a, env), self.term(b, env)) {
                (Value::Nat(x), Value::Nat(y)) => Value::Nat(x + y),
                _ => panic!("ill-sorted sum"),
            },
        }
    }

    fn atom(&self, r: Elem, name: &str, args: &[Term], env: &Env) -> bool {
        let sp = self.ctx.space();
        let secs = self.ctx.sections();
        let vals: Vec<Value> = args.iter().map(|t| self.term(t, env)).collect();
        match (name, vals.as_slice()) {
            ("Eq", [Value::Section(i), Value::Section(j)]) => {
                secs[*i].restrict(sp, r) == secs[*j].restrict(sp, r)
            }
            ("Eq", [a, b]) => a == b,
            ("Leq", [Value::Nat(a), Value::Nat(b)]) => a <= b,
            ("Leq", [Value::Seq(a), Value::Seq(b)]) => a.0.starts_with(&b.0),
            ("Prefix", [Value::Section(i), Value::Seq(u)]) => {
                u.0.iter().enumerate().all(|(k, &x)| secs[*i].value(k, r) == Some(x))
            }
            ("App", [Value::Section(i), Value::Nat(k), Value::Nat(m)]) => {
                secs[*i].value(*k as usize, r) == Some(*m)
            }
            _ => panic!("unsupported atom {name}"),
        }
    }

    /// `{s ≤ r : pred(s)}` closed downward, tested as a cover of `r`.
    fn covers(&mut self, r: Elem, mut pred: impl FnMut(&mut Self, Elem) -> bool) -> bool {
        let b = self.ctx.space().basis();
        let below: Vec<Elem> = b.down(r).iter().collect();
        let hits: Vec<Elem> = below.into_iter().filter(|&s| pred(self, s)).collect();
        let sieve = b.downset(hits.iter());
        self.ctx.space().covered_by(r, &sieve)
    }

    pub fn forces(&mut self, r: Elem, phi: &Formula, env: &mut Env) -> bool {
        let key = (phi as *const Formula, env.iter().map(|(_, v)| v.clone()).collect(), r);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let b = self.ctx.space().basis().clone();
        let v = match phi {
            Formula::Bot => self.ctx.space().covered_by(r, &b.empty_set()),
            Formula::Atom { name, args } => self.atom(r, name, args, env),
            Formula::And(x, y) => self.forces(r, x, env) && self.forces(r, y, env),
            Formula::Or(x, y) => {
                self.covers(r, |me, s| me.forces(s, x, env) || me.forces(s, y, env))
            }
            Formula::Imp(x, y) => b
                .down(r)
                .iter()
                .all(|s| !self.forces(s, x, env) || self.forces(s, y, env)),
            Formula::Exists { var, sort, body } => {
                let dom = self.ctx.domain(*sort).expect("domain");
                self.covers(r, |me, s| {
                    dom.iter().any(|x| {
                        env.push((var.clone(), x.clone()));
                        let h = me.forces(s, body, env);
                        env.pop();
                        h
                    })
                })
            }
            Formula::Forall { var, sort, body } => {
                let dom = self.ctx.domain(*sort).expect("domain");
                b.down(r).iter().all(|s| {
                    dom.iter().all(|x| {
                        env.push((var.clone(), x.clone()));
                        let h = self.forces(s, body, env);
                        env.pop();
                        h
                    })
                })
            }
        };
        self.memo.insert(key, v);
        v
    }
}

/// Least `q` such that every sequence of length `q` in the space satisfies the bar.
pub fn brute_uniform_depth(bar: &Bar) -> Option<usize> {
    let ts = bar.space();
    (0..=ts.depth()).find(|&q| {
        ts.seqs()
            .iter()
            .filter(|v| v.len() == q)
            .all(|v| bar.holds(v))
    })
}

/// Least closed superset of `u`, by iterating every rule to a fixed point.
pub fn brute_closure(def: &InductiveDefinition, u: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut s = u.clone();
    loop {
        let before = s.len();
        for r in def.rules() {
            if r.premises.iter().all(|p| s.contains(p)) {
                s.insert(r.conclusion);
            }
        }
        if s.len() == before {
            return s;
        }
    }
}

/// Size of the smallest subset of `u` whose closure contains `a`.
pub fn brute_min_witness(def: &InductiveDefinition, u: &BTreeSet<usize>, a: usize) -> Option<usize> {
    let pool: Vec<usize> = u.iter().copied().collect();
    (0u32..1 << pool.len())
        .map(|m| -> BTreeSet<usize> {
            (0..pool.len()).filter(|i| m >> i & 1 == 1).map(|i| pool[i]).collect()
        })
        .filter(|w| brute_closure(def, w).contains(&a))
        .map(|w| w.len())
        .min()
}
