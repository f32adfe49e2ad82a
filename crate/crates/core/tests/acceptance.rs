//! Runs the twelve acceptance criteria and prints one line per criterion.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use formtop::forcing::{classical_eval, force, forced_set, Env, ForcingContext};
use formtop::site::Fuel;
use formtop::spaces::{Bar, CantorVerdict, FinSeq, TruncatedSpace};
use formtop::suites::{cantor_double, random_formula, random_front, random_inductive_definition, run_suite};
use formtop::rules::fan_rule;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_min_witness, brute_uniform_depth, KripkeJoyal};

const SEED: u64 = 1;
const FUEL: Fuel = Fuel(50_000_000);

struct Outcome {
    pass: bool,
    detail: String,
}

fn suite(name: &str, samples: Option<usize>) -> Outcome {
    match run_suite(name, SEED, samples) {
        Ok(r) => {
            let failing: Vec<String> = r
                .verdicts
                .iter()
                .filter(|v| !v.pass)
                .map(|v| format!("{}: {}", v.name, v.detail))
                .collect();
            Outcome {
                pass: failing.is_empty(),
                detail: if failing.is_empty() {
                    format!("{} verdicts pass", r.verdicts.len())
                } else {
                    failing.join("; ")
                },
            }
        }
        Err(e) => Outcome {
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn both(a: Outcome, b: Outcome) -> Outcome {
    Outcome {
        pass: a.pass && b.pass,
        detail: format!("{}; {}", a.detail, b.detail),
    }
}

fn cantor_oracle() -> Outcome {
    let ts = Arc::new(TruncatedSpace::cantor(4));
    let level = ts.level(3).to_vec();
    let mut bad = 0;
    for mask in 0u32..256 {
        let gens: Vec<FinSeq> = (0..8).filter(|i| mask >> i & 1 == 1).map(|i| level[i].clone()).collect();
        let bar = Bar::from_generators(Arc::clone(&ts), &gens, true, false).unwrap();
        let sieve = ts.sieve(&FinSeq::empty(), &gens).unwrap();
        let got = match ts.cantor_cover_test(&FinSeq::empty(), &sieve).unwrap() {
            CantorVerdict::Covered(q) => Some(q),
            CantorVerdict::NotCovered { .. } => None,
        };
        if got != brute_uniform_depth(&bar) {
            bad += 1;
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("oracle: {bad} of 256 bars disagree"),
    }
}

fn forcing_oracle() -> Outcome {
    let ctx = ForcingContext::on_double(&cantor_double(3).unwrap(), 8, 3).unwrap();
    let b = ctx.space().basis();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = 0;
    for _ in 0..200 {
        let phi = random_formula(&mut rng, 4, 8, 2, 3);
        let oracle = KripkeJoyal::new(&ctx).forced_set(&phi);
        let lib = forced_set(&ctx, &phi, &Env::new(), FUEL).unwrap();
        let monotone = oracle.iter().all(|p| b.down(p).is_subset(&oracle));
        let local = b
            .elems()
            .all(|p| oracle.contains(p) || !ctx.space().covered_by(p, &oracle.intersection(b.down(p))));
        if lib.as_ref() != Some(&oracle) || !monotone || !local {
            bad += 1;
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("oracle: {bad} of 200 formulas fail"),
    }
}

fn truth_oracle() -> Outcome {
    let ctx = ForcingContext::on_double(&cantor_double(3).unwrap(), 8, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let (mut n, mut bad) = (0, 0);
    for (k, (q, _)) in ctx.points().iter().enumerate() {
        for _ in 0..200 {
            let phi = random_formula(&mut rng, 4, 8, 2, 3);
            let lib = force(&ctx, *q, &phi, &Env::new(), FUEL).unwrap().holds();
            let oracle = KripkeJoyal::new(&ctx).forces(*q, &phi, &mut Env::new());
            let truth = classical_eval(&ctx, k, &phi, &Env::new()).unwrap();
            n += 1;
            if lib != truth || oracle != truth {
                bad += 1;
            }
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("oracle: {bad} of {n} disagree"),
    }
}

fn fan_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut bad = 0;
    for i in 0..50 {
        let depth = rng.gen_range(1..=5);
        let ts = Arc::new(TruncatedSpace::cantor(depth));
        let uniform = i % 2 == 0;
        let gens = if uniform {
            ts.level(rng.gen_range(0..=depth)).to_vec()
        } else {
            random_front(&mut rng, &ts, 0.35)
        };
        let bar = Bar::from_generators(Arc::clone(&ts), &gens, true, false).unwrap();
        let (n, t) = fan_rule(&bar, FUEL).unwrap();
        let all = ts.seqs().iter().filter(|v| v.len() == n).all(|v| bar.holds(v));
        let exact = !uniform || brute_uniform_depth(&bar) == Some(n);
        if !all || !exact || !t.recheck(&bar).is_empty() {
            bad += 1;
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("oracle: {bad} of 50 bars fail"),
    }
}

fn compactness_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let (mut n, mut bad) = (0, 0);
    for _ in 0..100 {
        let carrier = rng.gen_range(1..=6);
        let def = random_inductive_definition(&mut rng, carrier);
        let u: BTreeSet<usize> = (0..carrier).filter(|_| rng.gen_bool(0.5)).collect();
        for a in 0..carrier {
            let want = brute_min_witness(&def, &u, a);
            match (def.set_compactness_witness(&u, a), want) {
                (Ok(v), Some(size)) => {
                    n += 1;
                    let valid = v.is_subset(&u) && common::brute_closure(&def, &v).contains(&a);
                    if !valid || v.len() != size {
                        bad += 1;
                    }
                }
                (Err(_), None) => {}
                _ => bad += 1,
            }
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("oracle: {bad} failures over {n} witnesses"),
    }
}

fn run_cli(args: &[&str]) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_formtop"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let bar = dir.path().join("bar.json");
    std::fs::write(
        &bar,
        r#"{"kind":"cantor","branch":2,"depth":3,"bar":[[0,0,0],[0,0,1],[0,1,0],[0,1,1],[1,0,0],[1,0,1],[1,1,0],[1,1,1]],"monotone":true,"inductive":false}"#,
    )
    .unwrap();
    let bar = bar.to_str().unwrap().to_string();
    let runs: Vec<Vec<&str>> = vec![
        vec!["check", "all", "--seed", "7"],
        vec!["check", "forcing", "--seed", "3", "--samples", "50"],
        vec!["fan", "--bar", &bar, "--depth", "4"],
        vec!["bar", "--bar", &bar],
        vec!["continuity", "--relation", "shift"],
        vec!["force", "--formula", "exists n:Nat. App(pi, 0, n)", "--depth", "2"],
    ];
    let mut bad = Vec::new();
    for args in &runs {
        let first = run_cli(args);
        let second = run_cli(args);
        if first != second || first.0.is_empty() {
            bad.push(args.join(" "));
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{} commands byte-identical across two runs", runs.len())
        } else {
            format!("differing: {}", bad.join(", "))
        },
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if let Some(l) = limit {
        if took > l {
            o.pass = false;
            o.detail = format!("{} (over the {}s limit)", o.detail, l.as_secs());
        }
    }
    (o, took)
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: Vec<(&str, Option<Duration>, Box<dyn FnOnce() -> Outcome>)> = vec![
        ("topology axioms on 200 covering systems", secs(60), Box::new(|| suite("topology", Some(200)))),
        ("Cantor compactness on 256 bars", secs(30), Box::new(|| both(suite("cantor", None), cantor_oracle()))),
        ("forcing lemma on 200 formulas", None, Box::new(|| both(suite("forcing", Some(200)), forcing_oracle()))),
        ("truth at minimal points", None, Box::new(|| both(suite("truth", Some(200)), truth_oracle()))),
        ("fan rule on 50 bars", secs(120), Box::new(|| both(suite("fan", Some(50)), fan_oracle()))),
        ("bar rule on 20 inductive bars", None, Box::new(|| suite("bar", Some(20)))),
        ("continuity rule", None, Box::new(|| suite("continuity", Some(10)))),
        ("sheaf laws", None, Box::new(|| suite("sheaves", None))),
        ("countable choice refinements", None, Box::new(|| suite("cc", Some(100)))),
        ("Brouwer ordinals", None, Box::new(|| suite("brouwer", None))),
        ("set compactness", None, Box::new(|| both(suite("compactness", Some(100)), compactness_oracle()))),
        ("CLI determinism", None, Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let (o, took) = timed(limit, run);
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<42} {} ({:.2}s) {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            o.detail
        );
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
