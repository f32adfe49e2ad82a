mod common;

use std::sync::Arc;

use formtop::double::DoubleSpace;
use formtop::forcing::{forced_set, parse_formula, Env, ForcingContext};
use formtop::points::Point;
use formtop::site::Fuel;
use formtop::spaces::TruncatedSpace;
use formtop::suites::{cantor_double, random_formula};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::KripkeJoyal;

const FUEL: Fuel = Fuel(50_000_000);

fn agree_on_random_formulas(ctx: &ForcingContext, seed: u64, n: usize, nmax: u32, len: usize) {
    let branch = ctx.branch();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let phi = random_formula(&mut rng, 4, nmax, branch, len);
        let lib = forced_set(ctx, &phi, &Env::new(), FUEL).unwrap().expect("within fuel");
        let oracle = KripkeJoyal::new(ctx).forced_set(&phi);
        assert_eq!(lib, oracle, "disagreement on {phi}");
    }
}

#[test]
fn matches_oracle_on_cantor_double() {
    let ctx = ForcingContext::on_double(&cantor_double(3).unwrap(), 8, 3).unwrap();
    agree_on_random_formulas(&ctx, 11, 150, 8, 3);
}

#[test]
fn matches_oracle_on_baire_double() {
    let inner = Arc::new(TruncatedSpace::baire(3, 2));
    let pts = [Point::constant(0), Point::constant(2), Point::new(&[1], 0)];
    let d = DoubleSpace::build(inner, &pts).unwrap();
    let ctx = ForcingContext::on_double(&d, 4, 2).unwrap();
    agree_on_random_formulas(&ctx, 12, 100, 4, 2);
}

#[test]
fn excluded_middle_holds_by_local_character() {
    let d = cantor_double(2).unwrap();
    let ctx = ForcingContext::on_double(&d, 2, 2).unwrap();
    let top = d.d(d.inner().root());
    let atom = parse_formula("Prefix(pi, <0>)").unwrap();
    let neg = parse_formula("Prefix(pi, <0>) -> false").unwrap();
    let lem = parse_formula("Prefix(pi, <0>) | (Prefix(pi, <0>) -> false)").unwrap();
    let mut kj = KripkeJoyal::new(&ctx);
    assert!(!kj.forced_set(&atom).contains(top));
    assert!(!kj.forced_set(&neg).contains(top));
    // The cover {D(0), D(1)} decides the first entry.
    let set = kj.forced_set(&lem);
    assert_eq!(set.len(), d.len());
    assert_eq!(forced_set(&ctx, &lem, &Env::new(), FUEL).unwrap().unwrap(), set);
}

#[test]
fn double_negation_of_excluded_middle_is_forced_everywhere() {
    let d = cantor_double(2).unwrap();
    let ctx = ForcingContext::on_double(&d, 2, 2).unwrap();
    let phi =
        parse_formula("((Prefix(pi, <0,1>) | (Prefix(pi, <0,1>) -> false)) -> false) -> false").unwrap();
    let set = KripkeJoyal::new(&ctx).forced_set(&phi);
    assert_eq!(set.len(), d.len());
    assert_eq!(forced_set(&ctx, &phi, &Env::new(), FUEL).unwrap().unwrap(), set);
}
