use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use formtop::forcing::{forced_set, parse_formula, Env, ForcingContext};
use formtop::io::Report;
use formtop::points::Point;
use formtop::rules::fan_rule;
use formtop::sheaves::nat_sheaf;
use formtop::site::{check_topology, generate_topology, Elem, Fuel};
use formtop::spaces::{Bar, FinSeq, TruncatedSpace};
use formtop::suites::{
    cantor_double, random_covering_system, random_formula, random_front,
    random_inductive_definition,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn double_ctx() -> &'static ForcingContext {
    static CTX: OnceLock<ForcingContext> = OnceLock::new();
    CTX.get_or_init(|| {
        let d = cantor_double(2).unwrap();
        ForcingContext::on_double(&d, 3, 2).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn finseq_labels_round_trip(v in prop::collection::vec(0u32..100, 0..8)) {
        let u = FinSeq(v);
        prop_assert_eq!(FinSeq::parse_label(&u.label()).unwrap(), u);
    }

    #[test]
    fn canonical_points_are_idempotent_and_equal(
        prefix in prop::collection::vec(0u32..3, 0..6),
        tail in 0u32..3,
    ) {
        let a = Point::new(&prefix, tail);
        let c = a.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        for i in 0..prefix.len() + 3 {
            prop_assert_eq!(a.at(i), c.at(i));
        }
        for n in 0..prefix.len() + 3 {
            prop_assert!(a.passes(&a.initial(n)));
        }
    }

    #[test]
    fn generated_topologies_satisfy_the_axioms(seed in any::<u64>()) {
        let cs = random_covering_system(&mut rng(seed), 6);
        let space = generate_topology(&cs).unwrap();
        let report = check_topology(&space, Fuel(100_000), 4096).unwrap();
        prop_assert!(report.holds(), "{:?}", report.violations);
    }

    #[test]
    fn covering_is_reflexive_and_upward_closed(seed in any::<u64>(), extra in any::<u64>()) {
        let cs = random_covering_system(&mut rng(seed), 6);
        let space = generate_topology(&cs).unwrap();
        let b = space.basis();
        for a in b.elems() {
            prop_assert!(space.covered_by(a, b.down(a)));
            let mut bigger = b.empty_set();
            for (i, e) in b.elems().enumerate() {
                if extra >> (i % 64) & 1 == 1 {
                    bigger.insert(e);
                }
            }
            let small = b.down_closure(&bigger);
            let mut large = small.clone();
            large.union_with(b.down(a));
            if space.covered_by(a, &small) {
                prop_assert!(space.covered_by(a, &large));
            }
        }
    }

    #[test]
    fn closure_is_extensive_idempotent_and_monotone(seed in any::<u64>(), bits in any::<u16>()) {
        let mut r = rng(seed);
        let def = random_inductive_definition(&mut r, 10);
        let u: BTreeSet<usize> = (0..10).filter(|i| bits >> i & 1 == 1).collect();
        let mut v = u.clone();
        v.extend((0..10).filter(|i| bits >> (i + 6) & 1 == 1));
        let cu = def.close(&u).unwrap();
        prop_assert!(u.is_subset(&cu));
        prop_assert_eq!(def.close(&cu).unwrap(), cu.clone());
        prop_assert!(cu.is_subset(&def.close(&v).unwrap()));
    }

    #[test]
    fn formulas_survive_printing(seed in any::<u64>()) {
        let phi = random_formula(&mut rng(seed), 3, 4, 2, 2);
        prop_assert_eq!(parse_formula(&phi.to_string()).unwrap(), phi);
    }

    #[test]
    fn forced_sets_are_local_downsets(seed in any::<u64>()) {
        let ctx = double_ctx();
        let phi = random_formula(&mut rng(seed), 2, 3, 2, 2);
        let set = forced_set(ctx, &phi, &Env::new(), Fuel(5_000_000)).unwrap().unwrap();
        let space = ctx.space();
        prop_assert!(space.basis().is_downset(&set));
        for a in space.basis().elems() {
            if space.covered_by(a, &set) {
                prop_assert!(set.contains(a), "{} covered but not forced", space.basis().label(a));
            }
        }
    }

    #[test]
    fn fan_bound_is_at_least_the_uniform_depth(seed in any::<u64>()) {
        let ts = Arc::new(TruncatedSpace::cantor(4));
        let front = random_front(&mut rng(seed), &ts, 0.4);
        let bar = Bar::from_generators(Arc::clone(&ts), &front, true, false).unwrap();
        let (n, t) = fan_rule(&bar, Fuel(10_000_000)).unwrap();
        prop_assert!(n >= bar.minimal_uniform_depth().unwrap());
        prop_assert!(ts.level(n).iter().all(|v| bar.holds(v)));
        prop_assert!(t.recheck(&bar).is_empty());
    }

    #[test]
    fn restriction_of_sections_composes(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let ts = TruncatedSpace::cantor(2);
        let nat = nat_sheaf(ts.space_arc(), 2).unwrap();
        let b = ts.space().basis();
        let mut r = rng(seed);
        let p = Elem(r.gen_range(0..ts.len()));
        let q = *b.down(p).to_vec().choose(&mut r).unwrap();
        let s = *b.down(q).to_vec().choose(&mut r).unwrap();
        for sec in nat.enumerate(p) {
            prop_assert!(sec.restrict(ts.space(), q).restrict(ts.space(), s) == sec.restrict(ts.space(), s));
        }
    }

    #[test]
    fn reports_round_trip_through_json(names in prop::collection::vec("[a-z ]{0,12}", 0..5), pass in any::<bool>()) {
        let mut r = Report::new("check", &serde_json::json!({"seed": 1}));
        for n in &names {
            r.verdict(n, pass, n.clone());
            r.witness(n);
        }
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        prop_assert_eq!(back, r);
    }
}
