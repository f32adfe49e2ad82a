//! Forces formulas over the double of Cantor space and rechecks the derivations.

use formtop::forcing::{check_derivation, force, parse_formula, Env, ForceVerdict, ForcingContext};
use formtop::site::Fuel;
use formtop::spaces::seq;
use formtop::suites::cantor_double;

fn main() -> formtop::Result<()> {
    let d = cantor_double(3)?;
    let ctx = ForcingContext::on_double(&d, 4, 3)?;
    let top = d.d_of(&seq(&[]))?;
    let formulas = [
        "exists n:Nat. App(pi, 0, n)",
        "App(pi, 0, 0) | (App(pi, 0, 0) -> false)",
        "forall n:Nat. App(pi, 0, n) -> Leq(n, 1)",
        "Prefix(pi, <0,0>)",
    ];
    for text in formulas {
        let phi = parse_formula(text)?;
        match force(&ctx, top, &phi, &Env::new(), Fuel(10_000_000))? {
            ForceVerdict::Holds(der) => println!(
                "forced:     {phi}  ({} nodes, rechecks: {})",
                der.size(),
                check_derivation(&ctx, top, &phi, &Env::new(), &der)
            ),
            ForceVerdict::FailsWithinFuel { exhausted } => {
                println!("not forced: {phi}  (fuel exhausted: {exhausted})")
            }
        }
    }
    Ok(())
}
