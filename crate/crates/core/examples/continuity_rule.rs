//! Extracts a function and modulus from the shift relation and from a discontinuous one.

use formtop::rules::{continuity_rule, RelationTable};
use formtop::site::Fuel;

fn main() -> formtop::Result<()> {
    let shift = RelationTable::shift(2, 2);
    let t = continuity_rule(&shift, Fuel(10_000_000))?;
    for o in &t.points {
        println!("f({}) = {:?}, modulus {:?}", o.point, o.f, o.modulus);
    }
    println!("transcript rechecks: {}", t.recheck(&shift, Fuel(10_000_000)).is_empty());

    // depends on the whole tail, so no finite modulus exists
    let tail = RelationTable::from_function("eventually one", 2, 1, |a| {
        vec![u32::from(a.canonical().tail == 1)]
    });
    match continuity_rule(&tail, Fuel(10_000_000)) {
        Ok(_) => println!("unexpected modulus"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
