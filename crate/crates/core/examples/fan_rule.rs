//! Extracts a uniform bound from a decidable bar over Cantor space.

use std::sync::Arc;

use formtop::rules::fan_rule;
use formtop::site::Fuel;
use formtop::spaces::{seq, Bar, TruncatedSpace};

fn main() -> formtop::Result<()> {
    let ts = Arc::new(TruncatedSpace::cantor(5));
    let gens = [seq(&[0, 0]), seq(&[0, 1, 0]), seq(&[0, 1, 1]), seq(&[1])];
    let bar = Bar::from_generators(ts, &gens, true, false)?;
    let (n, t) = fan_rule(&bar, Fuel(10_000_000))?;
    println!("every sequence of length {n} is in the bar (cover depth {})", t.cover_depth);
    for s in &t.stages {
        println!("  {} via {} at {}", s.v, s.witness, s.point);
    }
    println!("transcript rechecks: {}", t.recheck(&bar).is_empty());
    Ok(())
}
