//! Concludes the root from a monotone inductive bar over truncated Baire space.

use std::sync::Arc;

use formtop::rules::bar_rule;
use formtop::site::Fuel;
use formtop::spaces::{Bar, TruncatedSpace};

fn main() -> formtop::Result<()> {
    let ts = Arc::new(TruncatedSpace::baire(3, 3));
    // a sequence is secured once it contains a 2; the inductive closure adds
    // every node all of whose children are secured
    let front = Bar::new(Arc::clone(&ts), |u| u.0.contains(&2) || u.len() == 3, true, false)?;
    let members = ts.inductive_closure(front.members());
    let bar = Bar::from_members(Arc::clone(&ts), members, true, true)?;
    let t = bar_rule(&bar, Fuel(10_000_000))?;
    println!("phi(<>) = {}", t.conclusion);
    println!("cover of {} pieces, {} induction steps", t.cover.len(), t.induction.steps.len());
    println!("transcript rechecks: {}", t.recheck(&bar).is_empty());
    Ok(())
}
