//! Brouwer trees as covers of Baire space, and the labelled-tree sheaf laws.

use formtop::brouwer::{alt_baire_equiv_check, bo_sheaf_checks, is_basic_cover, k_map, BrouwerTree};
use formtop::spaces::TruncatedSpace;

fn main() -> formtop::Result<()> {
    let trees = BrouwerTree::enumerate(2, 2);
    println!("{} trees of height at most 2 over branching 2", trees.len());
    for t in trees.iter().take(4) {
        let k = k_map(t, 2)?;
        let shown: Vec<String> = k.iter().map(|u| u.to_string()).collect();
        println!("  height {}: k = {{{}}} basic cover: {}", t.height(), shown.join(" "), is_basic_cover(2, &k));
    }

    let alt = alt_baire_equiv_check(2, 2)?;
    println!("alternative cover relation agrees: {} ({} sieves)", alt.holds(), alt.instances);

    let laws = bo_sheaf_checks(TruncatedSpace::cantor(1).space(), 2, 2, 100_000)?;
    for l in &laws.laws {
        println!("  {}: {} instances, {} failures", l.law, l.instances, l.failures.len());
    }
    Ok(())
}
