//! Tabulates the natural-number sheaf on truncated Cantor space and checks the sheaf laws.

use formtop::sheaves::{
    all_covers, global_sections_vs_maps, nat_sheaf, pure_density_check, sheaf_check,
    FinitePresheaf,
};
use formtop::spaces::{seq, TruncatedSpace};

fn main() -> formtop::Result<()> {
    let ts = TruncatedSpace::cantor(2);
    let nat = nat_sheaf(ts.space_arc(), 2)?;
    let table = FinitePresheaf::tabulate(&nat)?;
    let root = ts.elem(&seq(&[]))?;
    println!("sections over the whole space: {}", table.count(root));
    println!("presheaf laws: {:?}", table.check_laws());
    println!("gluing on every cover: {:?}", sheaf_check(&table, &all_covers(ts.space())));
    println!("pure sections dense: {:?}", pure_density_check(&nat, root));
    println!("global sections vs maps: {:?}", global_sections_vs_maps(&nat, root));
    Ok(())
}
