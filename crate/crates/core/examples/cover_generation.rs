//! Generates a formal topology from a small covering system and checks its axioms.

use formtop::site::{check_topology, generate_topology, Basis, CoveringSystem, Elem, Fuel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // top ≥ left, right ≥ bottom
    let labels = ["top", "left", "right", "bottom"].map(String::from).to_vec();
    let basis = Basis::from_relation(
        labels,
        vec![(Elem(1), Elem(0)), (Elem(2), Elem(0)), (Elem(3), Elem(1)), (Elem(3), Elem(2))],
    )?;
    let families = vec![vec![vec![Elem(1), Elem(2)]], vec![], vec![], vec![]];
    let cs = CoveringSystem::new(basis, families)?.repair_axiom();
    let space = generate_topology(&cs)?;

    let b = space.basis();
    for a in b.elems() {
        let covers = space.minimal_covers(a, 1024).unwrap_or_default();
        let shown: Vec<String> = covers
            .iter()
            .map(|s| {
                let gens: Vec<&str> = b.maximal(s).into_iter().map(|g| b.label(g)).collect();
                format!("{{{}}}", gens.join(","))
            })
            .collect();
        println!("{:>6}: {}", b.label(a), shown.join(" "));
    }

    let report = check_topology(&space, Fuel(100_000), 4096)?;
    println!("axioms hold: {} ({} instances)", report.holds(), report.instances);
    Ok(())
}
