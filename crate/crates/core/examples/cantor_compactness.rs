//! Decides covers of truncated Cantor space and reports the uniform depth.

use formtop::spaces::{seq, CantorVerdict, TruncatedSpace};

fn main() -> formtop::Result<()> {
    let ts = TruncatedSpace::cantor(4);
    let root = seq(&[]);
    let cases = [
        vec![seq(&[0]), seq(&[1, 0]), seq(&[1, 1])],
        vec![seq(&[0, 0]), seq(&[0, 1, 1]), seq(&[1])],
        vec![seq(&[0]), seq(&[1, 1])],
    ];
    for gens in &cases {
        let sieve = ts.sieve(&root, gens)?;
        let shown: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        match ts.cantor_cover_test(&root, &sieve)? {
            CantorVerdict::Covered(n) => println!("{} covers, uniformly at depth {n}", shown.join(" ")),
            CantorVerdict::NotCovered { frontier } => {
                let f: Vec<String> = frontier.iter().map(|u| u.to_string()).collect();
                println!("{} misses {}", shown.join(" "), f.join(" "));
            }
        }
    }
    Ok(())
}
