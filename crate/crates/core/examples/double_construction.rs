//! Doubles truncated Cantor space over four points and inspects the structure maps.

use std::sync::Arc;

use formtop::double::DoubleSpace;
use formtop::points::Point;
use formtop::site::check_topology;
use formtop::site::Fuel;
use formtop::spaces::{seq, TruncatedSpace};

fn main() -> formtop::Result<()> {
    let inner = Arc::new(TruncatedSpace::cantor(2));
    let points = [
        Point::constant(0),
        Point::constant(1),
        Point::new(&[0], 1),
        Point::new(&[1], 0),
    ];
    let d = DoubleSpace::build(inner, &points)?;
    println!("{} opens: {} from D(u), {} singletons", d.len(), d.inner_len(), d.points().len());

    let b = d.basis();
    let root = d.d_of(&seq(&[]))?;
    for (i, p) in d.points().iter().enumerate() {
        let s = d.singleton(i);
        println!("{p}: {} below {}", b.label(s), b.label(root));
    }
    for (name, m) in [("mu", d.mu()), ("pi", d.pi()), ("nu", d.nu())] {
        println!("{name} continuous: {}", m.check().holds());
    }
    let report = check_topology(d.space(), Fuel(100_000), 4096)?;
    println!("axioms hold: {}", report.holds());
    Ok(())
}
