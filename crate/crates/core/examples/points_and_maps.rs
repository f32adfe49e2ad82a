//! Points of truncated Cantor space as filters, and continuous maps built from them.

use std::sync::Arc;

use formtop::maps::ContinuousMap;
use formtop::points::{is_point, leaf_points, point_members};
use formtop::spaces::TruncatedSpace;

fn main() -> formtop::Result<()> {
    let ts = Arc::new(TruncatedSpace::cantor(3));
    let space = ts.space_arc();
    for p in leaf_points(&ts, 1).iter().take(4) {
        let members = point_members(&ts, p)?;
        let labels: Vec<String> = members.iter().map(|e| ts.seq(e).to_string()).collect();
        println!("{p}: {} ({})", labels.join(" "), if is_point(&space, &members).holds() { "point" } else { "not a point" });
        let map = ContinuousMap::from_point(Arc::clone(&space), &members);
        println!("  as a map from the one-point space: {:?}", map.check());
    }
    let id = ContinuousMap::identity(Arc::clone(&space));
    let twice = id.compose(&id)?;
    println!("identity composes to itself: {}", twice.same_graph(&id));
    Ok(())
}
