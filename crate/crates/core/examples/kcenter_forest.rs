//! Greedy k-center partition and the exact MST inside each component.

use metric_forest::forest::covering_radius;
use metric_forest::prelude::*;

fn main() -> Result<()> {
    let (n, t) = (3000, 24);
    let space = MetricSpace::new(uniform_cloud(n, 3, 5)?, MetricKind::Euclidean)?;

    let partition = greedy_k_center(&space, t, 5)?;
    let init = space.ledger().init_partition;
    let forest = component_msts(&space, &partition)?;

    let mut sizes = partition.sizes();
    sizes.sort_unstable();
    println!("k-center with t = {t} on n = {n}");
    println!("  queries: {init} (budget n*t = {})", n * t);
    println!("  component sizes: min {} median {} max {}", sizes[0], sizes[t / 2], sizes[t - 1]);
    println!("  centers: {:?}...", &partition.representatives().unwrap()[..6]);
    println!("  covering radius: {:.4}", covering_radius(&space, &partition).unwrap());
    println!("  forest: {} edges, weight {:.4}", forest.edges().count(), forest.total_weight);
    println!("  sub-MST queries: {}", space.ledger().sub_mst);
    Ok(())
}
