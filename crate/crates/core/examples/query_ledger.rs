//! Every distance call is charged to a pipeline stage.

use metric_forest::prelude::*;

fn main() -> Result<()> {
    let n = 1000;
    let space = MetricSpace::new(uniform_cloud(n, 2, 0)?, MetricKind::Euclidean)?;
    let t = 20;
    let partition = greedy_k_center(&space, t, 0)?;
    let forest = component_msts(&space, &partition)?;
    mfc_approx(&space, &forest, RepresentativePolicy::KeepExisting, true)?;
    exact_metric_mst(&space, DEFAULT_N_CAP)?;

    let ledger = space.ledger();
    for stage in Stage::ALL {
        println!("{:<16} {:>9}", stage.label(), ledger.get(stage));
    }
    println!("{:<16} {:>9}", "total", ledger.total);
    let sub: usize = partition.sizes().iter().map(|s| s * (s - 1) / 2).sum();
    println!();
    println!("expected: k-center <= {}, sub-MST = {sub}, coarsen = {} + {}, exact = {}",
        n * t, n * (t - 1), t * (t - 1) / 2, n * (n - 1) / 2);
    Ok(())
}
