//! Initial forests from connected components of the exact k-NN graph.
//!
//! Small k fragments the data; the number of components t is an output, not an input.

use metric_forest::prelude::*;

fn main() -> Result<()> {
    let mix = gaussian_mixture(12, 2, 80, 3)?;
    let space = MetricSpace::new(mix.dataset, MetricKind::Euclidean)?;
    let exact = exact_metric_mst(&space, DEFAULT_N_CAP)?;

    println!("{:>3} {:>5} {:>10} {:>8}", "k", "t", "cost", "gamma");
    for k in 1..=6 {
        let partition = knn_components(&space, k)?;
        let forest = component_msts(&space, &partition)?;
        let result = mfc_approx(&space, &forest, RepresentativePolicy::LowestIndex, false)?;
        let gamma = gamma_bound(&forest, &exact)?;
        println!(
            "{k:>3} {:>5} {:>10.4} {:>8}",
            partition.t(),
            result.full_tree.total_weight / exact.total_weight,
            gamma.map_or("-".into(), |g| format!("{g:.3}")),
        );
    }
    Ok(())
}
