//! The overlap bound γ̄ of an initial forest and the guarantee it implies.

use metric_forest::prelude::*;

fn main() -> Result<()> {
    for d in [2, 8, 32] {
        let space = MetricSpace::new(uniform_cloud(1500, d, 2)?, MetricKind::Euclidean)?;
        let exact = exact_metric_mst(&space, DEFAULT_N_CAP)?;
        let partition = greedy_k_center(&space, 16, 2)?;
        let forest = component_msts(&space, &partition)?;
        let result = mfc_approx(&space, &forest, RepresentativePolicy::KeepExisting, false)?;
        let gamma = gamma_bound(&forest, &exact)?.expect("components have internal MST edges");
        let beta = theorem3_beta(gamma)?;
        let cost = result.full_tree.total_weight / exact.total_weight;
        println!("d = {d:>2}: gamma_bar {gamma:.3}, guarantee {beta:.3}, observed cost ratio {cost:.4}");
    }
    Ok(())
}
