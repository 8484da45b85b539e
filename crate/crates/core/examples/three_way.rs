//! Plain coarsening against the three-way refinement, which spends one extra
//! query per component pair and never makes an edge heavier.

use metric_forest::prelude::*;

fn main() -> Result<()> {
    let space = MetricSpace::new(uniform_cloud(2500, 8, 11)?, MetricKind::Euclidean)?;
    let partition = greedy_k_center(&space, 40, 11)?;
    let forest = component_msts(&space, &partition)?;

    let before = space.ledger();
    let plain = approx_coarsened_weights(&space, &partition, false)?;
    let mid = space.ledger();
    let refined = approx_coarsened_weights(&space, &partition, true)?;
    let after = space.ledger();

    let tightened = plain.pairs().filter(|&(i, j)| refined.weight(i, j) < plain.weight(i, j)).count();
    let a = complete_forest(&forest, &plain)?;
    let b = complete_forest(&forest, &refined)?;
    println!("pairs tightened: {tightened} of {}", plain.pairs().count());
    println!("queries: plain {} / three-way {}", mid.since(&before).coarsen, after.since(&mid).coarsen);
    println!("tree weight: plain {:.4} / three-way {:.4}", a.full_tree.total_weight, b.full_tree.total_weight);
    Ok(())
}
