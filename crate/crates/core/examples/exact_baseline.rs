//! Exact MST over the implicit complete graph of a point cloud.
//!
//! Run with `cargo run --release --example exact_baseline -- [n] [d]`.

use metric_forest::prelude::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let n = args.next().unwrap_or(2000);
    let d = args.next().unwrap_or(4);

    let space = MetricSpace::new(uniform_cloud(n, d, 1)?, MetricKind::Euclidean)?;
    let clock = std::time::Instant::now();
    let tree = exact_metric_mst(&space, DEFAULT_N_CAP)?;
    tree.validate(n)?;

    println!("n = {n}, d = {d}");
    println!("MST weight      {:.4}", tree.total_weight);
    println!("edges           {}", tree.edges.len());
    println!("queries         {} (n(n-1)/2 = {})", space.ledger().exact_baseline, n * (n - 1) / 2);
    println!("elapsed         {:.3}s", clock.elapsed().as_secs_f64());
    let longest = tree.edges.iter().max_by(|a, b| a.order(b)).unwrap();
    println!("longest edge    ({}, {}) at {:.4}", longest.u, longest.v, longest.w);
    Ok(())
}
