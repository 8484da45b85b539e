//! Sweep the component count on clustered data and emit CSV. Quality is best
//! when t matches the number of generating clusters.

use metric_forest::pipeline::{sweep, DataSource, RunConfig, Strategy};
use metric_forest::prelude::*;

fn main() -> Result<()> {
    let mut config = RunConfig::new(
        DataSource::Generate(GenSpec::GaussianMixture {
            g: 16,
            d: 8,
            points_per_cluster: 100,
            seed: 0,
        }),
        MetricKind::Euclidean,
        Strategy::KCenter { t: 16 },
    );
    config.oracle = true;

    let result = sweep(&config, &[4, 8, 16, 32, 64], 3);
    eprintln!("{:>4} {:>10} {:>10}", "t", "cost", "gamma");
    for agg in &result.aggregates {
        eprintln!(
            "{:>4} {:>10.4} {:>10.4}",
            agg.param,
            agg.cost_ratio.as_ref().map_or(f64::NAN, |m| m.mean),
            agg.gamma_bar.as_ref().map_or(f64::NAN, |m| m.mean),
        );
    }
    print!("{}", result.to_csv());
    Ok(())
}
