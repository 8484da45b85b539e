//! The full pipeline through `pipeline::run`, printed as a table and as JSON.

use metric_forest::prelude::*;

fn main() -> Result<()> {
    let mut config = RunConfig::new(
        DataSource::Generate(GenSpec::Uniform { n: 4000, d: 4, seed: 7 }),
        MetricKind::Euclidean,
        Strategy::KCenter { t: 32 },
    );
    config.oracle = true;

    let out = run(&config)?;
    out.check(config.strategy)?;
    print!("{}", out.report.render_table());
    println!("completion edges: {}", out.completion.completion_edges.len());
    println!("{}", serde_json::to_string_pretty(&out.report.queries)?);
    Ok(())
}
