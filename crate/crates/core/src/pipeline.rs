//! End-to-end runs: data → initial forest → completion → report, and sweeps
//! over the number of components.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::completion::{
    complete_forest, mfc_approx, optimal_coarsened_weights, CompletionResult, RepresentativePolicy,
};
use crate::datagen::GenSpec;
use crate::error::{Error, Result};
use crate::eval::{evaluate, EvalInputs, EvalReport, RunMeta, StageSeconds};
use crate::forest::{component_msts, greedy_k_center, knn_components, Forest, Partition};
use crate::io::read_dataset;
use crate::metric::{MetricKind, MetricSpace};
use crate::mst::{exact_metric_mst, SpanningTree, DEFAULT_N_CAP};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataSource {
    Input(PathBuf),
    Generate(GenSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Greedy k-center with `t` centers.
    KCenter { t: usize },
    /// Components of the exact k-NN graph.
    Knn { k: usize },
    /// The generator's own partition (planted halves or mixture labels).
    Natural,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::KCenter { .. } => "kcenter",
            Strategy::Knn { .. } => "knn",
            Strategy::Natural => "natural",
        }
    }

    fn with_param(self, value: usize) -> Strategy {
        match self {
            Strategy::KCenter { .. } => Strategy::KCenter { t: value },
            Strategy::Knn { .. } => Strategy::Knn { k: value },
            Strategy::Natural => Strategy::Natural,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub source: DataSource,
    pub metric: MetricKind,
    pub strategy: Strategy,
    /// `None` keeps k-center centers and otherwise takes the lowest index.
    pub representatives: Option<RepresentativePolicy>,
    pub three_way: bool,
    pub seed: u64,
    /// Also run the exact MST and the optimal completion.
    pub oracle: bool,
    pub n_cap: usize,
}

impl RunConfig {
    pub fn new(source: DataSource, metric: MetricKind, strategy: Strategy) -> Self {
        let seed = match &source {
            DataSource::Generate(spec) => spec.seed(),
            DataSource::Input(_) => 0,
        };
        RunConfig {
            source,
            metric,
            strategy,
            representatives: None,
            three_way: false,
            seed,
            oracle: false,
            n_cap: DEFAULT_N_CAP,
        }
    }

    pub fn representative_policy(&self) -> RepresentativePolicy {
        self.representatives.unwrap_or(match self.strategy {
            Strategy::KCenter { .. } => RepresentativePolicy::KeepExisting,
            _ => RepresentativePolicy::LowestIndex,
        })
    }

    /// Same run with a different seed; generated data is regenerated with it.
    pub fn reseeded(&self, seed: u64) -> RunConfig {
        let mut c = self.clone();
        c.seed = seed;
        if let DataSource::Generate(spec) = &self.source {
            c.source = DataSource::Generate(spec.with_seed(seed));
        }
        c
    }
}

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: EvalReport,
    pub forest: Forest,
    pub completion: CompletionResult,
    pub exact_tree: Option<SpanningTree>,
    pub optimal_completion: Option<CompletionResult>,
}

/// Builds the metric space (and the generator's natural partition, if any).
pub fn load_space(source: &DataSource, metric: MetricKind) -> Result<(MetricSpace, Option<Partition>)> {
    match source {
        DataSource::Input(path) => {
            let dataset = read_dataset(path, metric.required_kind())?;
            Ok((MetricSpace::new(dataset, metric)?, None))
        }
        DataSource::Generate(spec) => {
            let generated = spec.generate()?;
            let natural = match (generated.planted, generated.labels) {
                (Some((_, partition)), _) => Some(partition),
                (None, Some(labels)) => Some(Partition::new(labels, None)?),
                (None, None) => None,
            };
            Ok((MetricSpace::new(generated.dataset, metric)?, natural))
        }
    }
}

pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let (space, natural) = load_space(&config.source, config.metric)?;
    run_on(&space, natural.as_ref(), config)
}

/// Runs the pipeline on an existing space. The space's ledger is reset first.
pub fn run_on(space: &MetricSpace, natural: Option<&Partition>, config: &RunConfig) -> Result<RunOutput> {
    let n = space.len();
    if config.oracle && n > config.n_cap {
        return Err(Error::OverCap {
            n,
            cap: config.n_cap,
            what: "oracle mode",
        });
    }
    space.reset_ledger();

    let clock = Instant::now();
    let partition = match config.strategy {
        Strategy::KCenter { t } => greedy_k_center(space, t, config.seed)?,
        Strategy::Knn { k } => knn_components(space, k)?,
        Strategy::Natural => natural
            .cloned()
            .ok_or_else(|| Error::Config("this data source has no natural partition".into()))?,
    };
    let init_time = clock.elapsed();

    let clock = Instant::now();
    let forest = component_msts(space, &partition)?;
    let sub_mst_time = clock.elapsed();

    let clock = Instant::now();
    let policy = config.representative_policy();
    let completion = mfc_approx(space, &forest, policy, config.three_way)?;
    let mfc_time = clock.elapsed();

    let (exact_tree, exact_time, optimal_completion) = if config.oracle {
        let clock = Instant::now();
        let tree = exact_metric_mst(space, config.n_cap)?;
        let elapsed = clock.elapsed();
        let optimal = if forest.partition.t() >= 2 {
            complete_forest(&forest, &optimal_coarsened_weights(space, &forest.partition, config.n_cap)?)?
        } else {
            completion.clone()
        };
        (Some(tree), Some(elapsed), Some(optimal))
    } else {
        (None, None, None)
    };

    let meta = RunMeta {
        metric: config.metric,
        strategy: config.strategy.name().to_string(),
        seed: config.seed,
        three_way: config.three_way,
    };
    let report = evaluate(
        &meta,
        EvalInputs {
            forest: &forest,
            mfc: &completion,
            exact_tree: exact_tree.as_ref(),
            optimal_completion: optimal_completion.as_ref(),
            seconds: StageSeconds::from_durations(init_time, sub_mst_time, mfc_time, exact_time),
            queries: space.ledger(),
        },
    )?;
    Ok(RunOutput {
        report,
        forest,
        completion,
        exact_tree,
        optimal_completion,
    })
}

/// Checks the query counts in `report` against the algorithmic budgets.
pub fn check_query_budgets(report: &EvalReport, partition_sizes: &[usize], strategy: Strategy) -> Result<()> {
    let (n, t) = (report.n as u64, report.t as u64);
    let q = &report.queries;
    let expect = |what: &str, got: u64, want: u64| {
        if got == want {
            Ok(())
        } else {
            Err(Error::Invariant(format!("{what}: {got} queries, expected {want}")))
        }
    };
    let coarsen = if t >= 2 {
        n * (t - 1) + if report.three_way { t * (t - 1) / 2 } else { 0 }
    } else {
        0
    };
    expect("coarsening", q.coarsen, coarsen)?;
    let sub: u64 = partition_sizes.iter().map(|&s| (s as u64) * (s as u64).saturating_sub(1) / 2).sum();
    expect("component MSTs", q.sub_mst, sub)?;
    if report.w_opt.is_some() {
        expect("exact baseline", q.exact_baseline, n * (n - 1) / 2)?;
    }
    match strategy {
        Strategy::KCenter { t: centers } => {
            if q.init_partition > n * centers as u64 {
                return Err(Error::Invariant(format!(
                    "k-center used {} queries, budget {}",
                    q.init_partition,
                    n * centers as u64
                )));
            }
        }
        Strategy::Knn { .. } => expect("k-NN graph", q.init_partition, n * (n - 1) / 2)?,
        Strategy::Natural => expect("natural partition", q.init_partition, 0)?,
    }
    Ok(())
}

impl RunOutput {
    /// Report invariants plus exact query budgets.
    pub fn check(&self, strategy: Strategy) -> Result<()> {
        self.report.check()?;
        check_query_budgets(&self.report, &self.forest.partition.sizes(), strategy)
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub param: usize,
    pub repeat: usize,
    pub seed: u64,
    pub outcome: std::result::Result<EvalReport, String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

impl MeanStd {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<MeanStd> {
        let v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = if v.len() > 1 {
            v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64
        } else {
            0.0
        };
        Some(MeanStd {
            mean,
            std: var.sqrt(),
            count: v.len(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SweepAggregate {
    pub param: usize,
    pub ok: usize,
    pub failed: usize,
    pub cost_ratio: Option<MeanStd>,
    pub gamma_bar: Option<MeanStd>,
    pub w_mfc: Option<MeanStd>,
    pub total_queries: Option<MeanStd>,
    pub pipeline_seconds: Option<MeanStd>,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<SweepAggregate>,
}

/// Runs every `(param, repeat)` pair. The strategy parameter (`t` or `k`) is
/// replaced by each value of `params`; repeat `r` uses seed `base.seed + r`,
/// so every parameter value sees the same sequence of samples. Failed rows are
/// recorded and the sweep continues.
pub fn sweep(base: &RunConfig, params: &[usize], repeats: usize) -> SweepResult {
    let mut rows = Vec::with_capacity(params.len() * repeats);
    for &param in params {
        for repeat in 0..repeats {
            let seed = base.seed.wrapping_add(repeat as u64);
            let mut config = base.reseeded(seed);
            config.strategy = base.strategy.with_param(param);
            let outcome = run(&config)
                .and_then(|out| out.check(config.strategy).map(|_| out.report))
                .map_err(|e| e.to_string());
            rows.push(SweepRow {
                param,
                repeat,
                seed,
                outcome,
            });
        }
    }
    let aggregates = params
        .iter()
        .map(|&param| {
            let ok: Vec<&EvalReport> = rows
                .iter()
                .filter(|r| r.param == param)
                .filter_map(|r| r.outcome.as_ref().ok())
                .collect();
            SweepAggregate {
                param,
                ok: ok.len(),
                failed: repeats - ok.len(),
                cost_ratio: MeanStd::of(ok.iter().filter_map(|r| r.cost_ratio)),
                gamma_bar: MeanStd::of(ok.iter().filter_map(|r| r.gamma_bar)),
                w_mfc: MeanStd::of(ok.iter().map(|r| r.w_mfc)),
                total_queries: MeanStd::of(ok.iter().map(|r| r.queries.total as f64)),
                pipeline_seconds: MeanStd::of(ok.iter().map(|r| r.stage_seconds.pipeline_total())),
            }
        })
        .collect();
    SweepResult { rows, aggregates }
}

impl SweepResult {
    pub const CSV_HEADER_PREFIX: &'static str = "kind,param,repeat,status";
    pub const AGGREGATE_COLUMNS: &'static str =
        "ok,failed,cost_ratio_mean,cost_ratio_std,gamma_bar_mean,gamma_bar_std,w_mfc_mean,w_mfc_std,q_total_mean,sec_pipeline_mean";

    /// Run rows (`kind=run`) followed by one `kind=aggregate` row per parameter.
    ///
    /// Columns: `kind,param,repeat,status`, then the report columns, then the
    /// aggregate columns. Run rows leave the aggregate columns empty and vice versa.
    pub fn to_csv(&self) -> String {
        let report_cols = EvalReport::CSV_HEADER.split(',').count();
        let agg_cols = Self::AGGREGATE_COLUMNS.split(',').count();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{},{},{}",
            Self::CSV_HEADER_PREFIX,
            EvalReport::CSV_HEADER,
            Self::AGGREGATE_COLUMNS
        );
        let blank = |k: usize| vec![""; k].join(",");
        for row in &self.rows {
            match &row.outcome {
                Ok(report) => {
                    let _ = writeln!(
                        out,
                        "run,{},{},ok,{},{}",
                        row.param,
                        row.repeat,
                        report.csv_row(),
                        blank(agg_cols)
                    );
                }
                Err(msg) => {
                    let mut cells = vec![String::new(); report_cols];
                    cells[4] = row.seed.to_string();
                    let status = format!("failed: {}", msg.replace([',', '\n', '"'], ";"));
                    let _ = writeln!(
                        out,
                        "run,{},{},{status},{},{}",
                        row.param,
                        row.repeat,
                        cells.join(","),
                        blank(agg_cols)
                    );
                }
            }
        }
        for agg in &self.aggregates {
            let ms = |m: &Option<MeanStd>| match m {
                Some(m) => (m.mean.to_string(), m.std.to_string()),
                None => (String::new(), String::new()),
            };
            let (cr, crs) = ms(&agg.cost_ratio);
            let (gb, gbs) = ms(&agg.gamma_bar);
            let (wm, wms) = ms(&agg.w_mfc);
            let (qt, _) = ms(&agg.total_queries);
            let (sp, _) = ms(&agg.pipeline_seconds);
            let _ = writeln!(
                out,
                "aggregate,{},,{},{},{},{},{cr},{crs},{gb},{gbs},{wm},{wms},{qt},{sp}",
                agg.param,
                match (agg.ok, agg.failed) {
                    (_, 0) => "ok",
                    (0, _) => "failed",
                    _ => "partial",
                },
                blank(report_cols),
                agg.ok,
                agg.failed
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize, t: usize, seed: u64) -> RunConfig {
        let mut c = RunConfig::new(
            DataSource::Generate(GenSpec::Uniform { n, d: 2, seed }),
            MetricKind::Euclidean,
            Strategy::KCenter { t },
        );
        c.oracle = true;
        c
    }

    #[test]
    fn oracle_run_fills_report() {
        let out = run(&uniform(300, 8, 7)).unwrap();
        let r = &out.report;
        assert_eq!((r.n, r.t), (300, 8));
        assert!(r.cost_ratio.unwrap() >= 1.0 - 1e-9);
        assert_eq!(r.bound_satisfied, Some(true));
        out.check(Strategy::KCenter { t: 8 }).unwrap();
        assert!(out.report.w_tstar.unwrap() <= out.report.w_mfc + 1e-9);
    }

    #[test]
    fn runs_are_deterministic() {
        let a = run(&uniform(200, 5, 3)).unwrap();
        let b = run(&uniform(200, 5, 3)).unwrap();
        assert_eq!(a.completion, b.completion);
        assert_eq!(a.report.queries, b.report.queries);
        let strip = |mut r: EvalReport| {
            r.stage_seconds = StageSeconds::default();
            r.stage_fractions = Default::default();
            serde_json::to_string(&r).unwrap()
        };
        assert_eq!(strip(a.report), strip(b.report));
    }

    #[test]
    fn no_oracle_leaves_ratios_empty() {
        let mut c = uniform(100, 4, 1);
        c.oracle = false;
        let out = run(&c).unwrap();
        assert!(out.report.cost_ratio.is_none());
        assert!(out.report.gamma_bar.is_none());
        assert_eq!(out.report.bound_satisfied, None);
        assert_eq!(out.report.queries.exact_baseline, 0);
    }

    #[test]
    fn oracle_refuses_over_cap() {
        let mut c = uniform(100, 4, 1);
        c.n_cap = 50;
        assert!(matches!(run(&c), Err(Error::OverCap { .. })));
    }

    #[test]
    fn t_above_n_is_input_error() {
        assert!(matches!(run(&uniform(10, 11, 1)), Err(Error::Input(_))));
    }

    #[test]
    fn knn_and_natural_strategies() {
        let mut c = uniform(120, 0, 2);
        c.strategy = Strategy::Knn { k: 2 };
        let out = run(&c).unwrap();
        out.check(c.strategy).unwrap();

        let mut c = RunConfig::new(
            DataSource::Generate(GenSpec::PlantedPair { n: 20, p: 3.0, seed: 4 }),
            MetricKind::Planted,
            Strategy::Natural,
        );
        c.oracle = true;
        let out = run(&c).unwrap();
        out.check(c.strategy).unwrap();
        assert_eq!(out.report.t, 2);

        let c = RunConfig::new(
            DataSource::Generate(GenSpec::Uniform { n: 10, d: 2, seed: 0 }),
            MetricKind::Euclidean,
            Strategy::Natural,
        );
        assert!(matches!(run(&c), Err(Error::Config(_))));
    }

    #[test]
    fn sweep_counts_rows_and_aggregates() {
        let res = sweep(&uniform(60, 0, 10), &[4, 8], 2);
        assert_eq!(res.rows.len(), 4);
        assert_eq!(res.aggregates.len(), 2);
        let csv = res.to_csv();
        assert_eq!(csv.lines().count(), 1 + 4 + 2);
        let width = csv.lines().next().unwrap().split(',').count();
        assert!(csv.lines().all(|l| l.split(',').count() == width));
        assert_eq!(res.rows[2].seed, 10);
        assert_eq!(res.rows[3].seed, 11);
    }

    #[test]
    fn sweep_marks_failed_rows() {
        let res = sweep(&uniform(20, 0, 0), &[4, 30], 1);
        assert!(res.rows[0].outcome.is_ok());
        assert!(res.rows[1].outcome.is_err());
        assert_eq!(res.aggregates[1].failed, 1);
        assert!(res.to_csv().contains("failed: invalid input"));
    }
}
