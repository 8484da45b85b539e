use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use metric_forest::completion::RepresentativePolicy;
use metric_forest::datagen::GenSpec;
use metric_forest::eval::{gamma_bound, theorem3_beta, EvalReport};
use metric_forest::forest::Forest;
use metric_forest::io::{
    read_tree_csv, tree_csv, write_dataset, write_json, write_partition, write_tree_csv, CompletionEnvelope,
    TreeEnvelope,
};
use metric_forest::metric::MetricKind;
use metric_forest::mst::{exact_metric_mst, SpanningTree, DEFAULT_N_CAP};
use metric_forest::pipeline::{load_space, run, sweep, DataSource, RunConfig, Strategy};
use metric_forest::{Error, Result};

/// Approximate metric MSTs by completing a cheap initial forest.
#[derive(Parser)]
#[command(name = "mfc", version)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "MFC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset plus a JSON sidecar.
    Gen {
        #[command(flatten)]
        source: SourceArgs,
        /// Dataset path; the sidecar goes to `<out>.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full pipeline and print its report.
    Run {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Write the completed tree as CSV.
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Write the completed tree as a JSON envelope.
        #[arg(long)]
        tree_json: Option<PathBuf>,
        /// Write the initial forest edges as CSV.
        #[arg(long)]
        forest: Option<PathBuf>,
        /// Write the partition CSV (header goes to `<path>.json`).
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Write the exact MST as CSV (oracle mode only).
        #[arg(long)]
        exact_tree: Option<PathBuf>,
    },
    /// Repeat the pipeline over a list of t (or k) values and print CSV.
    Sweep {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Comma-separated strategy parameters.
        #[arg(long, value_delimiter = ',', required = true)]
        t_list: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        /// Also write the CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact MST baseline only.
    Exact {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = DEFAULT_N_CAP)]
        n_cap: usize,
        /// Write the tree as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print `u,v,w` lines instead of the JSON envelope.
        #[arg(long)]
        csv: bool,
    },
    /// γ̄ of a forest against an exact MST, both as `u,v,w` CSV.
    Gamma {
        #[arg(long)]
        forest: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        /// Number of points (defaults to the tree's edge count plus one).
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Uniform,
    Gaussian,
    Planted,
}

#[derive(Args)]
struct SourceArgs {
    /// Dataset file in the loader format of the metric.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    input: Option<PathBuf>,
    /// Synthetic generator.
    #[arg(long, value_enum)]
    gen: Option<GenKind>,
    /// Points (uniform, planted).
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Dimension (uniform, gaussian).
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Clusters (gaussian).
    #[arg(long, default_value_t = 32)]
    g: usize,
    /// Points per cluster (gaussian).
    #[arg(long, default_value_t = 125)]
    ppc: usize,
    /// Adversarial factor (planted).
    #[arg(long, default_value_t = 10.0)]
    p: f64,
    /// euclidean, jaccard, hamming, levenshtein or planted.
    #[arg(long)]
    metric: Option<MetricKind>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SourceArgs {
    fn spec(&self) -> Option<GenSpec> {
        let seed = self.seed;
        self.gen.map(|g| match g {
            GenKind::Uniform => GenSpec::Uniform { n: self.n, d: self.d, seed },
            GenKind::Gaussian => GenSpec::GaussianMixture {
                g: self.g,
                d: self.d,
                points_per_cluster: self.ppc,
                seed,
            },
            GenKind::Planted => GenSpec::PlantedPair { n: self.n, p: self.p, seed },
        })
    }

    fn source(&self) -> Result<(DataSource, MetricKind)> {
        match (&self.input, self.spec()) {
            (Some(path), _) => {
                let metric = self
                    .metric
                    .ok_or_else(|| Error::Config("--metric is required with --input".into()))?;
                Ok((DataSource::Input(path.clone()), metric))
            }
            (None, Some(spec)) => {
                let natural = match spec {
                    GenSpec::PlantedPair { .. } => MetricKind::Planted,
                    _ => MetricKind::Euclidean,
                };
                Ok((DataSource::Generate(spec), self.metric.unwrap_or(natural)))
            }
            (None, None) => Err(Error::Config("one of --input or --gen is required".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Kcenter,
    Knn,
    Natural,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepsArg {
    Keep,
    Lowest,
    Random,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long, value_enum, default_value = "kcenter")]
    strategy: StrategyArg,
    /// Number of k-center components.
    #[arg(long, default_value_t = 16)]
    t: usize,
    /// Neighbours for the k-NN strategy.
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Representative policy (default: keep centers, else lowest index).
    #[arg(long, value_enum)]
    reps: Option<RepsArg>,
    /// Seed for `--reps random`.
    #[arg(long, default_value_t = 0)]
    rep_seed: u64,
    /// Tighten each coarsened weight with one extra representative query.
    #[arg(long)]
    three_way: bool,
    /// Also run the exact MST and the optimal completion.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = DEFAULT_N_CAP)]
    n_cap: usize,
}

impl PipelineArgs {
    fn config(&self, source: &SourceArgs) -> Result<RunConfig> {
        let (data, metric) = source.source()?;
        let strategy = match self.strategy {
            StrategyArg::Kcenter => Strategy::KCenter { t: self.t },
            StrategyArg::Knn => Strategy::Knn { k: self.k },
            StrategyArg::Natural => Strategy::Natural,
        };
        let mut config = RunConfig::new(data, metric, strategy);
        config.seed = source.seed;
        config.representatives = self.reps.map(|r| match r {
            RepsArg::Keep => RepresentativePolicy::KeepExisting,
            RepsArg::Lowest => RepresentativePolicy::LowestIndex,
            RepsArg::Random => RepresentativePolicy::SeededRandom(self.rep_seed),
        });
        config.three_way = self.three_way;
        config.oracle = self.oracle;
        config.n_cap = self.n_cap;
        Ok(config)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Print a human-readable table instead.
    #[arg(long)]
    table: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn print_report(report: &EvalReport, output: &OutputArgs) -> Result<()> {
    if output.table {
        emit(&report.render_table())?;
    } else {
        match output.format {
            Format::Json => emit(&format!("{}\n", serde_json::to_string_pretty(report)?))?,
            Format::Csv => emit(&format!("{}\n{}\n", EvalReport::CSV_HEADER, report.csv_row()))?,
        }
    }
    if let Some(path) = &output.report {
        write_json(path, report)?;
    }
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn cmd_gen(source: &SourceArgs, out: &Path) -> Result<()> {
    let spec = source
        .spec()
        .ok_or_else(|| Error::Config("gen needs --gen".into()))?;
    let generated = spec.generate()?;
    let mut sidecar = json!({ "spec": spec, "n": generated.dataset.len(), "kind": generated.dataset.kind().to_string() });
    if let Some(((a, b), _)) = &generated.planted {
        sidecar["planted_pair"] = json!([a, b]);
        if let Some(table) = generated.dataset.planted_table() {
            sidecar["far"] = json!(table.far);
        }
    } else {
        write_dataset(out, &generated.dataset)?;
        sidecar["path"] = json!(out);
    }
    if let Some(labels) = &generated.labels {
        sidecar["labels"] = json!(labels);
    }
    write_json(&sidecar_path(out), &sidecar)?;
    emit(&format!("{}\n", serde_json::to_string_pretty(&sidecar)?))?;
    Ok(())
}

struct Artifacts<'a> {
    tree: Option<&'a Path>,
    tree_json: Option<&'a Path>,
    forest: Option<&'a Path>,
    partition: Option<&'a Path>,
    exact_tree: Option<&'a Path>,
}

fn cmd_run(config: &RunConfig, output: &OutputArgs, artifacts: Artifacts<'_>) -> Result<()> {
    let out = run(config)?;
    print_report(&out.report, output)?;
    if let Some(path) = artifacts.tree {
        write_tree_csv(path, &out.completion.full_tree)?;
    }
    if let Some(path) = artifacts.tree_json {
        let policy = format!("{:?}", config.representative_policy());
        let env = CompletionEnvelope::new(out.report.n, &out.completion, out.report.queries, config.three_way, &policy);
        write_json(path, &env)?;
    }
    if let Some(path) = artifacts.forest {
        write_tree_csv(path, &SpanningTree::from_edges(out.forest.edges().copied().collect()))?;
    }
    if let Some(path) = artifacts.partition {
        let params = json!({ "strategy": config.strategy, "seed": config.seed });
        write_partition(path, &sidecar_path(path), &out.forest.partition, params)?;
    }
    if let Some(path) = artifacts.exact_tree {
        let tree = out
            .exact_tree
            .as_ref()
            .ok_or_else(|| Error::Config("--exact-tree needs --oracle".into()))?;
        write_tree_csv(path, tree)?;
    }
    out.check(config.strategy)
}

fn cmd_sweep(config: &RunConfig, params: &[usize], repeats: usize, out: Option<&Path>) -> Result<()> {
    let result = sweep(config, params, repeats);
    for row in &result.rows {
        if let Err(msg) = &row.outcome {
            eprintln!("row param={} repeat={} seed={} failed: {msg}", row.param, row.repeat, row.seed);
        }
    }
    let csv = result.to_csv();
    emit(&csv)?;
    if let Some(path) = out {
        std::fs::write(path, &csv).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
    }
    Ok(())
}

fn cmd_exact(source: &SourceArgs, n_cap: usize, out: Option<&Path>, csv: bool) -> Result<()> {
    let (data, metric) = source.source()?;
    let (space, _) = load_space(&data, metric)?;
    let tree = exact_metric_mst(&space, n_cap)?;
    if csv {
        emit(&tree_csv(&tree))?;
    } else {
        let env = TreeEnvelope::new(space.len(), &tree, space.ledger());
        emit(&format!("{}\n", serde_json::to_string_pretty(&env)?))?;
    }
    if let Some(path) = out {
        write_tree_csv(path, &tree)?;
    }
    Ok(())
}

fn cmd_gamma(forest: &Path, tree: &Path, n: Option<usize>) -> Result<()> {
    let tree = read_tree_csv(tree)?;
    let n = n.unwrap_or(tree.edges.len() + 1);
    tree.validate(n)?;
    let forest = Forest::from_edges(n, &read_tree_csv(forest)?.edges)?;
    let gamma = gamma_bound(&forest, &tree)?;
    let beta = gamma.map(theorem3_beta).transpose()?;
    let report = json!({
        "n": n,
        "t": forest.partition.t(),
        "w_forest": forest.total_weight,
        "w_opt": tree.total_weight,
        "gamma_bar": gamma,
        "theorem3_beta": beta,
    });
    emit(&format!("{}\n", serde_json::to_string_pretty(&report)?))
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { source, out } => cmd_gen(&source, &out),
        Command::Run {
            source,
            pipeline,
            output,
            tree,
            tree_json,
            forest,
            partition,
            exact_tree,
        } => cmd_run(
            &pipeline.config(&source)?,
            &output,
            Artifacts {
                tree: tree.as_deref(),
                tree_json: tree_json.as_deref(),
                forest: forest.as_deref(),
                partition: partition.as_deref(),
                exact_tree: exact_tree.as_deref(),
            },
        ),
        Command::Sweep {
            source,
            pipeline,
            t_list,
            repeats,
            out,
        } => cmd_sweep(&pipeline.config(&source)?, &t_list, repeats, out.as_deref()),
        Command::Exact { source, n_cap, out, csv } => cmd_exact(&source, n_cap, out.as_deref(), csv),
        Command::Gamma { forest, tree, n } => cmd_gamma(&forest, &tree, n),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: could not configure {threads} threads: {e}");
            return ExitCode::from(Error::Config(String::new()).exit_code());
        }
    }
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
