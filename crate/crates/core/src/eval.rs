//! Quality measures and run reports.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::completion::{CoarsenedGraph, CompletionResult, APPROX_FACTOR};
use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::metric::{MetricKind, QueryLedger};
use crate::mst::SpanningTree;

/// Slack used for every floating-point bound comparison in reports.
pub const BOUND_SLACK: f64 = 1e-9;

/// Upper bound γ̄ on the overlap of `forest` with an optimal MST, computed
/// against the single tree `exact_tree`.
///
/// Returns `Ok(None)` when no edge of `exact_tree` lies inside a component.
pub fn gamma_bound(forest: &Forest, exact_tree: &SpanningTree) -> Result<Option<f64>> {
    let partition = &forest.partition;
    let n = partition.n();
    if exact_tree.edges.len() + 1 != n || exact_tree.edges.iter().any(|e| e.v >= n || e.u >= n) {
        return Err(Error::Input(format!(
            "tree with {} edges does not span the forest's {n} points",
            exact_tree.edges.len()
        )));
    }
    let inside: f64 = exact_tree
        .edges
        .iter()
        .filter(|e| partition.component_of(e.u) == partition.component_of(e.v))
        .map(|e| e.w)
        .sum();
    if inside == 0.0 {
        return Ok(None);
    }
    Ok(Some(forest.total_weight / inside))
}

/// Learning-augmented approximation factor `(2γ + 1 + √(4γ + 1)) / 2`.
///
/// Values a hair below 1 from rounding (within [`BOUND_SLACK`]) are clamped to 1.
pub fn theorem3_beta(gamma: f64) -> Result<f64> {
    if gamma.is_nan() || gamma < 1.0 - BOUND_SLACK {
        return Err(Error::Input(format!("overlap bound must be >= 1, got {gamma}")));
    }
    let g = gamma.max(1.0);
    Ok((2.0 * g + 1.0 + (4.0 * g + 1.0).sqrt()) / 2.0)
}

/// Outcome of checking the unbounded-edge inequality on every coarsened pair.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct UnboundedEdgeCheck {
    pub pairs: usize,
    /// Pairs with `ŵ > β w*`.
    pub unbounded: usize,
    /// Unbounded pairs violating `ŵ < β/(β-1) · min(w(T_i), w(T_j))`.
    pub violations: Vec<(usize, usize)>,
}

pub fn check_unbounded_edges(approx: &CoarsenedGraph, optimal: &CoarsenedGraph, forest: &Forest) -> UnboundedEdgeCheck {
    let beta = APPROX_FACTOR;
    let mut out = UnboundedEdgeCheck::default();
    for (i, j) in approx.pairs() {
        out.pairs += 1;
        let (w_hat, w_star) = (approx.weight(i, j), optimal.weight(i, j));
        if w_hat > beta * w_star {
            out.unbounded += 1;
            let cap = beta / (beta - 1.0) * forest.tree_weights[i].min(forest.tree_weights[j]);
            if w_hat.is_nan() || w_hat >= cap {
                out.violations.push((i, j));
            }
        }
    }
    out
}

/// Wall-clock time per pipeline stage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageSeconds {
    pub init_partition: f64,
    pub sub_mst: f64,
    pub mfc_approx: f64,
    /// Exact baseline (not part of the pipeline fractions).
    pub exact_baseline: Option<f64>,
}

impl StageSeconds {
    pub fn from_durations(init: Duration, sub_mst: Duration, mfc: Duration, exact: Option<Duration>) -> Self {
        StageSeconds {
            init_partition: init.as_secs_f64(),
            sub_mst: sub_mst.as_secs_f64(),
            mfc_approx: mfc.as_secs_f64(),
            exact_baseline: exact.map(|d| d.as_secs_f64()),
        }
    }

    pub fn pipeline_total(&self) -> f64 {
        self.init_partition + self.sub_mst + self.mfc_approx
    }

    pub fn fractions(&self) -> StageFractions {
        let total = self.pipeline_total();
        if total <= 0.0 {
            let third = 1.0 / 3.0;
            return StageFractions {
                init_partition: third,
                sub_mst: third,
                mfc_approx: third,
            };
        }
        StageFractions {
            init_partition: self.init_partition / total,
            sub_mst: self.sub_mst / total,
            mfc_approx: self.mfc_approx / total,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageFractions {
    pub init_partition: f64,
    pub sub_mst: f64,
    pub mfc_approx: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeBucket {
    pub lo: usize,
    pub hi: usize,
    pub count: usize,
}

/// Component-size summary with power-of-two buckets `[1,1], [2,3], [4,7], ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSizes {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub histogram: Vec<SizeBucket>,
}

impl ComponentSizes {
    pub fn from_sizes(sizes: &[usize]) -> Self {
        let max = sizes.iter().copied().max().unwrap_or(0);
        let mut histogram = Vec::new();
        let mut lo = 1;
        while lo <= max {
            let hi = 2 * lo - 1;
            histogram.push(SizeBucket {
                lo,
                hi,
                count: sizes.iter().filter(|&&s| s >= lo && s <= hi).count(),
            });
            lo *= 2;
        }
        ComponentSizes {
            min: sizes.iter().copied().min().unwrap_or(0),
            max,
            mean: if sizes.is_empty() {
                0.0
            } else {
                sizes.iter().sum::<usize>() as f64 / sizes.len() as f64
            },
            histogram,
        }
    }
}

/// Identification of a run, carried into the report verbatim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub metric: MetricKind,
    pub strategy: String,
    pub seed: u64,
    pub three_way: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n: usize,
    pub t: usize,
    pub metric: MetricKind,
    pub strategy: String,
    pub seed: u64,
    pub three_way: bool,
    pub w_opt: Option<f64>,
    pub w_mfc: f64,
    pub w_forest: f64,
    /// Weight of the forest joined by the optimal completion, when the oracle ran.
    pub w_tstar: Option<f64>,
    pub cost_ratio: Option<f64>,
    pub gamma_bar: Option<f64>,
    pub theorem3_beta: Option<f64>,
    /// `None` when neither γ̄ nor the oracle completion is available.
    pub bound_satisfied: Option<bool>,
    pub stage_seconds: StageSeconds,
    pub stage_fractions: StageFractions,
    pub queries: QueryLedger,
    pub component_sizes: ComponentSizes,
}

/// Artifacts of one run that feed [`evaluate`].
pub struct EvalInputs<'a> {
    pub forest: &'a Forest,
    pub mfc: &'a CompletionResult,
    pub exact_tree: Option<&'a SpanningTree>,
    pub optimal_completion: Option<&'a CompletionResult>,
    pub seconds: StageSeconds,
    pub queries: QueryLedger,
}

pub fn evaluate(meta: &RunMeta, inputs: EvalInputs<'_>) -> Result<EvalReport> {
    let forest = inputs.forest;
    let n = forest.partition.n();
    let t = forest.partition.t();
    if inputs.mfc.full_tree.edges.len() + 1 != n {
        return Err(Error::Input(format!(
            "completion spans {} edges, expected {} for n = {n}",
            inputs.mfc.full_tree.edges.len(),
            n - 1
        )));
    }
    if let Some(opt) = inputs.optimal_completion {
        if opt.full_tree.edges.len() + 1 != n {
            return Err(Error::Input("optimal completion does not match the forest".into()));
        }
    }
    let w_mfc = inputs.mfc.w_total;
    let w_opt = inputs.exact_tree.map(|tree| tree.total_weight);
    let cost_ratio = w_opt.map(|w| if w > 0.0 { w_mfc / w } else if w_mfc == 0.0 { 1.0 } else { f64::INFINITY });
    let gamma_bar = match inputs.exact_tree {
        Some(tree) => gamma_bound(forest, tree)?,
        None => None,
    };
    let beta = gamma_bar.map(theorem3_beta).transpose()?;
    let w_tstar = inputs.optimal_completion.map(|c| c.w_total);
    let bound_satisfied = match (cost_ratio, beta, w_tstar) {
        (Some(ratio), Some(b), _) => Some(ratio <= b + BOUND_SLACK),
        (_, _, Some(ts)) => Some(w_mfc <= APPROX_FACTOR * ts + BOUND_SLACK * ts.max(1.0)),
        _ => None,
    };
    Ok(EvalReport {
        n,
        t,
        metric: meta.metric,
        strategy: meta.strategy.clone(),
        seed: meta.seed,
        three_way: meta.three_way,
        w_opt,
        w_mfc,
        w_forest: forest.total_weight,
        w_tstar,
        cost_ratio,
        gamma_bar,
        theorem3_beta: beta,
        bound_satisfied,
        stage_seconds: inputs.seconds,
        stage_fractions: inputs.seconds.fractions(),
        queries: inputs.queries,
        component_sizes: ComponentSizes::from_sizes(&forest.partition.sizes()),
    })
}

impl EvalReport {
    /// Checks the report's own invariants: optimality floor, T* ≤ T̂, and the bound.
    pub fn check(&self) -> Result<()> {
        if let Some(r) = self.cost_ratio {
            if r < 1.0 - BOUND_SLACK {
                return Err(Error::Invariant(format!("cost ratio {r} below 1")));
            }
        }
        if let Some(g) = self.gamma_bar {
            if g < 1.0 - BOUND_SLACK {
                return Err(Error::Invariant(format!("overlap bound {g} below 1")));
            }
        }
        if let Some(ts) = self.w_tstar {
            if ts > self.w_mfc + BOUND_SLACK * ts.max(1.0) {
                return Err(Error::Invariant(format!(
                    "optimal completion {ts} heavier than approximate completion {}",
                    self.w_mfc
                )));
            }
        }
        if self.bound_satisfied == Some(false) {
            return Err(Error::Invariant(format!(
                "approximation bound violated: cost ratio {:?}, beta {:?}",
                self.cost_ratio, self.theorem3_beta
            )));
        }
        Ok(())
    }

    pub const CSV_HEADER: &'static str = "n,t,metric,strategy,seed,three_way,w_opt,w_mfc,w_forest,w_tstar,\
cost_ratio,gamma_bar,theorem3_beta,bound_satisfied,sec_init_partition,sec_sub_mst,sec_mfc_approx,\
sec_exact_baseline,q_init_partition,q_sub_mst,q_coarsen,q_exact_baseline,q_oracle,q_total";

    /// One CSV row in [`CSV_HEADER`](Self::CSV_HEADER) column order; missing values are empty.
    pub fn csv_row(&self) -> String {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        let q = &self.queries;
        let s = &self.stage_seconds;
        [
            self.n.to_string(),
            self.t.to_string(),
            self.metric.to_string(),
            self.strategy.clone(),
            self.seed.to_string(),
            self.three_way.to_string(),
            opt(self.w_opt),
            self.w_mfc.to_string(),
            self.w_forest.to_string(),
            opt(self.w_tstar),
            opt(self.cost_ratio),
            opt(self.gamma_bar),
            opt(self.theorem3_beta),
            opt(self.bound_satisfied),
            s.init_partition.to_string(),
            s.sub_mst.to_string(),
            s.mfc_approx.to_string(),
            opt(s.exact_baseline),
            q.init_partition.to_string(),
            q.sub_mst.to_string(),
            q.coarsen.to_string(),
            q.exact_baseline.to_string(),
            q.oracle.to_string(),
            q.total.to_string(),
        ]
        .join(",")
    }

    /// Text block with overlap, cost ratio, runtime and per-stage proportions.
    pub fn render_table(&self) -> String {
        fn num(v: Option<f64>) -> String {
            v.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"))
        }
        let s = &self.stage_seconds;
        let f = &self.stage_fractions;
        let q = &self.queries;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "n={} t={} metric={} strategy={} seed={}{}",
            self.n,
            self.t,
            self.metric,
            self.strategy,
            self.seed,
            if self.three_way { " three-way" } else { "" }
        );
        let _ = writeln!(out, "  {:<16}{}", "gamma_bar", num(self.gamma_bar));
        let _ = writeln!(out, "  {:<16}{}", "cost ratio", num(self.cost_ratio));
        let runtime_ratio = s.exact_baseline.map(|e| e / s.pipeline_total().max(f64::MIN_POSITIVE));
        let _ = writeln!(out, "  {:<16}{}", "runtime ratio", num(runtime_ratio));
        let _ = writeln!(out, "  {:<16}{:.4}", "runtime (s)", s.pipeline_total());
        let _ = writeln!(out, "  {:<16}{:.3}", "k-centering %", f.init_partition);
        let _ = writeln!(out, "  {:<16}{:.3}", "sub-MST %", f.sub_mst);
        let _ = writeln!(out, "  {:<16}{:.3}", "MFC-approx %", f.mfc_approx);
        let _ = writeln!(
            out,
            "  {:<16}init={} sub-mst={} coarsen={} exact={} oracle={} total={}",
            "queries", q.init_partition, q.sub_mst, q.coarsen, q.exact_baseline, q.oracle, q.total
        );
        out
    }
}
