//! Metric forest completion: connect an initial forest into a spanning tree of
//! the whole space.
//!
//! The approximate route picks one representative per component, measures every
//! point against every foreign representative (`n(t-1)` queries), and takes
//!
//! ```text
//! w(i -> j) = min_{x in P_i} d(x, s_j)
//! ŵ(i, j)   = min(w(i -> j), w(j -> i))
//! ```
//!
//! as the coarsened edge weight. An MST of the resulting `t`-node graph is mapped
//! back to the witness point pairs and joined with the forest. The exact route
//! ([`optimal_coarsened_weights`]) solves every bichromatic closest pair by brute
//! force and is meant for verification only.

use std::cmp::Ordering;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::{Forest, Partition};
use crate::metric::{MetricSpace, Stage};
use crate::mst::{kruskal, Edge, SpanningTree};

/// `(3 + √5) / 2`, the worst-case factor between the approximate and the
/// optimal completion.
pub const APPROX_FACTOR: f64 = 2.618_033_988_749_895;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepresentativePolicy {
    /// Use the representatives already on the partition (k-center centers).
    KeepExisting,
    LowestIndex,
    SeededRandom(u64),
}

pub fn choose_representatives(partition: &Partition, policy: RepresentativePolicy) -> Result<Partition> {
    let reps = match policy {
        RepresentativePolicy::KeepExisting => partition
            .representatives()
            .ok_or_else(|| Error::Input("partition has no representatives to keep".into()))?
            .to_vec(),
        RepresentativePolicy::LowestIndex => partition.members().iter().map(|m| m[0]).collect(),
        RepresentativePolicy::SeededRandom(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            partition
                .members()
                .iter()
                .map(|m| *m.choose(&mut rng).expect("components are non-empty"))
                .collect()
        }
    };
    partition.clone().with_representatives(reps)
}

/// Complete graph on component nodes with a weight and witness pair per edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoarsenedGraph {
    t: usize,
    weights: Vec<f64>,
    witnesses: Vec<(usize, usize)>,
}

impl CoarsenedGraph {
    fn empty(t: usize) -> Self {
        CoarsenedGraph {
            t,
            weights: vec![f64::INFINITY; t * t],
            witnesses: vec![(usize::MAX, usize::MAX); t * t],
        }
    }

    fn set(&mut self, i: usize, j: usize, w: f64, witness: (usize, usize)) {
        self.weights[i * self.t + j] = w;
        self.weights[j * self.t + i] = w;
        self.witnesses[i * self.t + j] = witness;
        self.witnesses[j * self.t + i] = witness;
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        assert_ne!(i, j, "diagonal of the coarsened graph is unused");
        self.weights[i * self.t + j]
    }

    /// Point pair `(x, y)` with `x` in component `min(i, j)` realising the weight.
    pub fn witness(&self, i: usize, j: usize) -> (usize, usize) {
        assert_ne!(i, j, "diagonal of the coarsened graph is unused");
        self.witnesses[i * self.t + j]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.t).flat_map(move |i| (i + 1..self.t).map(move |j| (i, j)))
    }
}

/// Candidate `(weight, pair)` ordering: weight, then lowest index, then partner.
fn candidate_order(a: (f64, (usize, usize)), b: (f64, (usize, usize))) -> Ordering {
    let key = |(x, y): (usize, usize)| (x.min(y), x.max(y));
    a.0.total_cmp(&b.0).then(key(a.1).cmp(&key(b.1)))
}

/// Representative-based upper bounds on the inter-component distances.
///
/// Charges exactly `n(t-1)` queries to [`Stage::Coarsen`], plus `t(t-1)/2`
/// when `three_way` also measures the two argmin points against each other.
pub fn approx_coarsened_weights(
    space: &MetricSpace,
    partition: &Partition,
    three_way: bool,
) -> Result<CoarsenedGraph> {
    let t = partition.t();
    if t < 2 {
        return Err(Error::Input("coarsening needs at least two components".into()));
    }
    check_cover(space, partition)?;
    let reps = partition
        .representatives()
        .ok_or_else(|| Error::Input("representatives must be chosen before coarsening".into()))?;

    // closest[i][j] = (w(i -> j), argmin point in P_i)
    let closest: Vec<Vec<(f64, usize)>> = partition
        .members()
        .par_iter()
        .enumerate()
        .map(|(i, members)| {
            let mut row = vec![(f64::INFINITY, usize::MAX); t];
            for &x in members {
                for (j, &s) in reps.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let d = space.distance(x, s, Stage::Coarsen);
                    if d < row[j].0 {
                        row[j] = (d, x);
                    }
                }
            }
            row
        })
        .collect();

    let mut graph = CoarsenedGraph::empty(t);
    for i in 0..t {
        for j in i + 1..t {
            let (w_ij, x_i) = closest[i][j];
            let (w_ji, x_j) = closest[j][i];
            let forward = (w_ij, (x_i, reps[j]));
            let backward = (w_ji, (reps[i], x_j));
            let mut best = if candidate_order(backward, forward).is_lt() { backward } else { forward };
            if three_way {
                let direct = (space.distance(x_i, x_j, Stage::Coarsen), (x_i, x_j));
                if candidate_order(direct, best).is_lt() {
                    best = direct;
                }
            }
            graph.set(i, j, best.0, best.1);
        }
    }
    Ok(graph)
}

/// Exact inter-component distances by brute-force bichromatic closest pair,
/// charged to [`Stage::Oracle`]. Ties resolve to the lexicographically smallest pair.
pub fn optimal_coarsened_weights(space: &MetricSpace, partition: &Partition, cap: usize) -> Result<CoarsenedGraph> {
    let t = partition.t();
    let n = space.len();
    if t < 2 {
        return Err(Error::Input("coarsening needs at least two components".into()));
    }
    check_cover(space, partition)?;
    if n > cap {
        return Err(Error::OverCap { n, cap, what: "the bichromatic closest-pair oracle" });
    }
    let assign = partition.assignment();
    let blank = || vec![(f64::INFINITY, (usize::MAX, usize::MAX)); t * t];
    let best = (0..n)
        .into_par_iter()
        .fold(blank, |mut acc, x| {
            for y in x + 1..n {
                let (ci, cj) = (assign[x], assign[y]);
                if ci == cj {
                    continue;
                }
                let slot = ci.min(cj) * t + ci.max(cj);
                let cand = (space.distance(x, y, Stage::Oracle), (x, y));
                if candidate_order(cand, acc[slot]).is_lt() {
                    acc[slot] = cand;
                }
            }
            acc
        })
        .reduce(blank, |mut a, b| {
            for (l, r) in a.iter_mut().zip(b) {
                if candidate_order(r, *l).is_lt() {
                    *l = r;
                }
            }
            a
        });

    let mut graph = CoarsenedGraph::empty(t);
    for i in 0..t {
        for j in i + 1..t {
            let (w, pair) = best[i * t + j];
            graph.set(i, j, w, pair);
        }
    }
    Ok(graph)
}

fn check_cover(space: &MetricSpace, partition: &Partition) -> Result<()> {
    if partition.n() != space.len() {
        return Err(Error::Input(format!(
            "partition covers {} points but space has {}",
            partition.n(),
            space.len()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompletionResult {
    /// Inter-component edges added to the forest, one per coarsened tree edge.
    pub completion_edges: Vec<Edge>,
    /// MST of the coarsened graph over component ids.
    pub coarsened_tree: SpanningTree,
    pub full_tree: SpanningTree,
    pub w_completion: f64,
    pub w_forest: f64,
    pub w_total: f64,
}

/// Connects `forest` through an MST of `coarsened` and returns the full tree.
pub fn complete_forest(forest: &Forest, coarsened: &CoarsenedGraph) -> Result<CompletionResult> {
    let partition = &forest.partition;
    let t = partition.t();
    let n = partition.n();
    if coarsened.t() != t {
        return Err(Error::Input(format!(
            "coarsened graph has {} nodes but forest has {t} components",
            coarsened.t()
        )));
    }
    let coarsened_tree = if t == 1 {
        SpanningTree::default()
    } else {
        let edges: Vec<Edge> = coarsened
            .pairs()
            .map(|(i, j)| Edge::new(i, j, coarsened.weight(i, j)))
            .collect();
        kruskal(t, &edges)?
    };
    let completion_edges: Vec<Edge> = coarsened_tree
        .edges
        .iter()
        .map(|e| {
            let (x, y) = coarsened.witness(e.u, e.v);
            Edge::new(x, y, e.w)
        })
        .collect();
    if let Some(e) = completion_edges
        .iter()
        .find(|e| partition.component_of(e.u) == partition.component_of(e.v))
    {
        return Err(Error::Invariant(format!(
            "completion edge ({}, {}) does not cross components",
            e.u, e.v
        )));
    }
    let full_tree = SpanningTree::from_edges(forest.edges().chain(&completion_edges).copied().collect());
    full_tree.validate(n)?;
    let w_completion = coarsened_tree.total_weight;
    Ok(CompletionResult {
        completion_edges,
        coarsened_tree,
        full_tree,
        w_completion,
        w_forest: forest.total_weight,
        w_total: w_completion + forest.total_weight,
    })
}

/// Representative selection, approximate coarsening and completion in one call.
pub fn mfc_approx(
    space: &MetricSpace,
    forest: &Forest,
    policy: RepresentativePolicy,
    three_way: bool,
) -> Result<CompletionResult> {
    if forest.partition.t() == 1 {
        return complete_forest(forest, &CoarsenedGraph::empty(1));
    }
    let partition = choose_representatives(&forest.partition, policy)?;
    let graph = approx_coarsened_weights(space, &partition, three_way)?;
    complete_forest(forest, &graph)
}
