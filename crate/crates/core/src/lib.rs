//! Approximate minimum spanning trees over arbitrary finite metric spaces.
//!
//! The pipeline has three stages:
//!
//! 1. **Initial forest** ([`forest`]): partition the points cheaply (greedy
//!    k-center or k-NN graph components) and take an exact MST inside each part.
//! 2. **Completion** ([`completion`]): pick a representative per component,
//!    bound every inter-component distance through the representatives with
//!    `O(nt)` queries, and join the forest along an MST of the coarsened graph.
//!    The result weighs at most `(3 + √5)/2` times the optimal completion.
//! 3. **Evaluation** ([`eval`]): against the exact baseline ([`mst`]) report the
//!    cost ratio, the overlap bound γ̄ and the learning-augmented guarantee
//!    `(2γ̄ + 1 + √(4γ̄ + 1))/2`.
//!
//! Every distance goes through [`metric::MetricSpace::distance`], which counts
//! queries per [`metric::Stage`].
//!
//! ```
//! use metric_forest::prelude::*;
//!
//! let data = uniform_cloud(500, 4, 7).unwrap();
//! let space = MetricSpace::new(data, MetricKind::Euclidean).unwrap();
//! let partition = greedy_k_center(&space, 16, 7).unwrap();
//! let forest = component_msts(&space, &partition).unwrap();
//! let result = mfc_approx(&space, &forest, RepresentativePolicy::KeepExisting, false).unwrap();
//! assert_eq!(result.full_tree.edges.len(), 499);
//! assert_eq!(space.ledger().coarsen, 500 * 15);
//! ```

pub mod completion;
pub mod datagen;
pub mod dsu;
pub mod error;
pub mod eval;
pub mod forest;
pub mod io;
pub mod metric;
pub mod mst;
pub mod pipeline;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::completion::{
        approx_coarsened_weights, choose_representatives, complete_forest, mfc_approx, optimal_coarsened_weights,
        CoarsenedGraph, CompletionResult, RepresentativePolicy, APPROX_FACTOR,
    };
    pub use crate::datagen::{gaussian_mixture, planted_pair, uniform_cloud, GenSpec};
    pub use crate::error::{Error, Result};
    pub use crate::eval::{check_unbounded_edges, evaluate, gamma_bound, theorem3_beta, EvalReport};
    pub use crate::forest::{component_msts, greedy_k_center, greedy_k_center_from, knn_components, Forest, Partition};
    pub use crate::metric::{Dataset, MetricKind, MetricSpace, QueryLedger, Stage};
    pub use crate::mst::{exact_metric_mst, kruskal, Edge, SpanningTree, DEFAULT_N_CAP};
    pub use crate::pipeline::{run, sweep, DataSource, RunConfig, Strategy};
}
