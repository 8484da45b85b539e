//! Exact minimum spanning trees: Kruskal over explicit edge lists and the
//! quadratic baseline over the implicit complete graph of a metric space.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSetForest;
use crate::error::{Error, Result};
use crate::metric::{MetricSpace, Stage};

/// Largest `n` the quadratic routines accept unless the caller raises it.
pub const DEFAULT_N_CAP: usize = 50_000;

/// Undirected weighted edge stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn new(a: usize, b: usize, w: f64) -> Self {
        debug_assert_ne!(a, b, "self-loop");
        Edge {
            u: a.min(b),
            v: a.max(b),
            w,
        }
    }

    /// Total order `(w, u, v)` used for every tie-break in the crate.
    pub fn order(&self, other: &Edge) -> Ordering {
        self.w
            .total_cmp(&other.w)
            .then(self.u.cmp(&other.u))
            .then(self.v.cmp(&other.v))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpanningTree {
    pub edges: Vec<Edge>,
    pub total_weight: f64,
}

impl SpanningTree {
    pub fn from_edges(edges: Vec<Edge>) -> Self {
        let total_weight = edges.iter().map(|e| e.w).sum();
        SpanningTree { edges, total_weight }
    }

    /// Checks that the edges form a spanning tree of `0..n` and that the
    /// recorded total matches the edge sum.
    pub fn validate(&self, n: usize) -> Result<()> {
        if n > 0 && self.edges.len() != n - 1 {
            return Err(Error::Invariant(format!(
                "spanning tree over {n} nodes must have {} edges, found {}",
                n - 1,
                self.edges.len()
            )));
        }
        let mut dsu = DisjointSetForest::new(n);
        for e in &self.edges {
            if e.u >= n || e.v >= n || e.u == e.v {
                return Err(Error::Invariant(format!("edge ({}, {}) invalid for n = {n}", e.u, e.v)));
            }
            if !dsu.union(e.u, e.v) {
                return Err(Error::Invariant(format!("edge ({}, {}) closes a cycle", e.u, e.v)));
            }
        }
        let sum: f64 = self.edges.iter().map(|e| e.w).sum();
        if !weights_agree(sum, self.total_weight) {
            return Err(Error::Invariant(format!(
                "recorded weight {} differs from edge sum {sum}",
                self.total_weight
            )));
        }
        Ok(())
    }
}

pub(crate) fn weights_agree(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Minimum spanning tree of the graph on `0..n` with the given edges.
///
/// Edges are visited in `(w, u, v)` order, so the result is fully determined
/// by the input even when weights tie.
pub fn kruskal(n: usize, edges: &[Edge]) -> Result<SpanningTree> {
    let mut sorted: Vec<Edge> = edges.iter().map(|e| Edge::new(e.u, e.v, e.w)).collect();
    sorted.sort_unstable_by(Edge::order);
    let mut dsu = DisjointSetForest::new(n);
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    for e in sorted {
        if e.u >= n || e.v >= n {
            return Err(Error::Input(format!("edge ({}, {}) out of range for n = {n}", e.u, e.v)));
        }
        if dsu.union(e.u, e.v) {
            chosen.push(e);
            if chosen.len() + 1 == n {
                break;
            }
        }
    }
    if dsu.components() > 1 {
        let b = (1..n).find(|&x| !dsu.same(0, x)).unwrap_or(0);
        return Err(Error::Disconnected { a: 0, b });
    }
    Ok(SpanningTree::from_edges(chosen))
}

/// Exact MST of the complete graph over `space`: all `n(n-1)/2` distances are
/// generated (charged to [`Stage::ExactBaseline`]), sorted, and fed to Kruskal.
pub fn exact_metric_mst(space: &MetricSpace, cap: usize) -> Result<SpanningTree> {
    let n = space.len();
    if n < 2 {
        return Err(Error::Input("exact MST needs at least two points".into()));
    }
    if n > cap {
        return Err(Error::OverCap { n, cap, what: "the exact MST baseline" });
    }
    // 16-byte records keep the O(n^2) buffer as small as possible.
    let mut edges: Vec<(f64, u32, u32)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..n).map(move |j| (space.distance(i, j, Stage::ExactBaseline), i as u32, j as u32))
        })
        .collect();
    edges.par_sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut dsu = DisjointSetForest::new(n);
    let mut chosen = Vec::with_capacity(n - 1);
    for (w, u, v) in edges {
        if dsu.union(u as usize, v as usize) {
            chosen.push(Edge::new(u as usize, v as usize, w));
            if chosen.len() + 1 == n {
                break;
            }
        }
    }
    Ok(SpanningTree::from_edges(chosen))
}

/// Exact MST of the points `members` (global indices), charged to `stage`.
/// Returned edges use global indices.
pub(crate) fn subset_mst(space: &MetricSpace, members: &[usize], stage: Stage) -> SpanningTree {
    let m = members.len();
    let mut local = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for a in 0..m {
        for b in a + 1..m {
            local.push(Edge::new(a, b, space.distance(members[a], members[b], stage)));
        }
    }
    let tree = kruskal(m, &local).expect("complete graph is connected");
    SpanningTree::from_edges(
        tree.edges
            .into_iter()
            .map(|e| Edge::new(members[e.u], members[e.v], e.w))
            .collect(),
    )
}
