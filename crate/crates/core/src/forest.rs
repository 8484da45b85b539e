//! Initial forests: a partition of the points plus an exact spanning tree per
//! component.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSetForest;
use crate::error::{Error, Result};
use crate::metric::{MetricSpace, Stage};
use crate::mst::{subset_mst, Edge, SpanningTree};

/// Assignment of `n` points to `t` non-empty components with ids `0..t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    t: usize,
    assignment: Vec<usize>,
    representatives: Option<Vec<usize>>,
}

impl Partition {
    pub fn new(assignment: Vec<usize>, representatives: Option<Vec<usize>>) -> Result<Self> {
        if assignment.is_empty() {
            return Err(Error::Input("partition must cover at least one point".into()));
        }
        let t = assignment.iter().max().map_or(0, |&m| m + 1);
        let mut seen = vec![false; t];
        for &c in &assignment {
            seen[c] = true;
        }
        if let Some(empty) = seen.iter().position(|&s| !s) {
            return Err(Error::Input(format!(
                "component ids must be contiguous 0..{t}; component {empty} is empty"
            )));
        }
        let p = Partition {
            t,
            assignment,
            representatives: None,
        };
        match representatives {
            Some(reps) => p.with_representatives(reps),
            None => Ok(p),
        }
    }

    /// Builds a partition from explicit member lists; component `i` is `components[i]`.
    pub fn from_components(n: usize, components: &[Vec<usize>]) -> Result<Self> {
        let mut assignment = vec![usize::MAX; n];
        for (c, members) in components.iter().enumerate() {
            for &x in members {
                if x >= n {
                    return Err(Error::Input(format!("point {x} out of range for n = {n}")));
                }
                if assignment[x] != usize::MAX {
                    return Err(Error::Input(format!("point {x} appears in two components")));
                }
                assignment[x] = c;
            }
        }
        if let Some(x) = assignment.iter().position(|&c| c == usize::MAX) {
            return Err(Error::Input(format!("point {x} is not assigned to any component")));
        }
        Partition::new(assignment, None)
    }

    pub fn with_representatives(mut self, reps: Vec<usize>) -> Result<Self> {
        if reps.len() != self.t {
            return Err(Error::Input(format!(
                "expected {} representatives, got {}",
                self.t,
                reps.len()
            )));
        }
        for (c, &r) in reps.iter().enumerate() {
            if r >= self.assignment.len() || self.assignment[r] != c {
                return Err(Error::Input(format!(
                    "representative {r} of component {c} is not a member of it"
                )));
            }
        }
        self.representatives = Some(reps);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn component_of(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn representatives(&self) -> Option<&[usize]> {
        self.representatives.as_deref()
    }

    /// Member lists per component, each in increasing index order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.t];
        for (x, &c) in self.assignment.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.t];
        for &c in &self.assignment {
            out[c] += 1;
        }
        out
    }
}

/// Partition plus one spanning tree per component (the completion input).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub partition: Partition,
    pub trees: Vec<SpanningTree>,
    pub tree_weights: Vec<f64>,
    pub total_weight: f64,
}

impl Forest {
    pub fn new(partition: Partition, trees: Vec<SpanningTree>) -> Result<Self> {
        if trees.len() != partition.t() {
            return Err(Error::Input(format!(
                "{} trees for {} components",
                trees.len(),
                partition.t()
            )));
        }
        let sizes = partition.sizes();
        for (c, tree) in trees.iter().enumerate() {
            if tree.edges.len() + 1 != sizes[c] {
                return Err(Error::Input(format!(
                    "tree {c} has {} edges but component has {} points",
                    tree.edges.len(),
                    sizes[c]
                )));
            }
            if let Some(e) = tree
                .edges
                .iter()
                .find(|e| partition.component_of(e.u) != c || partition.component_of(e.v) != c)
            {
                return Err(Error::Input(format!("edge ({}, {}) leaves component {c}", e.u, e.v)));
            }
        }
        let tree_weights: Vec<f64> = trees.iter().map(|t| t.total_weight).collect();
        let total_weight = tree_weights.iter().sum();
        Ok(Forest {
            partition,
            trees,
            tree_weights,
            total_weight,
        })
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.trees.iter().flat_map(|t| t.edges.iter())
    }

    /// Rebuilds a forest from a bare edge list over `0..n`: components are the
    /// connected pieces, numbered by smallest member. Fails on a cycle.
    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self> {
        let mut dsu = DisjointSetForest::new(n);
        for e in edges {
            if e.u >= n || e.v >= n {
                return Err(Error::Input(format!("edge ({}, {}) out of range for n = {n}", e.u, e.v)));
            }
            if !dsu.union(e.u, e.v) {
                return Err(Error::Input(format!("edge ({}, {}) closes a cycle", e.u, e.v)));
            }
        }
        let partition = Partition::new(labels_by_smallest(&mut dsu), None)?;
        let mut per_tree = vec![Vec::new(); partition.t()];
        for e in edges {
            per_tree[partition.component_of(e.u)].push(*e);
        }
        let trees = per_tree.into_iter().map(SpanningTree::from_edges).collect();
        Forest::new(partition, trees)
    }
}

/// Greedy farthest-point k-center with a seeded uniformly random first center.
pub fn greedy_k_center(space: &MetricSpace, t: usize, seed: u64) -> Result<Partition> {
    if space.is_empty() {
        return Err(Error::Input("empty space".into()));
    }
    let first = ChaCha8Rng::seed_from_u64(seed).random_range(0..space.len());
    greedy_k_center_from(space, t, first)
}

/// Greedy farthest-point k-center starting from `first`.
///
/// Each round adds the non-center point farthest from its nearest center
/// (lowest index on ties) and refreshes nearest-center distances, so the whole
/// run costs exactly `n * t` queries charged to [`Stage::InitPartition`].
/// Points go to their nearest center, lowest center id on ties; a center
/// always belongs to its own component even if it duplicates an earlier one.
pub fn greedy_k_center_from(space: &MetricSpace, t: usize, first: usize) -> Result<Partition> {
    let n = space.len();
    if t == 0 || t > n {
        return Err(Error::Input(format!("k-center needs 1 <= t <= n, got t = {t}, n = {n}")));
    }
    if first >= n {
        return Err(Error::Input(format!("first center {first} out of range for n = {n}")));
    }
    let mut centers = Vec::with_capacity(t);
    let mut is_center = vec![false; n];
    let mut nearest = vec![0usize; n];
    let mut radius: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|x| space.distance(x, first, Stage::InitPartition))
        .collect();
    centers.push(first);
    is_center[first] = true;

    for round in 1..t {
        let mut next = None;
        let mut best = f64::NEG_INFINITY;
        for x in 0..n {
            if !is_center[x] && radius[x] > best {
                best = radius[x];
                next = Some(x);
            }
        }
        let c = next.expect("t <= n leaves a non-center point");
        centers.push(c);
        is_center[c] = true;
        radius
            .par_iter_mut()
            .zip(nearest.par_iter_mut())
            .enumerate()
            .for_each(|(x, (r, near))| {
                let d = space.distance(x, c, Stage::InitPartition);
                if d < *r {
                    *r = d;
                    *near = round;
                }
            });
    }
    for (id, &c) in centers.iter().enumerate() {
        nearest[c] = id;
    }
    Partition::new(nearest, Some(centers))
}

/// Covering radius of a center set: the largest distance from a point to its
/// assigned representative. Charged to [`Stage::Oracle`].
pub fn covering_radius(space: &MetricSpace, partition: &Partition) -> Option<f64> {
    let reps = partition.representatives()?;
    Some(
        (0..space.len())
            .map(|x| space.distance(x, reps[partition.component_of(x)], Stage::Oracle))
            .fold(0.0, f64::max),
    )
}

/// Connected components of the symmetrised exact k-nearest-neighbour graph.
///
/// Each unordered pair is evaluated once (`n(n-1)/2` queries charged to
/// [`Stage::InitPartition`]). Neighbour ties resolve to the lowest index.
/// Components are numbered by their smallest member; no representatives are set.
pub fn knn_components(space: &MetricSpace, k: usize) -> Result<Partition> {
    let n = space.len();
    if k == 0 || k >= n {
        return Err(Error::Input(format!("k-NN needs 1 <= k < n, got k = {k}, n = {n}")));
    }
    let mut neighbours: Vec<Vec<(f64, usize)>> = vec![Vec::with_capacity(k + 1); n];
    let offer = |list: &mut Vec<(f64, usize)>, d: f64, j: usize| {
        let pos = list.partition_point(|&(dd, jj)| dd.total_cmp(&d).then(jj.cmp(&j)).is_lt());
        if pos < k {
            list.insert(pos, (d, j));
            list.truncate(k);
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            let d = space.distance(i, j, Stage::InitPartition);
            offer(&mut neighbours[i], d, j);
            offer(&mut neighbours[j], d, i);
        }
    }
    let mut dsu = DisjointSetForest::new(n);
    for (i, list) in neighbours.iter().enumerate() {
        for &(_, j) in list {
            dsu.union(i, j);
        }
    }
    Partition::new(labels_by_smallest(&mut dsu), None)
}

/// Component id per point, numbering components by their smallest member.
fn labels_by_smallest(dsu: &mut DisjointSetForest) -> Vec<usize> {
    let n = dsu.len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|x| {
            let root = dsu.find(x);
            if label[root] == usize::MAX {
                label[root] = next;
                next += 1;
            }
            label[root]
        })
        .collect()
}

/// Exact MST inside every component, charged to [`Stage::SubMst`]
/// (`Σ |P_i|(|P_i|-1)/2` queries in total).
pub fn component_msts(space: &MetricSpace, partition: &Partition) -> Result<Forest> {
    if partition.n() != space.len() {
        return Err(Error::Input(format!(
            "partition covers {} points but space has {}",
            partition.n(),
            space.len()
        )));
    }
    let trees = partition
        .members()
        .par_iter()
        .map(|members| subset_mst(space, members, Stage::SubMst))
        .collect();
    Forest::new(partition.clone(), trees)
}
