//! Finite metric spaces and the counted distance oracle.
//!
//! Every distance evaluation in the crate goes through [`MetricSpace::distance`],
//! which charges exactly one query to the [`Stage`] named by the caller. No
//! values are cached here: the ledger reflects the true number of evaluations.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Payload type shared by all points of a dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataKind {
    Vectors,
    Sets,
    Strings,
    Planted,
}

impl fmt::Display for DataKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DataKind::Vectors => "vectors",
            DataKind::Sets => "sets",
            DataKind::Strings => "strings",
            DataKind::Planted => "planted",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    Euclidean,
    Jaccard,
    Hamming,
    Levenshtein,
    /// Index-table metric of the planted-pair adversary.
    Planted,
}

impl MetricKind {
    pub fn required_kind(self) -> DataKind {
        match self {
            MetricKind::Euclidean => DataKind::Vectors,
            MetricKind::Jaccard => DataKind::Sets,
            MetricKind::Hamming | MetricKind::Levenshtein => DataKind::Strings,
            MetricKind::Planted => DataKind::Planted,
        }
    }

    /// Metrics whose values are exact (integers or exact rationals).
    pub fn is_discrete(self) -> bool {
        !matches!(self, MetricKind::Euclidean)
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::Euclidean => "euclidean",
            MetricKind::Jaccard => "jaccard",
            MetricKind::Hamming => "hamming",
            MetricKind::Levenshtein => "levenshtein",
            MetricKind::Planted => "planted",
        })
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(MetricKind::Euclidean),
            "jaccard" => Ok(MetricKind::Jaccard),
            "hamming" => Ok(MetricKind::Hamming),
            "levenshtein" => Ok(MetricKind::Levenshtein),
            "planted" => Ok(MetricKind::Planted),
            other => Err(Error::Config(format!("unknown metric `{other}`"))),
        }
    }
}

/// Pipeline stage a distance query is charged to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    InitPartition,
    SubMst,
    Coarsen,
    ExactBaseline,
    Oracle,
}

impl Stage {
    pub const ALL: [Stage; 5] = [
        Stage::InitPartition,
        Stage::SubMst,
        Stage::Coarsen,
        Stage::ExactBaseline,
        Stage::Oracle,
    ];

    fn slot(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Stage::InitPartition => "init-partition",
            Stage::SubMst => "sub-mst",
            Stage::Coarsen => "coarsen",
            Stage::ExactBaseline => "exact-baseline",
            Stage::Oracle => "oracle",
        }
    }
}

/// Snapshot of per-stage query counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct QueryLedger {
    pub init_partition: u64,
    pub sub_mst: u64,
    pub coarsen: u64,
    pub exact_baseline: u64,
    pub oracle: u64,
    pub total: u64,
}

impl QueryLedger {
    pub fn get(&self, stage: Stage) -> u64 {
        match stage {
            Stage::InitPartition => self.init_partition,
            Stage::SubMst => self.sub_mst,
            Stage::Coarsen => self.coarsen,
            Stage::ExactBaseline => self.exact_baseline,
            Stage::Oracle => self.oracle,
        }
    }

    /// Per-stage difference `self - earlier`, used to attribute queries to one call.
    pub fn since(&self, earlier: &QueryLedger) -> QueryLedger {
        QueryLedger {
            init_partition: self.init_partition - earlier.init_partition,
            sub_mst: self.sub_mst - earlier.sub_mst,
            coarsen: self.coarsen - earlier.coarsen,
            exact_baseline: self.exact_baseline - earlier.exact_baseline,
            oracle: self.oracle - earlier.oracle,
            total: self.total - earlier.total,
        }
    }
}

#[derive(Default)]
struct Counters([AtomicU64; 5]);

impl Counters {
    fn snapshot(&self) -> QueryLedger {
        let c: [u64; 5] = std::array::from_fn(|k| self.0[k].load(Ordering::Relaxed));
        QueryLedger {
            init_partition: c[0],
            sub_mst: c[1],
            coarsen: c[2],
            exact_baseline: c[3],
            oracle: c[4],
            total: c.iter().sum(),
        }
    }
}

/// Lookup table of the planted-pair adversary: one cross pair at distance 1,
/// every other distinct pair at distance `far`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedTable {
    pub n: usize,
    pub far: f64,
    pub pair: (usize, usize),
}

impl PlantedTable {
    fn lookup(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else if (i.min(j), i.max(j)) == self.pair {
            1.0
        } else {
            self.far
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Points {
    Vectors { dim: usize, coords: Vec<f64> },
    Sets(Vec<Vec<u32>>),
    Strings(Vec<Vec<char>>),
    Planted(PlantedTable),
}

/// A finite, homogeneous collection of points.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    points: Points,
}

impl Dataset {
    pub fn vectors(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Input("dataset must contain at least one point".into()))?;
        if dim == 0 {
            return Err(Error::Input("vectors must have dimension >= 1".into()));
        }
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Input(format!(
                    "point {i} has dimension {} but point 0 has {dim}",
                    row.len()
                )));
            }
            if let Some(x) = row.iter().find(|x| !x.is_finite()) {
                return Err(Error::Input(format!("point {i} has non-finite coordinate {x}")));
            }
            coords.extend_from_slice(row);
        }
        Ok(Dataset {
            points: Points::Vectors { dim, coords },
        })
    }

    /// Sets are normalised to sorted, duplicate-free id lists.
    pub fn sets(mut sets: Vec<Vec<u32>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Input("dataset must contain at least one point".into()));
        }
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        Ok(Dataset {
            points: Points::Sets(sets),
        })
    }

    pub fn strings<S: AsRef<str>>(strings: &[S]) -> Result<Self> {
        if strings.is_empty() {
            return Err(Error::Input("dataset must contain at least one point".into()));
        }
        Ok(Dataset {
            points: Points::Strings(strings.iter().map(|s| s.as_ref().chars().collect()).collect()),
        })
    }

    pub fn planted(table: PlantedTable) -> Self {
        Dataset {
            points: Points::Planted(table),
        }
    }

    pub fn len(&self) -> usize {
        match &self.points {
            Points::Vectors { dim, coords } => coords.len() / dim,
            Points::Sets(s) => s.len(),
            Points::Strings(s) => s.len(),
            Points::Planted(t) => t.n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> DataKind {
        match &self.points {
            Points::Vectors { .. } => DataKind::Vectors,
            Points::Sets(_) => DataKind::Sets,
            Points::Strings(_) => DataKind::Strings,
            Points::Planted(_) => DataKind::Planted,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match &self.points {
            Points::Vectors { dim, .. } => Some(*dim),
            _ => None,
        }
    }

    pub fn vector(&self, i: usize) -> Option<&[f64]> {
        match &self.points {
            Points::Vectors { dim, coords } => Some(&coords[i * dim..(i + 1) * dim]),
            _ => None,
        }
    }

    pub fn set(&self, i: usize) -> Option<&[u32]> {
        match &self.points {
            Points::Sets(s) => Some(&s[i]),
            _ => None,
        }
    }

    pub fn string(&self, i: usize) -> Option<String> {
        match &self.points {
            Points::Strings(s) => Some(s[i].iter().collect()),
            _ => None,
        }
    }

    pub fn planted_table(&self) -> Option<&PlantedTable> {
        match &self.points {
            Points::Planted(t) => Some(t),
            _ => None,
        }
    }

    /// New dataset made of the listed points, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Input("selection must be non-empty".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.len()) {
            return Err(Error::Input(format!("index {bad} out of range for n = {}", self.len())));
        }
        let points = match &self.points {
            Points::Vectors { dim, coords } => Points::Vectors {
                dim: *dim,
                coords: indices
                    .iter()
                    .flat_map(|&i| coords[i * dim..(i + 1) * dim].iter().copied())
                    .collect(),
            },
            Points::Sets(s) => Points::Sets(indices.iter().map(|&i| s[i].clone()).collect()),
            Points::Strings(s) => Points::Strings(indices.iter().map(|&i| s[i].clone()).collect()),
            Points::Planted(_) => {
                return Err(Error::Config("planted instances cannot be subsampled".into()))
            }
        };
        Ok(Dataset { points })
    }
}

/// A dataset paired with a compatible metric and a query ledger.
///
/// Safe to share across threads; concurrent queries are counted exactly.
pub struct MetricSpace {
    dataset: Dataset,
    metric: MetricKind,
    counters: Counters,
}

impl fmt::Debug for MetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricSpace")
            .field("n", &self.len())
            .field("kind", &self.dataset.kind())
            .field("metric", &self.metric)
            .field("ledger", &self.ledger())
            .finish()
    }
}

impl MetricSpace {
    /// Pairs `dataset` with `metric`, rejecting incompatible combinations.
    ///
    /// Hamming distance requires every string to have the same length; this is
    /// checked here so that [`distance`](Self::distance) is infallible.
    pub fn new(dataset: Dataset, metric: MetricKind) -> Result<Self> {
        if dataset.kind() != metric.required_kind() {
            return Err(Error::Config(format!(
                "metric {metric} requires {} data, got {}",
                metric.required_kind(),
                dataset.kind()
            )));
        }
        if dataset.is_empty() {
            return Err(Error::Input("dataset must contain at least one point".into()));
        }
        if metric == MetricKind::Hamming {
            if let Points::Strings(s) = &dataset.points {
                let len = s[0].len();
                if let Some(i) = s.iter().position(|x| x.len() != len) {
                    return Err(Error::Input(format!(
                        "hamming distance needs equal-length strings: point {i} has length {} but point 0 has {len}",
                        s[i].len()
                    )));
                }
            }
        }
        Ok(MetricSpace {
            dataset,
            metric,
            counters: Counters::default(),
        })
    }

    pub fn len(&self) -> usize {
        self.dataset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dataset.is_empty()
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    /// Distance between points `i` and `j`, charged to `stage`.
    ///
    /// Panics if either index is out of range.
    #[inline]
    pub fn distance(&self, i: usize, j: usize, stage: Stage) -> f64 {
        let n = self.len();
        assert!(i < n && j < n, "point index out of range: ({i}, {j}) with n = {n}");
        self.counters.0[stage.slot()].fetch_add(1, Ordering::Relaxed);
        if i == j {
            return 0.0;
        }
        match &self.dataset.points {
            Points::Vectors { dim, coords } => {
                euclidean(&coords[i * dim..(i + 1) * dim], &coords[j * dim..(j + 1) * dim])
            }
            Points::Sets(s) => jaccard(&s[i], &s[j]),
            Points::Strings(s) => match self.metric {
                MetricKind::Hamming => hamming(&s[i], &s[j]) as f64,
                _ => levenshtein(&s[i], &s[j]) as f64,
            },
            Points::Planted(t) => t.lookup(i, j),
        }
    }

    pub fn ledger(&self) -> QueryLedger {
        self.counters.snapshot()
    }

    pub fn reset_ledger(&self) {
        for c in &self.counters.0 {
            c.store(0, Ordering::Relaxed);
        }
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `1 - |a ∩ b| / |a ∪ b|` over sorted, duplicate-free slices. Two empty sets are at distance 0.
pub fn jaccard(a: &[u32], b: &[u32]) -> f64 {
    let (mut i, mut j, mut common) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let union = a.len() + b.len() - common;
    if union == 0 {
        0.0
    } else {
        1.0 - common as f64 / union as f64
    }
}

pub fn hamming<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Unit-cost edit distance, two-row dynamic program.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(ds: Dataset, m: MetricKind) -> MetricSpace {
        MetricSpace::new(ds, m).unwrap()
    }

    #[test]
    fn euclidean_three_four_five() {
        let s = space(Dataset::vectors(vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap(), MetricKind::Euclidean);
        assert_eq!(s.distance(0, 1, Stage::Oracle), 5.0);
    }

    #[test]
    fn jaccard_overlapping_sets() {
        let s = space(Dataset::sets(vec![vec![1, 2, 3], vec![4, 3, 2]]).unwrap(), MetricKind::Jaccard);
        assert_eq!(s.distance(0, 1, Stage::Oracle), 0.5);
    }

    #[test]
    fn jaccard_empty_sets_are_identical() {
        assert_eq!(jaccard(&[], &[]), 0.0);
        assert_eq!(jaccard(&[], &[1]), 1.0);
    }

    #[test]
    fn sets_are_normalised() {
        let ds = Dataset::sets(vec![vec![3, 1, 3, 2]]).unwrap();
        assert_eq!(ds.set(0).unwrap(), &[1, 2, 3]);
    }

    #[test]
    fn levenshtein_kitten_sitting() {
        let s = space(Dataset::strings(&["kitten", "sitting"]).unwrap(), MetricKind::Levenshtein);
        assert_eq!(s.distance(0, 1, Stage::Oracle), 3.0);
        assert_eq!(levenshtein::<char>(&[], &['a', 'b']), 2);
    }

    #[test]
    fn levenshtein_counts_code_points() {
        let a: Vec<char> = "naïve".chars().collect();
        let b: Vec<char> = "naive".chars().collect();
        assert_eq!(levenshtein(&a, &b), 1);
    }

    #[test]
    fn hamming_identity() {
        let s = space(Dataset::strings(&["abc", "abc", "abd"]).unwrap(), MetricKind::Hamming);
        assert_eq!(s.distance(0, 1, Stage::Oracle), 0.0);
        assert_eq!(s.distance(0, 2, Stage::Oracle), 1.0);
    }

    #[test]
    fn hamming_rejects_unequal_lengths() {
        let err = MetricSpace::new(Dataset::strings(&["abc", "ab"]).unwrap(), MetricKind::Hamming).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn metric_kind_mismatch_is_config_error() {
        let err = MetricSpace::new(Dataset::strings(&["abc"]).unwrap(), MetricKind::Euclidean).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        let err = MetricSpace::new(Dataset::vectors(vec![vec![1.0]]).unwrap(), MetricKind::Jaccard).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn vectors_reject_ragged_rows() {
        assert!(Dataset::vectors(vec![vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(Dataset::vectors(vec![vec![]]).is_err());
        assert!(Dataset::vectors(vec![]).is_err());
    }

    #[test]
    fn ledger_starts_empty_and_counts() {
        let s = space(Dataset::vectors(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap(), MetricKind::Euclidean);
        assert_eq!(s.ledger().total, 0);
        for _ in 0..3 {
            s.distance(0, 1, Stage::SubMst);
        }
        let l = s.ledger();
        assert_eq!((l.sub_mst, l.total), (3, 3));
        // snapshot does not mutate
        assert_eq!(s.ledger(), l);
    }

    #[test]
    fn ledger_is_additive_and_counts_self_queries() {
        let s = space(Dataset::vectors(vec![vec![0.0], vec![1.0]]).unwrap(), MetricKind::Euclidean);
        for _ in 0..2 {
            s.distance(1, 1, Stage::Coarsen);
        }
        for _ in 0..5 {
            s.distance(0, 1, Stage::Oracle);
        }
        let l = s.ledger();
        assert_eq!(l.total, 7);
        assert_eq!(l.total, Stage::ALL.iter().map(|&st| l.get(st)).sum::<u64>());
        s.reset_ledger();
        assert_eq!(s.ledger(), QueryLedger::default());
    }

    #[test]
    fn concurrent_queries_are_counted_exactly() {
        use rayon::prelude::*;
        let s = space(Dataset::vectors((0..50).map(|i| vec![i as f64]).collect()).unwrap(), MetricKind::Euclidean);
        (0..50usize).into_par_iter().for_each(|i| {
            for j in 0..50 {
                s.distance(i, j, Stage::ExactBaseline);
            }
        });
        assert_eq!(s.ledger().exact_baseline, 2500);
    }

    #[test]
    fn select_keeps_order() {
        let ds = Dataset::strings(&["a", "b", "c"]).unwrap();
        let sub = ds.select(&[2, 0]).unwrap();
        assert_eq!(sub.string(0).unwrap(), "c");
        assert_eq!(sub.len(), 2);
        assert!(ds.select(&[3]).is_err());
    }
}
