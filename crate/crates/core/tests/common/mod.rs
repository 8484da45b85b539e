//! Independent brute-force oracles shared by the integration and acceptance tests.
#![allow(dead_code, clippy::needless_range_loop)]

use metric_forest::datagen::uniform_cloud;
use metric_forest::forest::Partition;
use metric_forest::metric::{Dataset, MetricKind, MetricSpace, Stage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const METRICS: [MetricKind; 4] = [
    MetricKind::Euclidean,
    MetricKind::Jaccard,
    MetricKind::Hamming,
    MetricKind::Levenshtein,
];

fn random_word(rng: &mut ChaCha8Rng, len: usize) -> String {
    (0..len).map(|_| ['a', 'b', 'c'][rng.random_range(0..3)]).collect()
}

/// Small random instance for any of the four point metrics. Alphabets and id
/// ranges are tiny so ties and duplicates are common.
pub fn random_dataset(metric: MetricKind, n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match metric {
        MetricKind::Euclidean => uniform_cloud(n, rng.random_range(1..=4), seed).unwrap(),
        MetricKind::Jaccard => Dataset::sets(
            (0..n)
                .map(|_| {
                    let k = rng.random_range(0..=5);
                    (0..k).map(|_| rng.random_range(0..10u32)).collect()
                })
                .collect(),
        )
        .unwrap(),
        MetricKind::Hamming => {
            let len = rng.random_range(1..=6);
            let words: Vec<String> = (0..n).map(|_| random_word(&mut rng, len)).collect();
            Dataset::strings(&words).unwrap()
        }
        MetricKind::Levenshtein => {
            let words: Vec<String> = (0..n)
                .map(|_| {
                    let len = rng.random_range(0..=6);
                    random_word(&mut rng, len)
                })
                .collect();
            Dataset::strings(&words).unwrap()
        }
        MetricKind::Planted => panic!("planted instances come from datagen"),
    }
}

pub fn random_space(metric: MetricKind, n: usize, seed: u64) -> MetricSpace {
    MetricSpace::new(random_dataset(metric, n, seed), metric).unwrap()
}

/// Full distance matrix, charged to the oracle stage and then wiped from the ledger.
pub fn matrix(space: &MetricSpace) -> Vec<Vec<f64>> {
    let before = space.ledger();
    let n = space.len();
    let m = (0..n)
        .map(|i| (0..n).map(|j| space.distance(i, j, Stage::Oracle)).collect())
        .collect();
    assert_eq!(space.ledger().oracle - before.oracle, (n * n) as u64);
    space.reset_ledger();
    m
}

/// Minimum spanning-tree weight by decoding every Prüfer sequence.
pub fn prufer_min_weight(d: &[Vec<f64>]) -> f64 {
    prufer_min_tree(d).iter().sum()
}

/// Edge weights of a minimum spanning tree found by decoding every Prüfer
/// sequence, sorted ascending. All minimum spanning trees share this multiset.
pub fn prufer_min_tree(d: &[Vec<f64>]) -> Vec<f64> {
    let n = d.len();
    match n {
        0 | 1 => return Vec::new(),
        2 => return vec![d[0][1]],
        _ => {}
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    let mut best = f64::INFINITY;
    let mut best_seq = seq.clone();
    let mut degree = vec![0usize; n];
    let decode = |seq: &[usize], degree: &mut Vec<usize>, mut visit: Box<dyn FnMut(usize, usize) + '_>| {
        degree.iter_mut().for_each(|x| *x = 1);
        for &s in seq {
            degree[s] += 1;
        }
        for &s in seq {
            let leaf = (0..n).find(|&x| degree[x] == 1).unwrap();
            visit(leaf, s);
            degree[leaf] = 0;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&x| degree[x] == 1).collect();
        visit(rest[0], rest[1]);
    };
    loop {
        let mut w = 0.0;
        decode(&seq, &mut degree, Box::new(|a, b| w += d[a][b]));
        if w < best {
            best = w;
            best_seq.clone_from(&seq);
        }
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == len {
                let mut weights = Vec::with_capacity(n - 1);
                decode(&best_seq, &mut degree, Box::new(|a, b| weights.push(d[a][b])));
                weights.sort_by(f64::total_cmp);
                return weights;
            }
            seq[k] += 1;
            if seq[k] < n {
                break;
            }
            seq[k] = 0;
            k += 1;
        }
    }
}

/// `w*(i, j)`: bichromatic closest pair by nested loops.
pub fn brute_w_star(d: &[Vec<f64>], p: &Partition) -> Vec<Vec<f64>> {
    let t = p.t();
    let mut w = vec![vec![f64::INFINITY; t]; t];
    for x in 0..d.len() {
        for y in 0..d.len() {
            let (a, b) = (p.component_of(x), p.component_of(y));
            if a != b && d[x][y] < w[a][b] {
                w[a][b] = d[x][y];
            }
        }
    }
    w
}

/// `ŵ(i, j) = min(min_{x∈P_i} d(x, s_j), min_{y∈P_j} d(y, s_i))`.
pub fn brute_w_hat(d: &[Vec<f64>], p: &Partition) -> Vec<Vec<f64>> {
    let reps = p.representatives().expect("representatives");
    let t = p.t();
    let mut w = vec![vec![f64::INFINITY; t]; t];
    for x in 0..d.len() {
        let a = p.component_of(x);
        for (b, &s) in reps.iter().enumerate() {
            if a != b {
                w[a][b] = w[a][b].min(d[x][s]);
                w[b][a] = w[b][a].min(d[x][s]);
            }
        }
    }
    w
}

/// Covering radius of a center set.
pub fn radius(d: &[Vec<f64>], centers: &[usize]) -> f64 {
    (0..d.len())
        .map(|x| centers.iter().map(|&c| d[x][c]).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Optimal k-center radius over every `t`-subset.
pub fn exhaustive_k_center(d: &[Vec<f64>], t: usize) -> f64 {
    fn rec(d: &[Vec<f64>], t: usize, start: usize, chosen: &mut Vec<usize>, best: &mut f64) {
        if chosen.len() == t {
            *best = best.min(radius(d, chosen));
            return;
        }
        for c in start..d.len() {
            if d.len() - c < t - chosen.len() {
                break;
            }
            chosen.push(c);
            rec(d, t, c + 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = f64::INFINITY;
    rec(d, t, 0, &mut Vec::new(), &mut best);
    best
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
