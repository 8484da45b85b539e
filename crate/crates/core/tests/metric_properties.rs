mod common;

use common::*;
use metric_forest::datagen::{gaussian_mixture, planted_pair};
use metric_forest::io::{read_dataset, write_dataset};
use metric_forest::metric::{Dataset, MetricKind, MetricSpace, Stage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sampled symmetry, identity and triangle checks; returns the number of triples tried.
fn check_metric_axioms(space: &MetricSpace, samples: usize, seed: u64) -> usize {
    let n = space.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = |i, j| space.distance(i, j, Stage::Oracle);
    for i in 0..n.min(50) {
        assert_eq!(d(i, i), 0.0, "d({i},{i}) != 0");
    }
    for _ in 0..samples {
        let (x, y, z) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
        let (xy, yx, yz, xz) = (d(x, y), d(y, x), d(y, z), d(x, z));
        assert!(xy >= 0.0 && xy.is_finite());
        assert_eq!(xy, yx, "asymmetric at ({x},{y})");
        assert!(xz <= xy + yz + 1e-12, "triangle fails at ({x},{y},{z}): {xz} > {xy} + {yz}");
    }
    samples
}

#[test]
fn generated_data_satisfies_axioms() {
    for (i, metric) in METRICS.into_iter().enumerate() {
        let space = random_space(metric, 200, i as u64);
        check_metric_axioms(&space, 5000, i as u64);
    }
    let mix = gaussian_mixture(4, 3, 50, 1).unwrap();
    check_metric_axioms(&MetricSpace::new(mix.dataset, MetricKind::Euclidean).unwrap(), 5000, 9);
    let planted = planted_pair(30, 3.0, 2).unwrap();
    check_metric_axioms(&MetricSpace::new(planted.dataset, MetricKind::Planted).unwrap(), 5000, 10);
}

#[test]
fn loaded_data_satisfies_axioms() {
    let dir = tempfile::tempdir().unwrap();
    for (i, metric) in METRICS.into_iter().enumerate() {
        let original = random_dataset(metric, 150, 40 + i as u64);
        let path = dir.path().join(format!("{metric}.txt"));
        write_dataset(&path, &original).unwrap();
        let loaded = read_dataset(&path, metric.required_kind()).unwrap();
        assert_eq!(loaded, original, "{metric} roundtrip");
        check_metric_axioms(&MetricSpace::new(loaded, metric).unwrap(), 5000, i as u64);
    }
}

#[test]
fn identity_of_indiscernibles_on_distinct_points() {
    let words = ["", "a", "ab", "ba", "abc", "cab"];
    let space = MetricSpace::new(Dataset::strings(&words).unwrap(), MetricKind::Levenshtein).unwrap();
    for i in 0..words.len() {
        for j in 0..words.len() {
            assert_eq!(space.distance(i, j, Stage::Oracle) == 0.0, i == j);
        }
    }
}

#[test]
fn every_distance_call_is_counted() {
    let space = random_space(MetricKind::Hamming, 20, 3);
    let mut expected = 0;
    for (k, stage) in Stage::ALL.into_iter().enumerate() {
        for _ in 0..=k {
            space.distance(0, 1, stage);
            expected += 1;
        }
        assert_eq!(space.ledger().get(stage), k as u64 + 1);
    }
    space.distance(4, 4, Stage::Oracle);
    assert_eq!(space.ledger().total, expected + 1);
}
