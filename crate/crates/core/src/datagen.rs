//! Seeded synthetic instances.
//!
//! All generators draw from ChaCha8 seeded with `seed_from_u64`, so a given
//! [`GenSpec`] produces the same dataset on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::Partition;
use crate::metric::{Dataset, PlantedTable};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case")]
pub enum GenSpec {
    Uniform {
        n: usize,
        d: usize,
        seed: u64,
    },
    GaussianMixture {
        g: usize,
        d: usize,
        points_per_cluster: usize,
        seed: u64,
    },
    PlantedPair {
        n: usize,
        p: f64,
        seed: u64,
    },
}

impl GenSpec {
    pub fn seed(&self) -> u64 {
        match *self {
            GenSpec::Uniform { seed, .. }
            | GenSpec::GaussianMixture { seed, .. }
            | GenSpec::PlantedPair { seed, .. } => seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> GenSpec {
        let mut out = self.clone();
        match &mut out {
            GenSpec::Uniform { seed: s, .. }
            | GenSpec::GaussianMixture { seed: s, .. }
            | GenSpec::PlantedPair { seed: s, .. } => *s = seed,
        }
        out
    }

    pub fn generate(&self) -> Result<Generated> {
        match *self {
            GenSpec::Uniform { n, d, seed } => Ok(Generated {
                dataset: uniform_cloud(n, d, seed)?,
                labels: None,
                planted: None,
            }),
            GenSpec::GaussianMixture {
                g,
                d,
                points_per_cluster,
                seed,
            } => {
                let m = gaussian_mixture(g, d, points_per_cluster, seed)?;
                Ok(Generated {
                    dataset: m.dataset,
                    labels: Some(m.labels),
                    planted: None,
                })
            }
            GenSpec::PlantedPair { n, p, seed } => {
                let inst = planted_pair(n, p, seed)?;
                Ok(Generated {
                    dataset: inst.dataset,
                    labels: None,
                    planted: Some((inst.pair, inst.partition)),
                })
            }
        }
    }
}

/// Output of [`GenSpec::generate`].
#[derive(Clone, Debug)]
pub struct Generated {
    pub dataset: Dataset,
    pub labels: Option<Vec<usize>>,
    pub planted: Option<((usize, usize), Partition)>,
}

/// `n` points with coordinates i.i.d. uniform on `[-1, 1]`.
pub fn uniform_cloud(n: usize, d: usize, seed: u64) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::Input(format!("uniform cloud needs n >= 2, got {n}")));
    }
    if d == 0 {
        return Err(Error::Input("dimension must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect();
    Dataset::vectors(rows)
}

#[derive(Clone, Debug)]
pub struct GaussianMixture {
    pub dataset: Dataset,
    /// Generating cluster of each point, for analysis only.
    pub labels: Vec<usize>,
    pub means: Vec<Vec<f64>>,
    pub std_devs: Vec<Vec<f64>>,
}

/// `g` axis-aligned Gaussians: means uniform in `[-5, 5]^d`, one standard
/// deviation per (cluster, dimension) uniform in `[0.5, 0.8]`. Points are
/// emitted cluster by cluster.
pub fn gaussian_mixture(g: usize, d: usize, points_per_cluster: usize, seed: u64) -> Result<GaussianMixture> {
    if g == 0 || d == 0 || points_per_cluster == 0 {
        return Err(Error::Input(format!(
            "gaussian mixture needs g, d, points_per_cluster >= 1 (got {g}, {d}, {points_per_cluster})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let means: Vec<Vec<f64>> = (0..g)
        .map(|_| (0..d).map(|_| rng.random_range(-5.0..=5.0)).collect())
        .collect();
    let std_devs: Vec<Vec<f64>> = (0..g)
        .map(|_| (0..d).map(|_| rng.random_range(0.5..=0.8)).collect())
        .collect();
    let mut rows = Vec::with_capacity(g * points_per_cluster);
    let mut labels = Vec::with_capacity(g * points_per_cluster);
    for c in 0..g {
        let dists: Vec<Normal<f64>> = means[c]
            .iter()
            .zip(&std_devs[c])
            .map(|(&m, &s)| Normal::new(m, s).expect("positive standard deviation"))
            .collect();
        for _ in 0..points_per_cluster {
            rows.push(dists.iter().map(|nd| nd.sample(&mut rng)).collect());
            labels.push(c);
        }
    }
    Ok(GaussianMixture {
        dataset: Dataset::vectors(rows)?,
        labels,
        means,
        std_devs,
    })
}

#[derive(Clone, Debug)]
pub struct PlantedPair {
    pub dataset: Dataset,
    /// The unique cross pair at distance 1, with `pair.0 < n/2 <= pair.1`.
    pub pair: (usize, usize),
    /// `{0..n/2, n/2..n}`.
    pub partition: Partition,
}

/// Two halves of `n/2` points where one random cross pair sits at distance 1
/// and every other distinct pair at distance `2p`.
pub fn planted_pair(n: usize, p: f64, seed: u64) -> Result<PlantedPair> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Input(format!("planted pair needs an even n >= 4, got {n}")));
    }
    if !p.is_finite() || p < 1.0 {
        return Err(Error::Input(format!("adversarial factor p must be >= 1, got {p}")));
    }
    let half = n / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rng.random_range(0..half);
    let b = rng.random_range(half..n);
    let partition = Partition::new((0..n).map(|x| usize::from(x >= half)).collect(), None)?;
    Ok(PlantedPair {
        dataset: Dataset::planted(PlantedTable {
            n,
            far: 2.0 * p,
            pair: (a, b),
        }),
        pair: (a, b),
        partition,
    })
}
