//! Non-Euclidean data: Levenshtein over words and Jaccard over id sets.

use metric_forest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mutate(rng: &mut ChaCha8Rng, word: &str) -> String {
    let mut chars: Vec<char> = word.chars().collect();
    for _ in 0..rng.random_range(0..3) {
        let pos = rng.random_range(0..chars.len());
        chars[pos] = (b'a' + rng.random_range(0..26u8)) as char;
    }
    chars.into_iter().collect()
}

fn report(name: &str, space: &MetricSpace, t: usize) -> Result<()> {
    let exact = exact_metric_mst(space, DEFAULT_N_CAP)?;
    let partition = greedy_k_center(space, t, 0)?;
    let forest = component_msts(space, &partition)?;
    let result = mfc_approx(space, &forest, RepresentativePolicy::KeepExisting, false)?;
    println!(
        "{name:<12} n={} t={t}: cost ratio {:.4}, gamma_bar {:?}",
        space.len(),
        result.full_tree.total_weight / exact.total_weight,
        gamma_bound(&forest, &exact)?.map(|g| (g * 1000.0).round() / 1000.0),
    );
    Ok(())
}

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let roots = ["metric", "forest", "complete", "spanning", "cluster", "center", "query", "oracle"];
    let words: Vec<String> = (0..800).map(|i| mutate(&mut rng, roots[i % roots.len()])).collect();
    report("levenshtein", &MetricSpace::new(Dataset::strings(&words)?, MetricKind::Levenshtein)?, 8)?;

    let sets: Vec<Vec<u32>> = (0..800)
        .map(|i| {
            let base = (i % 10) as u32 * 50;
            (0..rng.random_range(3..12)).map(|_| base + rng.random_range(0..60)).collect()
        })
        .collect();
    report("jaccard", &MetricSpace::new(Dataset::sets(sets)?, MetricKind::Jaccard)?, 10)?;
    Ok(())
}
