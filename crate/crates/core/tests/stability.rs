//! Diagram stability: perturbing every pairwise distance by at most eps can
//! move each persistence diagram by at most eps in bottleneck distance.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use ties_core::{bottleneck, rips_persistence, DistanceMatrix, HomologyDim};

fn symmetric_values(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut values = vec![0.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = rng.random_range(lo..hi);
            values[i * n + j] = w;
            values[j * n + i] = w;
        }
    }
    values
}

#[test]
fn bottleneck_distance_is_stable_under_entrywise_noise() {
    let eps = 1e-3;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(4..=16);
        let base = symmetric_values(&mut rng, n, 0.1, 2.0);
        let mut noisy = base.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let delta = rng.random_range(-eps..=eps);
                noisy[i * n + j] += delta;
                noisy[j * n + i] = noisy[i * n + j];
            }
        }
        let a = rips_persistence(
            &DistanceMatrix::from_values(n, base).unwrap(),
            HomologyDim::One,
        )
        .unwrap();
        let b = rips_persistence(
            &DistanceMatrix::from_values(n, noisy).unwrap(),
            HomologyDim::One,
        )
        .unwrap();
        for hdim in [HomologyDim::Zero, HomologyDim::One] {
            let d = bottleneck(&a.finite_bars(hdim), &b.finite_bars(hdim));
            assert!(
                d <= eps + 1e-12,
                "seed {seed}, {hdim:?}: diagrams moved {d} under {eps} noise"
            );
        }
    }
}
