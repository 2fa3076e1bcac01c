//! Seeded random metric networks for the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{metric_closure, Edge, EdgeListGraph, TransportationNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RandomModel {
    /// Uniform weights in `[1, 10)` on the complete graph, then metric closure.
    #[default]
    ClosureOfRandomWeights,
    /// Uniform points in the unit square with Euclidean distances.
    EuclideanPoints,
}

fn numeric_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

pub fn random_metric_network(n: usize, seed: u64, model: RandomModel) -> Result<TransportationNetwork> {
    if n < 3 {
        return Err(Error::TooFewNodes {
            operation: "random_metric_network",
            needed: 3,
            got: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match model {
        RandomModel::ClosureOfRandomWeights => {
            let mut edges = Vec::with_capacity(n * (n - 1) / 2);
            for u in 0..n {
                for v in u + 1..n {
                    edges.push(Edge {
                        u,
                        v,
                        w: rng.random_range(1.0..10.0),
                    });
                }
            }
            metric_closure(&EdgeListGraph::new(numeric_labels(n), edges)?)
        }
        RandomModel::EuclideanPoints => {
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)))
                .collect();
            let mut dist = vec![0.0; n * n];
            for i in 0..n {
                for j in i + 1..n {
                    let d = (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1);
                    dist[i * n + j] = d;
                    dist[j * n + i] = d;
                }
            }
            TransportationNetwork::from_flat(numeric_labels(n), dist)
        }
    }
}

/// A vertex-transitive network (circulant over a cycle of `n` nodes) with
/// integer weights, so every node's distance sum is exactly equal.
pub fn random_uniform_sum_network(n: usize, seed: u64) -> Result<TransportationNetwork> {
    if n < 3 {
        return Err(Error::TooFewNodes {
            operation: "random_uniform_sum_network",
            needed: 3,
            got: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = n / 2;
    let weights: Vec<f64> = (0..half).map(|_| rng.random_range(1..=10) as f64).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let step = (v - u).min(n - (v - u));
            edges.push(Edge {
                u,
                v,
                w: weights[step - 1],
            });
        }
    }
    let closed = metric_closure(&EdgeListGraph::new(numeric_labels(n), edges)?)?;
    // rebuild from row 0 so every row is an exact cyclic shift
    let base: Vec<f64> = (0..n).map(|s| closed.d(0, s).min(closed.d(0, (n - s) % n))).collect();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            dist[i * n + j] = base[(j + n - i) % n];
        }
    }
    TransportationNetwork::from_flat(numeric_labels(n), dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::validate;

    #[test]
    fn deterministic_per_seed() {
        for model in [RandomModel::ClosureOfRandomWeights, RandomModel::EuclideanPoints] {
            let a = random_metric_network(7, 42, model).unwrap();
            let b = random_metric_network(7, 42, model).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, random_metric_network(7, 43, model).unwrap());
        }
    }

    #[test]
    fn outputs_are_metric_and_positive() {
        for seed in 0..20 {
            for model in [RandomModel::ClosureOfRandomWeights, RandomModel::EuclideanPoints] {
                let n = 3 + (seed as usize % 6);
                let net = random_metric_network(n, seed, model).unwrap();
                assert!(validate(&net, 1e-9).is_metric());
                for i in 0..n {
                    for j in 0..n {
                        assert!(i == j || net.d(i, j) > 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_small_n() {
        assert!(random_metric_network(2, 0, RandomModel::default()).is_err());
    }

    #[test]
    fn circulant_sums_are_equal() {
        for n in 3..11 {
            let net = random_uniform_sum_network(n, n as u64).unwrap();
            assert!(validate(&net, 0.0).is_metric());
            let sums: Vec<f64> = (0..n).map(|i| net.row(i).iter().sum()).collect();
            assert!(sums.iter().all(|&s| s == sums[0]), "{sums:?}");
        }
    }
}
