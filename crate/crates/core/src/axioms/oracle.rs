//! Independent evaluation of `x(α)` as the truncated series
//! `Σ_k (−α)^k A^k d^Σ`, built from matrix–vector products only.

use crate::error::{Error, Result};
use crate::generalized::InfluenceMatrix;
use crate::indices::{AccessibilityIndex, AccessibilityVector};
use crate::network::TransportationNetwork;

const POWER_ITERATIONS: usize = 50;
const CONVERGENCE_LIMIT: f64 = 0.9;
/// Stop once the newest term's ∞-norm falls below this, relative to `‖d^Σ‖∞`.
pub const NEUMANN_ABS_TOL: f64 = 1e-12;
const MAX_TERMS: usize = 100_000;

fn norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Growth rate of `‖A^k v‖` over the second half of 50 power iterations.
pub fn spectral_radius_estimate(a: &InfluenceMatrix) -> f64 {
    let n = a.n();
    // deterministic start with no special alignment to the all-ones direction
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 13) as f64 / 13.0).collect();
    let mut log_growth = 0.0;
    let half = POWER_ITERATIONS / 2;
    for it in 0..POWER_ITERATIONS {
        let w = a.mul_vec(&v);
        let s = norm(&w);
        if s == 0.0 {
            return 0.0;
        }
        if it >= half {
            log_growth += (s / norm(&v)).ln();
        }
        v = w.into_iter().map(|x| x / s).collect();
    }
    (log_growth / (POWER_ITERATIONS - half) as f64).exp()
}

fn checked(net: &TransportationNetwork, alpha: f64) -> Result<InfluenceMatrix> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let a = InfluenceMatrix::new(net)?;
    let r = alpha * spectral_radius_estimate(&a);
    if r >= CONVERGENCE_LIMIT {
        return Err(Error::SeriesDiverges(r));
    }
    Ok(a)
}

/// Partial sum through the `k_max`-th term.
pub fn neumann_oracle(net: &TransportationNetwork, alpha: f64, k_max: usize) -> Result<AccessibilityVector> {
    if k_max == 0 {
        return Err(Error::ZeroTrials);
    }
    let a = checked(net, alpha)?;
    let mut term = a.dsum().to_vec();
    let mut sum = term.clone();
    for _ in 0..k_max {
        term = a.mul_vec(&term).into_iter().map(|t| -alpha * t).collect();
        sum.iter_mut().zip(&term).for_each(|(s, t)| *s += t);
    }
    Ok(AccessibilityVector::new(sum, AccessibilityIndex::Generalized { alpha }, net))
}

/// Adds terms until the latest one is negligible; returns the sum and the
/// number of terms after the zeroth.
pub fn neumann_oracle_auto(net: &TransportationNetwork, alpha: f64) -> Result<(AccessibilityVector, usize)> {
    let a = checked(net, alpha)?;
    let scale = norm(a.dsum());
    let mut term = a.dsum().to_vec();
    let mut sum = term.clone();
    let mut k = 0;
    while norm(&term) >= NEUMANN_ABS_TOL * scale {
        if k == MAX_TERMS {
            return Err(Error::SeriesDiverges(alpha * spectral_radius_estimate(&a)));
        }
        term = a.mul_vec(&term).into_iter().map(|t| -alpha * t).collect();
        sum.iter_mut().zip(&term).for_each(|(s, t)| *s += t);
        k += 1;
    }
    Ok((AccessibilityVector::new(sum, AccessibilityIndex::Generalized { alpha }, net), k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize) -> TransportationNetwork {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 2.0 }).collect())
            .collect();
        TransportationNetwork::with_numeric_labels(rows).unwrap()
    }

    #[test]
    fn uniform_radius_and_fixed_point() {
        let net = uniform(4);
        let a = InfluenceMatrix::new(&net).unwrap();
        assert!((spectral_radius_estimate(&a) - 4.0 / 3.0).abs() < 1e-9);
        for k in [1, 5, 20] {
            let x = neumann_oracle(&net, 0.3, k).unwrap();
            assert!(x.scores.iter().all(|&v| (v - 6.0).abs() < 1e-12));
        }
    }

    #[test]
    fn tiny_alpha_returns_distance_sums() {
        let net = uniform(5);
        let (x, _) = neumann_oracle_auto(&net, 1e-9).unwrap();
        assert!(x.scores.iter().all(|&v| (v - 8.0).abs() < 1e-9));
    }

    #[test]
    fn divergence_guard() {
        assert!(matches!(neumann_oracle(&uniform(4), 0.7, 10), Err(Error::SeriesDiverges(_))));
        assert!(neumann_oracle(&uniform(4), 0.3, 0).is_err());
    }
}
