use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::TransportationNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DominancePair {
    pub dominator: usize,
    pub dominated: usize,
}

/// `i` is weakly closer than `j` to every third node and strictly closer to one.
pub fn dominates(net: &TransportationNetwork, i: usize, j: usize) -> bool {
    let mut strict = false;
    for k in (0..net.n()).filter(|&k| k != i && k != j) {
        let (a, b) = (net.d(i, k), net.d(j, k));
        if a > b {
            return false;
        }
        strict |= a < b;
    }
    strict
}

/// Every dominance pair, ordered by dominator then dominated.
pub fn dominance_pairs(net: &TransportationNetwork) -> Result<Vec<DominancePair>> {
    let n = net.n();
    if n < 3 {
        return Err(Error::TooFewNodes {
            operation: "dominance_pairs",
            needed: 3,
            got: n,
        });
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if dominates(net, i, j) {
                out.push(DominancePair {
                    dominator: i,
                    dominated: j,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig1_pairs() {
        let net = TransportationNetwork::with_numeric_labels(vec![
            vec![0.0, 3.0, 3.0, 3.0],
            vec![3.0, 0.0, 1.0, 6.0],
            vec![3.0, 1.0, 0.0, 5.0],
            vec![3.0, 6.0, 5.0, 0.0],
        ])
        .unwrap();
        let pairs: Vec<(usize, usize)> = dominance_pairs(&net)
            .unwrap()
            .iter()
            .map(|p| (p.dominator, p.dominated))
            .collect();
        // node 3 beats node 2 towards node 4 and ties towards node 1
        assert!(pairs.contains(&(2, 1)));
        assert!(!pairs.contains(&(1, 2)));
        for (i, j) in pairs {
            assert!(!dominates(&net, j, i));
        }
    }

    #[test]
    fn uniform_has_none_and_small_n_rejected() {
        let u = TransportationNetwork::with_numeric_labels(vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(dominance_pairs(&u).unwrap().is_empty());
        let two = TransportationNetwork::with_numeric_labels(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(dominance_pairs(&two).is_err());
    }
}
