//! Accessibility indices. Every index maps a network to one score per node;
//! smaller scores mean more accessible.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generalized::generalized_distance_sum;
use crate::network::TransportationNetwork;

/// Default relative tolerance under which two scores share a ranking class.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "index")]
pub enum AccessibilityIndex {
    #[serde(rename = "dsum")]
    DistanceSum,
    #[serde(rename = "dprod")]
    DistanceProduct,
    #[serde(rename = "invdsum")]
    InverseDistanceSum,
    #[serde(rename = "dsum-nt")]
    DistanceSumWithoutTies,
    #[serde(rename = "ecc-lex")]
    LexEccentricity,
    #[serde(rename = "gds")]
    Generalized { alpha: f64 },
}

impl AccessibilityIndex {
    pub fn id(&self) -> &'static str {
        match self {
            AccessibilityIndex::DistanceSum => "dsum",
            AccessibilityIndex::DistanceProduct => "dprod",
            AccessibilityIndex::InverseDistanceSum => "invdsum",
            AccessibilityIndex::DistanceSumWithoutTies => "dsum-nt",
            AccessibilityIndex::LexEccentricity => "ecc-lex",
            AccessibilityIndex::Generalized { .. } => "gds",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            AccessibilityIndex::Generalized { alpha } => Some(*alpha),
            _ => None,
        }
    }

    /// Builds an index from its short id; `alpha` is required for `gds` and
    /// rejected for every other index.
    pub fn from_id(id: &str, alpha: Option<f64>) -> std::result::Result<Self, String> {
        let plain = match id {
            "dsum" => AccessibilityIndex::DistanceSum,
            "dprod" => AccessibilityIndex::DistanceProduct,
            "invdsum" => AccessibilityIndex::InverseDistanceSum,
            "dsum-nt" => AccessibilityIndex::DistanceSumWithoutTies,
            "ecc-lex" => AccessibilityIndex::LexEccentricity,
            "gds" => {
                return alpha
                    .map(|alpha| AccessibilityIndex::Generalized { alpha })
                    .ok_or_else(|| "index gds requires --alpha".to_string())
            }
            other => return Err(format!("unknown index {other}")),
        };
        match alpha {
            Some(_) => Err(format!("--alpha only applies to gds, not {id}")),
            None => Ok(plain),
        }
    }

    pub fn evaluate(&self, net: &TransportationNetwork) -> Result<AccessibilityVector> {
        match self {
            AccessibilityIndex::DistanceSum => distance_sum(net),
            AccessibilityIndex::DistanceProduct => distance_product(net),
            AccessibilityIndex::InverseDistanceSum => inverse_distance_sum(net),
            AccessibilityIndex::DistanceSumWithoutTies => distance_sum_without_ties(net),
            AccessibilityIndex::LexEccentricity => Ok(eccentricity_lex(net)?.to_vector(net)),
            AccessibilityIndex::Generalized { alpha } => generalized_distance_sum(net, *alpha),
        }
    }
}

impl fmt::Display for AccessibilityIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alpha() {
            Some(a) => write!(f, "{}(alpha={})", self.id(), a),
            None => f.write_str(self.id()),
        }
    }
}

impl FromStr for AccessibilityIndex {
    type Err = String;

    /// Parses `dsum`, `gds:0.2` and friends.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.split_once(':') {
            Some((id, a)) => {
                let alpha = a.parse().map_err(|_| format!("bad alpha in {s}"))?;
                Self::from_id(id, Some(alpha))
            }
            None => Self::from_id(s, None),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccessibilityVector {
    pub scores: Vec<f64>,
    pub index: AccessibilityIndex,
    /// Set when the input network violates the triangle inequality.
    pub non_metric: bool,
}

impl AccessibilityVector {
    pub(crate) fn new(scores: Vec<f64>, index: AccessibilityIndex, net: &TransportationNetwork) -> Self {
        Self {
            scores,
            index,
            non_metric: !net.is_metric(),
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn alpha(&self) -> Option<f64> {
        self.index.alpha()
    }
}

impl std::ops::Index<usize> for AccessibilityVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.scores[i]
    }
}

fn require_nodes(net: &TransportationNetwork, operation: &'static str, needed: usize) -> Result<()> {
    if net.n() < needed {
        return Err(Error::TooFewNodes {
            operation,
            needed,
            got: net.n(),
        });
    }
    Ok(())
}

pub(crate) fn row_sums(net: &TransportationNetwork) -> Vec<f64> {
    (0..net.n()).map(|i| net.row(i).iter().sum()).collect()
}

pub fn distance_sum(net: &TransportationNetwork) -> Result<AccessibilityVector> {
    require_nodes(net, "distance_sum", 2)?;
    Ok(AccessibilityVector::new(row_sums(net), AccessibilityIndex::DistanceSum, net))
}

pub fn distance_product(net: &TransportationNetwork) -> Result<AccessibilityVector> {
    require_nodes(net, "distance_product", 2)?;
    let n = net.n();
    let mut scores = Vec::with_capacity(n);
    for i in 0..n {
        let mut p = 1.0;
        for j in (0..n).filter(|&j| j != i) {
            let d = net.d(i, j);
            if d == 0.0 {
                return Err(Error::ZeroDistance(i, j));
            }
            p *= d;
        }
        scores.push(p);
    }
    Ok(AccessibilityVector::new(scores, AccessibilityIndex::DistanceProduct, net))
}

pub fn inverse_distance_sum(net: &TransportationNetwork) -> Result<AccessibilityVector> {
    require_nodes(net, "inverse_distance_sum", 2)?;
    let scores = row_sums(net).into_iter().map(|s| -s).collect();
    Ok(AccessibilityVector::new(scores, AccessibilityIndex::InverseDistanceSum, net))
}

/// Distance sum with ties broken in favour of the lower node index.
///
/// Node `i` (0-based) gets `d^Σ_i + i·g/n`, where `g` is the smallest positive
/// gap between distinct distance sums (1 when all sums are equal). The offset
/// stays below `g`, so nodes with different sums keep their order.
pub fn distance_sum_without_ties(net: &TransportationNetwork) -> Result<AccessibilityVector> {
    require_nodes(net, "distance_sum_without_ties", 2)?;
    let sums = row_sums(net);
    let mut sorted = sums.clone();
    sorted.sort_by(f64::total_cmp);
    let gap = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&g| g > 0.0)
        .fold(f64::INFINITY, f64::min);
    let gap = if gap.is_finite() { gap } else { 1.0 };
    let n = net.n() as f64;
    let scores = sums
        .iter()
        .enumerate()
        .map(|(i, s)| s + i as f64 * gap / n)
        .collect();
    Ok(AccessibilityVector::new(scores, AccessibilityIndex::DistanceSumWithoutTies, net))
}

/// Lexicographic eccentricity: each node's off-diagonal distances sorted in
/// descending order, compared lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct LexEccentricity {
    pub keys: Vec<Vec<f64>>,
    pub ranking: Ranking,
}

impl LexEccentricity {
    /// Dense class position (0 = most accessible) as a score vector.
    pub fn rank_scores(&self) -> Vec<f64> {
        let mut scores = vec![0.0; self.keys.len()];
        for (c, class) in self.ranking.classes.iter().enumerate() {
            for &i in class {
                scores[i] = c as f64;
            }
        }
        scores
    }

    pub fn to_vector(&self, net: &TransportationNetwork) -> AccessibilityVector {
        AccessibilityVector::new(self.rank_scores(), AccessibilityIndex::LexEccentricity, net)
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

pub fn eccentricity_lex(net: &TransportationNetwork) -> Result<LexEccentricity> {
    require_nodes(net, "eccentricity_lex", 2)?;
    let n = net.n();
    let keys: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut k: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| net.d(i, j)).collect();
            k.sort_by(|a, b| b.total_cmp(a));
            k
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lex_cmp(&keys[a], &keys[b]).then(a.cmp(&b)));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match classes.last_mut() {
            Some(c) if lex_cmp(&keys[c[0]], &keys[i]) == Ordering::Equal => c.push(i),
            _ => classes.push(vec![i]),
        }
    }
    Ok(LexEccentricity {
        keys,
        ranking: Ranking { classes },
    })
}

/// Ordered partition of nodes into accessibility classes, most accessible first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ranking {
    pub classes: Vec<Vec<usize>>,
}

impl Ranking {
    /// 0-based class position of every node.
    pub fn class_of(&self) -> Vec<usize> {
        let n = self.classes.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (c, class) in self.classes.iter().enumerate() {
            for &i in class {
                out[i] = c;
            }
        }
        out
    }

    /// Nodes in ranking order.
    pub fn order(&self) -> Vec<usize> {
        self.classes.iter().flatten().copied().collect()
    }
}

fn within_rel(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Sorts nodes by ascending score. A node joins the current class when its
/// score is within `tie_tol` (relative) of the class's first score.
pub fn ranking(v: &AccessibilityVector, tie_tol: f64) -> Ranking {
    ranking_of(&v.scores, tie_tol)
}

pub fn ranking_of(scores: &[f64], tie_tol: f64) -> Ranking {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match classes.last_mut() {
            Some(c) if within_rel(scores[c[0]], scores[i], tie_tol) => c.push(i),
            _ => classes.push(vec![i]),
        }
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    Ranking { classes }
}
