//! Transportation networks: complete weighted graphs given by a symmetric
//! distance matrix, plus the elementary transforms the axioms quantify over.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute part of the default triangle tolerance.
pub const TRIANGLE_ABS_TOL: f64 = 1e-9;
/// Relative part of the default triangle tolerance, scaled by the largest distance.
pub const TRIANGLE_REL_TOL: f64 = 1e-12;

/// Node labels plus an `n × n` distance matrix, stored row-major.
///
/// Construction only checks shape and finiteness. Symmetry, the zero diagonal,
/// nonnegativity and the triangle inequality are reported by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransportationNetwork {
    labels: Vec<String>,
    dist: Vec<f64>,
    n: usize,
}

impl TransportationNetwork {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if labels.len() != n {
            return Err(Error::NotSquare(format!(
                "{} labels for {} rows",
                labels.len(),
                n
            )));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            dist.extend(row);
        }
        Self::from_flat(labels, dist)
    }

    /// Builds a network from a row-major matrix of length `labels.len()²`.
    pub fn from_flat(labels: Vec<String>, dist: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if dist.len() != n * n {
            return Err(Error::NotSquare(format!(
                "{} entries for {} nodes",
                dist.len(),
                n
            )));
        }
        let mut seen = HashSet::with_capacity(n);
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if let Some(p) = dist.iter().position(|d| !d.is_finite()) {
            return Err(Error::NonFinite(p / n, p % n));
        }
        Ok(Self { labels, dist, n })
    }

    /// Nodes labelled `1..=n`.
    pub fn with_numeric_labels(rows: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (1..=rows.len()).map(|i| i.to_string()).collect();
        Self::new(labels, rows)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn max_distance(&self) -> f64 {
        self.dist.iter().fold(0.0, |m, &d| m.max(d.abs()))
    }

    /// Tolerance used when no explicit one is given: `1e-9 + 1e-12 · max d`.
    pub fn default_triangle_tol(&self) -> f64 {
        TRIANGLE_ABS_TOL + TRIANGLE_REL_TOL * self.max_distance()
    }

    /// Shorthand for `validate(self, self.default_triangle_tol()).is_metric()`.
    pub fn is_metric(&self) -> bool {
        validate(self, self.default_triangle_tol()).is_metric()
    }

    pub fn to_payload(&self) -> NetworkPayload {
        NetworkPayload {
            labels: self.labels.clone(),
            distances: self.rows(),
        }
    }

    fn set_pair(&mut self, i: usize, j: usize, v: f64) {
        self.dist[i * self.n + j] = v;
        self.dist[j * self.n + i] = v;
    }
}

/// Serializable form shared by the JSON format, fixtures and counterexamples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkPayload {
    pub labels: Vec<String>,
    pub distances: Vec<Vec<f64>>,
}

impl NetworkPayload {
    pub fn to_network(&self) -> Result<TransportationNetwork> {
        TransportationNetwork::new(self.labels.clone(), self.distances.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// A possibly incomplete weighted undirected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeListGraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
}

impl EdgeListGraph {
    pub fn new(labels: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut seen = HashSet::new();
        for (line, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidNodes { n });
            }
            if e.u == e.v {
                return Err(Error::SelfLoop(labels[e.u].clone()));
            }
            if !(e.w > 0.0 && e.w.is_finite()) {
                return Err(Error::InvalidWeight {
                    u: labels[e.u].clone(),
                    v: labels[e.v].clone(),
                    weight: e.w,
                });
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(Error::DuplicateEdge {
                    u: labels[e.u].clone(),
                    v: labels[e.v].clone(),
                    line: line + 1,
                });
            }
        }
        Ok(Self { labels, edges })
    }

    /// Builds a graph from labelled edges, assigning node indices in order of
    /// first appearance.
    pub fn from_labelled_edges<S: AsRef<str>>(edges: &[(S, S, f64)]) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut out = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            let mut id = |s: &str| {
                *index.entry(s.to_string()).or_insert_with(|| {
                    labels.push(s.to_string());
                    labels.len() - 1
                })
            };
            let (u, v) = (id(u.as_ref()), id(v.as_ref()));
            out.push(Edge { u, v, w: *w });
        }
        Self::new(labels, out)
    }

    /// Same as [`from_labelled_edges`](Self::from_labelled_edges) with a fixed
    /// node order; every edge endpoint must be one of `labels`.
    pub fn with_labels<S: AsRef<str>>(labels: &[&str], edges: &[(S, S, f64)]) -> Result<Self> {
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownLabel(s.to_string()))
        };
        let edges = edges
            .iter()
            .map(|(u, v, w)| {
                Ok(Edge {
                    u: lookup(u.as_ref())?,
                    v: lookup(v.as_ref())?,
                    w: *w,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels.iter().map(|s| s.to_string()).collect(), edges)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// `d(i,j) - d(i,k) - d(k,j)`, always above the tolerance used.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub symmetric: bool,
    pub zero_diagonal: bool,
    pub nonnegative: bool,
    pub triangle_violations: Vec<TriangleViolation>,
}

impl ValidationReport {
    /// Symmetry, zero diagonal and nonnegativity: everything except the
    /// triangle inequality.
    pub fn is_structurally_valid(&self) -> bool {
        self.symmetric && self.zero_diagonal && self.nonnegative
    }

    pub fn is_metric(&self) -> bool {
        self.is_structurally_valid() && self.triangle_violations.is_empty()
    }
}

/// Checks the defining conditions of a transportation network.
///
/// Symmetry, diagonal and sign are checked exactly. Every ordered triple with
/// `i < j` and `k ∉ {i, j}` whose slack exceeds `tol` is reported; single
/// intermediates suffice since the path form follows by induction.
pub fn validate(net: &TransportationNetwork, tol: f64) -> ValidationReport {
    let n = net.n();
    let mut symmetric = true;
    let mut zero_diagonal = true;
    let mut nonnegative = true;
    for i in 0..n {
        zero_diagonal &= net.d(i, i) == 0.0;
        for j in 0..n {
            symmetric &= net.d(i, j) == net.d(j, i);
            nonnegative &= net.d(i, j) >= 0.0;
        }
    }
    let mut triangle_violations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let slack = net.d(i, j) - net.d(i, k) - net.d(k, j);
                if slack > tol {
                    triangle_violations.push(TriangleViolation { i, j, k, slack });
                }
            }
        }
    }
    ValidationReport {
        symmetric,
        zero_diagonal,
        nonnegative,
        triangle_violations,
    }
}

/// Completes a connected graph to shortest-path distances (dense Floyd–Warshall).
pub fn metric_closure(g: &EdgeListGraph) -> Result<TransportationNetwork> {
    let n = g.n();
    let mut d = vec![f64::INFINITY; n * n];
    for i in 0..n {
        d[i * n + i] = 0.0;
    }
    for e in g.edges() {
        let w = d[e.u * n + e.v].min(e.w);
        d[e.u * n + e.v] = w;
        d[e.v * n + e.u] = w;
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let through = dik + d[k * n + j];
                if through < d[i * n + j] {
                    d[i * n + j] = through;
                }
            }
        }
    }
    if let Some(p) = d.iter().position(|x| x.is_infinite()) {
        return Err(Error::Disconnected(
            g.labels()[p / n].clone(),
            g.labels()[p % n].clone(),
        ));
    }
    TransportationNetwork::from_flat(g.labels().to_vec(), d)
}

/// A bijection on node indices; `map[i]` is the image of node `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut hit = vec![false; n];
        for &m in &map {
            if m >= n || hit[m] {
                return Err(Error::InvalidPermutation(n));
            }
            hit[m] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    /// Exchanges `a` and `b`, fixing everything else.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        if a >= n || b >= n {
            return Err(Error::InvalidPermutation(n));
        }
        map.swap(a, b);
        Ok(Self { map })
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        Self { map: inv }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Permutation) -> Self {
        Self {
            map: first.map.iter().map(|&m| self.map[m]).collect(),
        }
    }
}

/// Relabels nodes: `d'(σi, σj) = d(i, j)`, and node `i`'s label moves to `σi`.
pub fn permute(net: &TransportationNetwork, sigma: &Permutation) -> Result<TransportationNetwork> {
    let n = net.n();
    if sigma.len() != n {
        return Err(Error::InvalidPermutation(n));
    }
    let mut labels = vec![String::new(); n];
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        let si = sigma.apply(i);
        labels[si] = net.label(i).to_string();
        for j in 0..n {
            dist[si * n + sigma.apply(j)] = net.d(i, j);
        }
    }
    Ok(TransportationNetwork { labels, dist, n })
}

pub fn scale(net: &TransportationNetwork, beta: f64) -> Result<TransportationNetwork> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::NonPositiveScale(beta));
    }
    let mut out = net.clone();
    out.dist.iter_mut().for_each(|d| *d *= beta);
    Ok(out)
}

/// Moves `delta` of node `i`'s distance from pair `(i, l)` to pair `(i, k)`,
/// leaving row `i`'s total unchanged. The result may break the triangle
/// inequality; callers re-validate.
pub fn redistribute(
    net: &TransportationNetwork,
    i: usize,
    k: usize,
    l: usize,
    delta: f64,
) -> Result<TransportationNetwork> {
    let n = net.n();
    if i >= n || k >= n || l >= n || i == k || i == l || k == l {
        return Err(Error::InvalidNodes { n });
    }
    let dik = net.d(i, k) + delta;
    let dil = net.d(i, l) - delta;
    if dik < 0.0 {
        return Err(Error::NegativeDistance(dik));
    }
    if dil < 0.0 {
        return Err(Error::NegativeDistance(dil));
    }
    let mut out = net.clone();
    out.set_pair(i, k, dik);
    out.set_pair(i, l, dil);
    Ok(out)
}

/// Replaces the symmetric pair `(k, l)` with `value`. Callers re-validate.
pub fn set_distance(
    net: &TransportationNetwork,
    k: usize,
    l: usize,
    value: f64,
) -> Result<TransportationNetwork> {
    let n = net.n();
    if k >= n || l >= n || k == l {
        return Err(Error::InvalidNodes { n });
    }
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::NonPositiveDistance(value));
    }
    let mut out = net.clone();
    out.set_pair(k, l, value);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> TransportationNetwork {
        let g = EdgeListGraph::from_labelled_edges(&[
            ("1", "2", 3.0),
            ("1", "3", 3.0),
            ("1", "4", 3.0),
            ("2", "3", 1.0),
            ("2", "4", 6.0),
            ("3", "4", 5.0),
        ])
        .unwrap();
        metric_closure(&g).unwrap()
    }

    fn uniform(n: usize, c: f64) -> TransportationNetwork {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { c }).collect())
            .collect();
        TransportationNetwork::with_numeric_labels(rows).unwrap()
    }

    #[test]
    fn complete_metric_graph_closes_to_itself() {
        let net = fig1();
        assert_eq!(net.d(0, 1), 3.0);
        assert_eq!(net.d(1, 3), 6.0);
        assert_eq!(net.d(2, 3), 5.0);
        assert!(validate(&net, 0.0).is_metric());
    }

    #[test]
    fn closure_shortens_and_rejects_disconnected() {
        let g = EdgeListGraph::from_labelled_edges(&[("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 5.0)])
            .unwrap();
        let net = metric_closure(&g).unwrap();
        assert_eq!(net.d(0, 2), 2.0);

        let g = EdgeListGraph::with_labels(&["a", "b", "c"], &[("a", "b", 1.0)]).unwrap();
        assert!(matches!(metric_closure(&g), Err(Error::Disconnected(..))));
    }

    #[test]
    fn edge_list_rejects_bad_edges() {
        assert!(matches!(
            EdgeListGraph::from_labelled_edges(&[("a", "a", 1.0)]),
            Err(Error::SelfLoop(_))
        ));
        assert!(matches!(
            EdgeListGraph::from_labelled_edges(&[("a", "b", 1.0), ("b", "a", 2.0)]),
            Err(Error::DuplicateEdge { .. })
        ));
        assert!(matches!(
            EdgeListGraph::from_labelled_edges(&[("a", "b", 0.0)]),
            Err(Error::InvalidWeight { .. })
        ));
    }

    #[test]
    fn validate_flags_structure() {
        let net = TransportationNetwork::with_numeric_labels(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        let r = validate(&net, 0.0);
        assert!(!r.symmetric && r.zero_diagonal && r.nonnegative);

        let net = TransportationNetwork::with_numeric_labels(vec![vec![1.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        let r = validate(&net, 0.0);
        assert!(r.symmetric && !r.zero_diagonal && !r.nonnegative);
    }

    #[test]
    fn triangle_violation_is_reported_with_slack() {
        let net = TransportationNetwork::with_numeric_labels(vec![
            vec![0.0, 1.0, 10.0],
            vec![1.0, 0.0, 1.0],
            vec![10.0, 1.0, 0.0],
        ])
        .unwrap();
        let r = validate(&net, 1e-9);
        assert_eq!(
            r.triangle_violations,
            vec![TriangleViolation { i: 0, j: 2, k: 1, slack: 8.0 }]
        );
        assert!(!r.is_metric());
    }

    #[test]
    fn constructor_rejects_shape_errors() {
        assert!(matches!(
            TransportationNetwork::with_numeric_labels(vec![vec![0.0, 1.0], vec![1.0]]),
            Err(Error::NotSquare(_))
        ));
        assert!(matches!(TransportationNetwork::with_numeric_labels(vec![]), Err(Error::Empty)));
        assert!(matches!(
            TransportationNetwork::new(vec!["a".into(), "a".into()], vec![vec![0.0, 1.0], vec![1.0, 0.0]]),
            Err(Error::DuplicateLabel(_))
        ));
        let one = TransportationNetwork::with_numeric_labels(vec![vec![0.0]]).unwrap();
        assert_eq!(one.n(), 1);
        assert!(one.is_metric());
    }

    #[test]
    fn swapping_nodes_three_and_four() {
        let net = fig1();
        let swapped = permute(&net, &Permutation::transposition(4, 2, 3).unwrap()).unwrap();
        assert_eq!(swapped.d(2, 3), 5.0);
        assert_eq!(swapped.d(1, 2), 6.0);
        assert_eq!(swapped.d(1, 3), 1.0);
        assert_eq!(swapped.label(2), "4");
        assert_eq!(permute(&net, &Permutation::identity(4)).unwrap(), net);
    }

    #[test]
    fn permutation_rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        let net = fig1();
        assert!(permute(&net, &Permutation::identity(3)).is_err());
    }

    #[test]
    fn scale_rejects_nonpositive_and_inverts() {
        let net = fig1();
        assert!(scale(&net, 0.0).is_err());
        assert!(scale(&net, -1.0).is_err());
        assert_eq!(scale(&net, 1.0).unwrap(), net);
        assert_eq!(scale(&scale(&net, 0.5).unwrap(), 2.0).unwrap(), net);
    }

    #[test]
    fn redistribute_fig1_row_two() {
        let net = fig1();
        let out = redistribute(&net, 1, 2, 3, 1.0).unwrap();
        assert_eq!(out.d(1, 2), 2.0);
        assert_eq!(out.d(2, 1), 2.0);
        assert_eq!(out.d(1, 3), 5.0);
        assert_eq!(out.row(1).iter().sum::<f64>(), 10.0);
        assert!(out.is_metric());
        assert_eq!(redistribute(&net, 1, 2, 3, 0.0).unwrap(), net);
        assert!(matches!(redistribute(&net, 1, 2, 3, -2.0), Err(Error::NegativeDistance(_))));
        assert!(matches!(redistribute(&net, 1, 1, 3, 0.5), Err(Error::InvalidNodes { .. })));
    }

    #[test]
    fn set_distance_contract() {
        let net = uniform(4, 1.0);
        let out = set_distance(&net, 0, 1, 1.5).unwrap();
        assert_eq!(out.d(1, 0), 1.5);
        assert_eq!(set_distance(&net, 0, 1, 1.0).unwrap(), net);
        assert!(set_distance(&net, 2, 2, 1.0).is_err());
        assert!(set_distance(&net, 0, 1, 0.0).is_err());
    }
}
