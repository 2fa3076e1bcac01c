//! Built-in reference networks.

use crate::error::{Error, Result};
use crate::network::{metric_closure, EdgeListGraph, TransportationNetwork};

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub network: TransportationNetwork,
    pub provenance: &'static str,
    /// The matrix violates the triangle inequality on purpose.
    pub non_metric: bool,
}

pub const NAMES: [&str; 6] = ["fig1", "fig2_d", "fig2_dprime", "fig4", "ralik", "fig6"];

const FIG1: [(&str, &str, f64); 6] = [
    ("1", "2", 3.0),
    ("1", "3", 3.0),
    ("1", "4", 3.0),
    ("2", "3", 1.0),
    ("2", "4", 6.0),
    ("3", "4", 5.0),
];

fn fig2(d45: f64) -> [(&'static str, &'static str, f64); 10] {
    [
        ("1", "2", 2.0),
        ("1", "3", 1.0),
        ("1", "4", 2.0),
        ("1", "5", 4.0),
        ("2", "3", 2.0),
        ("2", "4", 1.0),
        ("2", "5", 4.0),
        ("3", "4", 2.0),
        ("3", "5", 3.0),
        ("4", "5", d45),
    ]
}

const RALIK: [&str; 12] = [
    "Bikini",
    "Rongelap",
    "Wotho",
    "Ujae",
    "Kwajalein",
    "Lae",
    "Lib",
    "Namu",
    "Ailinglaplap",
    "Namorik",
    "Jaluit",
    "Ebon",
];

const RALIK_EDGES: [(usize, usize); 20] = [
    (1, 2),
    (1, 3),
    (2, 3),
    (2, 5),
    (3, 4),
    (3, 5),
    (3, 6),
    (4, 5),
    (4, 6),
    (5, 6),
    (5, 7),
    (5, 8),
    (6, 7),
    (7, 8),
    (8, 9),
    (9, 10),
    (9, 11),
    (10, 11),
    (10, 12),
    (11, 12),
];

const FIG6_EDGES: [(u8, u8); 19] = [
    (1, 3),
    (1, 4),
    (1, 5),
    (1, 9),
    (1, 2),
    (1, 7),
    (8, 2),
    (8, 7),
    (3, 6),
    (3, 4),
    (3, 9),
    (10, 6),
    (10, 4),
    (10, 5),
    (12, 11),
    (6, 5),
    (6, 7),
    (11, 2),
    (4, 5),
];

/// Pairs at distance 1 in the ten-node non-metric network; all others are 10.
const FIG4_NEAR: [(usize, usize); 15] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 5),
    (4, 5),
    (5, 6),
    (10, 9),
    (10, 8),
    (10, 7),
    (9, 8),
    (9, 7),
    (8, 6),
    (7, 6),
];

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn closure_of<S: AsRef<str>>(labels: &[&str], edges: &[(S, S, f64)]) -> TransportationNetwork {
    metric_closure(&EdgeListGraph::with_labels(labels, edges).expect("fixture edges are valid"))
        .expect("fixture graphs are connected")
}

fn build(name: &str) -> Result<Fixture> {
    let fixture = match name {
        "fig1" => Fixture {
            name: "fig1",
            network: closure_of(&["1", "2", "3", "4"], &FIG1),
            provenance: "Four-node network whose nodes 1 and 2 are ordered oppositely by distance sum and distance product.",
            non_metric: false,
        },
        "fig2_d" => Fixture {
            name: "fig2_d",
            network: closure_of(&["1", "2", "3", "4", "5"], &fig2(3.0)),
            provenance: "Five-node network D; node pairs (1,2) and (3,4) are symmetric.",
            non_metric: false,
        },
        "fig2_dprime" => Fixture {
            name: "fig2_dprime",
            network: closure_of(&["1", "2", "3", "4", "5"], &fig2(4.0)),
            provenance: "Network D with d(4,5) raised from 3 to 4; nodes 2 and 4 are symmetric and node 3 dominates node 1.",
            non_metric: false,
        },
        "fig4" => {
            let n = 10;
            let mut rows = vec![vec![10.0; n]; n];
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] = 0.0;
            }
            for &(u, v) in &FIG4_NEAR {
                rows[u - 1][v - 1] = 1.0;
                rows[v - 1][u - 1] = 1.0;
            }
            Fixture {
                name: "fig4",
                network: TransportationNetwork::new(numbered(n), rows)?,
                provenance: "Ten-node matrix with distances 1 and 10 in which every node has three neighbours at distance 1, so all distance sums equal 63. It violates the triangle inequality.",
                non_metric: true,
            }
        }
        "ralik" => {
            let edges: Vec<(&str, &str, f64)> = RALIK_EDGES
                .iter()
                .map(|&(u, v)| (RALIK[u - 1], RALIK[v - 1], 1.0))
                .collect();
            Fixture {
                name: "ralik",
                network: closure_of(&RALIK, &edges),
                provenance: "Ralik Chain atolls with unit-length links as drawn. Shortest paths give Ebon a distance sum of 41; the published tally for Ebon is 34, which this edge set cannot produce.",
                non_metric: false,
            }
        }
        "fig6" => {
            let labels = numbered(12);
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            let edges: Vec<(String, String, f64)> = FIG6_EDGES
                .iter()
                .map(|&(u, v)| (u.to_string(), v.to_string(), 1.0))
                .collect();
            Fixture {
                name: "fig6",
                network: closure_of(&refs, &edges),
                provenance: "Twelve-node unit-length network transcribed from the drawn edges, labelled by the displayed numerals. The drawing gives node 12 a distance sum of 39, not the published 37; that value is left unpinned.",
                non_metric: false,
            }
        }
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    Ok(fixture)
}

pub fn fixture(name: &str) -> Result<Fixture> {
    build(name)
}

pub fn all() -> Vec<Fixture> {
    NAMES.iter().map(|n| build(n).expect("built-in fixture")).collect()
}
