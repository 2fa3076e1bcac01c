//! Accessibility indices on transportation networks: distance-based scores,
//! the generalized distance sum `x(α)`, and executable axiom checks.

// `!(a > b)` is used deliberately so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axioms;
pub mod error;
pub mod fixtures;
pub mod generalized;
pub mod indices;
pub mod io;
pub mod linalg;
pub mod network;
pub mod random;

pub use error::{Error, Result};
pub use generalized::{
    existence_alpha_bound, generalized_distance_sum, reasonable_alpha, reasonable_alpha_with,
    static_dp_bound, sweep, AlphaDiagnostics, ConditionForm, InfluenceMatrix, SweepTable,
};
pub use indices::{ranking, AccessibilityIndex, AccessibilityVector, Ranking};
pub use network::{metric_closure, validate, EdgeListGraph, TransportationNetwork, ValidationReport};
