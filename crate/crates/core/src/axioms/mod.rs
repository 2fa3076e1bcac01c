//! Executable axioms: dominance detection, randomized axiom checkers with
//! replayable counterexamples, and the Neumann-series oracle for `x(α)`.

mod checks;
mod dominance;
mod oracle;
mod verdict;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::indices::AccessibilityIndex;

pub use checks::{
    check_ano, check_axiom, check_dp, check_idd, check_iid, check_prd, check_prop2, DEFAULT_TRIALS,
};
pub use dominance::{dominance_pairs, dominates, DominancePair};
pub use oracle::{neumann_oracle, neumann_oracle_auto, spectral_radius_estimate, NEUMANN_ABS_TOL};
pub use verdict::{report_json, AxiomVerdict, CounterExample, Perturbation};

/// Margin for strict comparisons, relative to the larger magnitude.
pub const STRICT_REL_TOL: f64 = 1e-12;
/// Minimum wrong-order gap, relative, before a weak comparison counts as violated.
pub const WEAK_REL_TOL: f64 = 1e-10;
pub const CONSERVATION_REL_TOL: f64 = 1e-9;
pub const AGREEMENT_ALPHA: f64 = 1e-6;
pub const AGREEMENT_REL_TOL: f64 = 1e-4;
pub const HOMOGENEITY_REL_TOL: f64 = 1e-10;
pub const FLATNESS_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Axiom {
    Ano,
    Idd,
    Iid,
    Dp,
    Prd,
    Hom,
    Cons,
    Agree,
    Fp,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::Ano,
        Axiom::Idd,
        Axiom::Iid,
        Axiom::Dp,
        Axiom::Prd,
        Axiom::Hom,
        Axiom::Cons,
        Axiom::Agree,
        Axiom::Fp,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Axiom::Ano => "ANO",
            Axiom::Idd => "IDD",
            Axiom::Iid => "IID",
            Axiom::Dp => "DP",
            Axiom::Prd => "PRD",
            Axiom::Hom => "HOM",
            Axiom::Cons => "CONS",
            Axiom::Agree => "AGREE",
            Axiom::Fp => "FP",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown axiom {s}"))
    }
}

/// Axioms that form each index's row of the characterization table.
pub fn applicable_axioms(index: &AccessibilityIndex) -> &'static [Axiom] {
    use Axiom::*;
    match index {
        AccessibilityIndex::DistanceSum
        | AccessibilityIndex::DistanceSumWithoutTies
        | AccessibilityIndex::DistanceProduct => &[Ano, Idd, Iid, Dp, Prd],
        AccessibilityIndex::InverseDistanceSum | AccessibilityIndex::Generalized { .. } => {
            &[Ano, Idd, Iid, Dp]
        }
        AccessibilityIndex::LexEccentricity => &[Ano, Dp, Prd],
    }
}

pub(crate) fn rel_scale(a: f64, b: f64) -> f64 {
    a.abs().max(b.abs())
}

/// `a < b` by more than the strict margin. Exact ties fail.
pub fn strictly_less(a: f64, b: f64) -> bool {
    b - a > STRICT_REL_TOL * rel_scale(a, b)
}

/// `a ≤ b` up to the weak tolerance.
pub fn weakly_less(a: f64, b: f64) -> bool {
    a - b <= WEAK_REL_TOL * rel_scale(a, b)
}

pub(crate) fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * rel_scale(a, b)
}
