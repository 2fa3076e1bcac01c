use serde::{Deserialize, Serialize};

use super::{close, dominance_pairs, strictly_less, weakly_less, Axiom};
use super::{AGREEMENT_REL_TOL, CONSERVATION_REL_TOL, FLATNESS_REL_TOL, HOMOGENEITY_REL_TOL, WEAK_REL_TOL};
use crate::error::Result;
use crate::indices::{distance_sum, ranking_of, AccessibilityIndex, DEFAULT_TIE_TOL};
use crate::network::{self, NetworkPayload, Permutation, TransportationNetwork};

/// The network edit a trial applied before re-evaluating the index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Perturbation {
    None,
    Permute { map: Vec<usize> },
    /// `d_ik += delta`, `d_il -= delta`
    Redistribute { i: usize, k: usize, l: usize, delta: f64 },
    SetDistance { k: usize, l: usize, value: f64 },
    Scale { beta: f64 },
}

impl Perturbation {
    pub fn apply(&self, net: &TransportationNetwork) -> Result<TransportationNetwork> {
        match self {
            Perturbation::None => Ok(net.clone()),
            Perturbation::Permute { map } => network::permute(net, &Permutation::new(map.clone())?),
            Perturbation::Redistribute { i, k, l, delta } => network::redistribute(net, *i, *k, *l, *delta),
            Perturbation::SetDistance { k, l, value } => network::set_distance(net, *k, *l, *value),
            Perturbation::Scale { beta } => network::scale(net, *beta),
        }
    }
}

/// A self-contained witness: replaying the perturbation on the embedded
/// network reproduces `before`, `after` and the offending `pair`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterExample {
    #[serde(flatten)]
    pub index: AccessibilityIndex,
    pub axiom: Axiom,
    pub network: NetworkPayload,
    pub perturbation: Perturbation,
    pub pair: (usize, usize),
    pub before: Vec<f64>,
    pub after: Vec<f64>,
}

impl CounterExample {
    /// Recomputes both score vectors from scratch. True when they match the
    /// recorded values to 1e-12 relative and the same pair is flagged again.
    pub fn replay(&self) -> Result<bool> {
        let net = self.network.to_network()?;
        let (before, after) = evaluate_trial(self.axiom, &self.index, &net, &self.perturbation)?;
        let same = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| close(*x, *y, 1e-12));
        if !same(&before, &self.before) || !same(&after, &self.after) {
            return Ok(false);
        }
        let found = find_violation(self.axiom, &net, &self.perturbation, &before, &after)?;
        Ok(found == Some(self.pair))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    #[serde(flatten)]
    pub index: AccessibilityIndex,
    pub axiom: Axiom,
    pub passed: bool,
    pub trials: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<CounterExample>,
}

pub fn report_json(verdicts: &[AxiomVerdict]) -> String {
    serde_json::to_string_pretty(verdicts).expect("verdicts serialize")
}

/// Score vectors a trial compares. Network-level properties compare `d^Σ`
/// with the index on the same network.
pub(crate) fn evaluate_trial(
    axiom: Axiom,
    index: &AccessibilityIndex,
    net: &TransportationNetwork,
    perturbation: &Perturbation,
) -> Result<(Vec<f64>, Vec<f64>)> {
    match axiom {
        Axiom::Cons | Axiom::Agree | Axiom::Fp => {
            Ok((distance_sum(net)?.scores, index.evaluate(net)?.scores))
        }
        Axiom::Dp => {
            let s = index.evaluate(net)?.scores;
            Ok((s.clone(), s))
        }
        _ => {
            let before = index.evaluate(net)?.scores;
            let after = index.evaluate(&perturbation.apply(net)?)?.scores;
            Ok((before, after))
        }
    }
}

/// `f_i ≤ f_j` before but `f_i > f_j` after, by more than the weak tolerance.
fn weak_order_broken(bi: f64, bj: f64, ai: f64, aj: f64) -> bool {
    weakly_less(bi, bj) && ai - aj > WEAK_REL_TOL * ai.abs().max(aj.abs())
}

/// First pair (in a fixed scan order) at which the axiom fails for this trial.
pub(crate) fn find_violation(
    axiom: Axiom,
    net: &TransportationNetwork,
    perturbation: &Perturbation,
    before: &[f64],
    after: &[f64],
) -> Result<Option<(usize, usize)>> {
    let n = before.len();
    let found = match (axiom, perturbation) {
        (Axiom::Dp, _) => dominance_pairs(net)?
            .into_iter()
            .find(|p| !strictly_less(before[p.dominator], before[p.dominated]))
            .map(|p| (p.dominator, p.dominated)),
        (Axiom::Ano, Perturbation::Permute { map }) => (0..n)
            .find(|&i| !close(before[i], after[map[i]], WEAK_REL_TOL))
            .map(|i| (i, map[i])),
        (Axiom::Idd, &Perturbation::Redistribute { i, k, l, .. }) => (0..n)
            .filter(|&j| j != i && j != k && j != l)
            .find(|&j| weak_order_broken(before[i], before[j], after[i], after[j]))
            .map(|j| (i, j)),
        (Axiom::Iid, &Perturbation::SetDistance { k, l, .. }) => {
            let free = |x: usize| x != k && x != l;
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| i != j && free(i) && free(j))
                .find(|&(i, j)| weak_order_broken(before[i], before[j], after[i], after[j]))
        }
        (Axiom::Prd, &Perturbation::SetDistance { k, l, value }) if value > net.d(k, l) => {
            // both endpoints of the lengthened pair play the responsive role
            [(k, l), (l, k)].into_iter().find_map(|(j, other)| {
                (0..n)
                    .filter(|&i| i != j && i != other)
                    .find(|&i| weakly_less(before[i], before[j]) && !strictly_less(after[i], after[j]))
                    .map(|i| (i, j))
            })
        }
        (Axiom::Hom, &Perturbation::Scale { beta }) => {
            let scaled = (0..n).find(|&i| !close(after[i], beta * before[i], HOMOGENEITY_REL_TOL));
            scaled
                .or_else(|| {
                    let rb = ranking_of(before, DEFAULT_TIE_TOL).class_of();
                    let ra = ranking_of(after, DEFAULT_TIE_TOL).class_of();
                    (0..n).find(|&i| rb[i] != ra[i])
                })
                .map(|i| (i, i))
        }
        (Axiom::Cons, _) => {
            let (sb, sa): (f64, f64) = (before.iter().sum(), after.iter().sum());
            (!close(sa, sb, CONSERVATION_REL_TOL)).then_some((0, 0))
        }
        (Axiom::Agree, _) => (0..n)
            .find(|&i| !close(after[i], before[i], AGREEMENT_REL_TOL))
            .map(|i| (i, i)),
        (Axiom::Fp, _) => {
            let flat = before.iter().all(|&b| close(b, before[0], FLATNESS_REL_TOL));
            if flat {
                (1..n).find(|&i| !close(after[i], after[0], FLATNESS_REL_TOL)).map(|i| (0, i))
            } else {
                None
            }
        }
        _ => None,
    };
    Ok(found)
}

/// Runs one trial and packages a counterexample when it fails.
pub(crate) fn run_trial(
    axiom: Axiom,
    index: &AccessibilityIndex,
    net: &TransportationNetwork,
    perturbation: Perturbation,
) -> Result<Option<CounterExample>> {
    let (before, after) = evaluate_trial(axiom, index, net, &perturbation)?;
    Ok(find_violation(axiom, net, &perturbation, &before, &after)?.map(|pair| CounterExample {
        index: *index,
        axiom,
        network: net.to_payload(),
        perturbation,
        pair,
        before,
        after,
    }))
}
