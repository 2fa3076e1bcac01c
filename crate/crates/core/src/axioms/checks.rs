use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::verdict::run_trial;
use super::{dominance_pairs, Axiom, AxiomVerdict, CounterExample, Perturbation, AGREEMENT_ALPHA};
use crate::error::{Error, Result};
use crate::generalized::existence_alpha_bound;
use crate::indices::{row_sums, AccessibilityIndex};
use crate::network::TransportationNetwork;
use crate::random::random_uniform_sum_network;

pub const DEFAULT_TRIALS: usize = 100;
/// Candidate draws per requested trial before giving up on metric-valid edits.
const DRAWS_PER_TRIAL: usize = 50;
const HOMOGENEITY_BETAS: [f64; 3] = [0.5, 2.0, 10.0];
const FLATNESS_NETWORKS: u64 = 5;

fn require(net: &TransportationNetwork, operation: &'static str, needed: usize) -> Result<()> {
    if net.n() < needed {
        return Err(Error::TooFewNodes {
            operation,
            needed,
            got: net.n(),
        });
    }
    Ok(())
}

/// Evaluates trials in parallel; the reported counterexample is the failing
/// trial with the lowest position, so the verdict is independent of scheduling.
fn run_trials(
    axiom: Axiom,
    index: &AccessibilityIndex,
    seed: u64,
    trials: Vec<(&TransportationNetwork, Perturbation)>,
) -> Result<AxiomVerdict> {
    let count = trials.len();
    let outcomes: Vec<Result<Option<CounterExample>>> = trials
        .into_par_iter()
        .map(|(net, p)| run_trial(axiom, index, net, p))
        .collect();
    let mut counterexample = None;
    for outcome in outcomes {
        if let Some(ce) = outcome? {
            counterexample = Some(ce);
            break;
        }
    }
    Ok(AxiomVerdict {
        index: *index,
        axiom,
        passed: counterexample.is_none(),
        trials: count,
        seed,
        counterexample,
    })
}

/// Draws perturbations until `trials` of them yield a metric network.
fn sample_metric(
    net: &TransportationNetwork,
    trials: usize,
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Option<Perturbation>,
) -> Result<Vec<Perturbation>> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials * DRAWS_PER_TRIAL {
        if out.len() == trials {
            break;
        }
        let Some(p) = draw(rng) else { continue };
        if p.apply(net).is_ok_and(|m| m.is_metric()) {
            out.push(p);
        }
    }
    let needed = trials.div_ceil(10);
    if out.len() < needed {
        return Err(Error::InsufficientPerturbations {
            found: out.len(),
            needed,
        });
    }
    Ok(out)
}

fn distinct<const K: usize>(rng: &mut ChaCha8Rng, n: usize) -> [usize; K] {
    let picked = rand::seq::index::sample(rng, n, K);
    std::array::from_fn(|i| picked.index(i))
}

/// Passes when every dominator scores strictly below the node it dominates.
pub fn check_dp(index: &AccessibilityIndex, net: &TransportationNetwork) -> Result<AxiomVerdict> {
    require(net, "check_dp", 3)?;
    let mut verdict = run_trials(Axiom::Dp, index, 0, vec![(net, Perturbation::None)])?;
    verdict.trials = dominance_pairs(net)?.len();
    Ok(verdict)
}

/// Random relabelings; scores must move with their nodes.
pub fn check_ano(index: &AccessibilityIndex, net: &TransportationNetwork, trials: usize, seed: u64) -> Result<AxiomVerdict> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms = (0..trials)
        .map(|_| {
            let mut map: Vec<usize> = (0..net.n()).collect();
            map.shuffle(&mut rng);
            (net, Perturbation::Permute { map })
        })
        .collect();
    run_trials(Axiom::Ano, index, seed, perms)
}

/// Sum-preserving moves of distance within one node's row.
pub fn check_idd(index: &AccessibilityIndex, net: &TransportationNetwork, trials: usize, seed: u64) -> Result<AxiomVerdict> {
    require(net, "check_idd", 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = net.n();
    let perts = sample_metric(net, trials, &mut rng, |rng| {
        let [i, k, l] = distinct(rng, n);
        let m = net.d(i, k).min(net.d(i, l));
        let delta = rng.random_range(-m..m);
        (delta != 0.0 && net.d(i, k) + delta > 0.0 && net.d(i, l) - delta > 0.0)
            .then_some(Perturbation::Redistribute { i, k, l, delta })
    })?;
    run_trials(Axiom::Idd, index, seed, perts.into_iter().map(|p| (net, p)).collect())
}

/// Values `d_kl` may take while every triangle through `(k, l)` stays valid.
fn feasible_interval(net: &TransportationNetwork, k: usize, l: usize) -> (f64, f64) {
    (0..net.n())
        .filter(|&m| m != k && m != l)
        .fold((0.0, f64::INFINITY), |(lo, hi), m| {
            let (a, b) = (net.d(k, m), net.d(m, l));
            (lo.max((a - b).abs()), hi.min(a + b))
        })
}

/// Single-entry edits on a pair; orders among the other nodes must survive.
pub fn check_iid(index: &AccessibilityIndex, net: &TransportationNetwork, trials: usize, seed: u64) -> Result<AxiomVerdict> {
    require(net, "check_iid", 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = net.n();
    let perts = sample_metric(net, trials, &mut rng, |rng| {
        let [k, l] = distinct(rng, n);
        let (lo, hi) = feasible_interval(net, k, l);
        if !(hi > lo) {
            return None;
        }
        let value = rng.random_range(lo..=hi);
        (value > 0.0 && value != net.d(k, l)).then_some(Perturbation::SetDistance { k, l, value })
    })?;
    run_trials(Axiom::Iid, index, seed, perts.into_iter().map(|p| (net, p)).collect())
}

/// Lengthens one pair; an endpoint that was weakly behind must fall strictly behind.
pub fn check_prd(index: &AccessibilityIndex, net: &TransportationNetwork, trials: usize, seed: u64) -> Result<AxiomVerdict> {
    require(net, "check_prd", 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = net.n();
    let perts = sample_metric(net, trials, &mut rng, |rng| {
        let [j, k] = distinct(rng, n);
        let (_, hi) = feasible_interval(net, j, k);
        let current = net.d(j, k);
        if !(hi > current) {
            return None;
        }
        let value = rng.random_range(current..=hi);
        (value > current).then_some(Perturbation::SetDistance { k: j, l: k, value })
    })?;
    run_trials(Axiom::Prd, index, seed, perts.into_iter().map(|p| (net, p)).collect())
}

/// Dispatches one of the per-index axioms.
pub fn check_axiom(
    axiom: Axiom,
    index: &AccessibilityIndex,
    net: &TransportationNetwork,
    trials: usize,
    seed: u64,
) -> Result<AxiomVerdict> {
    match axiom {
        Axiom::Ano => check_ano(index, net, trials, seed),
        Axiom::Idd => check_idd(index, net, trials, seed),
        Axiom::Iid => check_iid(index, net, trials, seed),
        Axiom::Dp => check_dp(index, net),
        Axiom::Prd => check_prd(index, net, trials, seed),
        Axiom::Hom | Axiom::Cons | Axiom::Agree | Axiom::Fp => {
            let alpha = index.alpha().ok_or(Error::InvalidAlpha(f64::NAN))?;
            check_prop2(net, &[alpha], seed)?
                .into_iter()
                .find(|v| v.axiom == axiom)
                .ok_or(Error::InvalidAlpha(alpha))
        }
    }
}

/// Homogeneity, conservation and flatness at every α of the grid, plus
/// agreement at a vanishing α.
///
/// Flatness runs on `net` when its distance sums are equal and on seeded
/// circulant networks of the same size whose existence bound exceeds α.
pub fn check_prop2(net: &TransportationNetwork, alphas: &[f64], seed: u64) -> Result<Vec<AxiomVerdict>> {
    require(net, "check_prop2", 2)?;
    let bound = existence_alpha_bound(net)?;
    if let Some(&bad) = alphas.iter().find(|&&a| !(a > 0.0 && a < bound)) {
        return Err(Error::InvalidAlpha(bad));
    }
    let n = net.n().max(3);
    let flat_nets: Vec<TransportationNetwork> = (0..FLATNESS_NETWORKS)
        .map(|s| random_uniform_sum_network(n, seed.wrapping_add(s)))
        .collect::<Result<_>>()?;
    let bounds: Vec<f64> = flat_nets.iter().map(existence_alpha_bound).collect::<Result<_>>()?;
    let sums = row_sums(net);
    let net_is_flat = sums.iter().all(|&s| s == sums[0]);

    let mut out = Vec::new();
    for &alpha in alphas {
        let index = AccessibilityIndex::Generalized { alpha };
        let scaled = HOMOGENEITY_BETAS
            .iter()
            .map(|&beta| (net, Perturbation::Scale { beta }))
            .collect();
        out.push(run_trials(Axiom::Hom, &index, seed, scaled)?);
        out.push(run_trials(Axiom::Cons, &index, seed, vec![(net, Perturbation::None)])?);
        let mut flat: Vec<(&TransportationNetwork, Perturbation)> = Vec::new();
        if net_is_flat {
            flat.push((net, Perturbation::None));
        }
        flat.extend(
            flat_nets
                .iter()
                .zip(&bounds)
                .filter(|(_, &b)| alpha < b)
                .map(|(m, _)| (m, Perturbation::None)),
        );
        out.push(run_trials(Axiom::Fp, &index, seed, flat)?);
    }
    let index = AccessibilityIndex::Generalized { alpha: AGREEMENT_ALPHA };
    out.push(run_trials(Axiom::Agree, &index, seed, vec![(net, Perturbation::None)])?);
    Ok(out)
}
