//! Generalized distance sum `x(α)`, the solution of `(I + αA) x = d^Σ`,
//! together with its parameter diagnostics and α-sweeps.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::indices::{row_sums, AccessibilityIndex, AccessibilityVector};
use crate::io::format_sig;
use crate::linalg::{lu_solve, mat_vec, norm_inf, symmetric_eigenvalues};
use crate::network::TransportationNetwork;

/// The influence matrix `A`: `a_ij = d_ij / d^Σ_i` off the diagonal and
/// `a_ii = -Σ_{j≠i} d_ij / d^Σ_j`. Columns sum to zero; off-diagonal row
/// entries sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceMatrix {
    a: Vec<f64>,
    dsum: Vec<f64>,
    n: usize,
}

impl InfluenceMatrix {
    pub fn new(net: &TransportationNetwork) -> Result<Self> {
        let n = net.n();
        let dsum = row_sums(net);
        if let Some(i) = dsum.iter().position(|&s| s <= 0.0) {
            return Err(Error::ZeroDistanceSum(i));
        }
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            let mut diag = 0.0;
            for j in 0..n {
                if i != j {
                    a[i * n + j] = net.d(i, j) / dsum[i];
                    diag -= net.d(i, j) / dsum[j];
                }
            }
            a[i * n + i] = diag;
        }
        Ok(Self { a, dsum, n })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dsum(&self) -> &[f64] {
        &self.dsum
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.a, self.n, x)
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.n).map(|j| (0..self.n).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn off_diagonal_row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).filter(|&j| j != i).map(|j| self.get(i, j)).sum())
            .collect()
    }

    /// `(A + Aᵀ) / 2`
    pub fn symmetric_part(&self) -> Vec<f64> {
        let n = self.n;
        let mut s = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                s[i * n + j] = 0.5 * (self.get(i, j) + self.get(j, i));
            }
        }
        s
    }

    /// `-1/λ_min` of the symmetric part, or `+∞` when `λ_min ≥ 0`. For
    /// `0 < α <` this bound, `I + αA` has a positive definite symmetric part.
    pub fn existence_bound(&self) -> Result<f64> {
        let eig = symmetric_eigenvalues(&self.symmetric_part(), self.n)?;
        let lmin = eig[0];
        Ok(if lmin < 0.0 { -1.0 / lmin } else { f64::INFINITY })
    }

    /// Solves `(I + αA) x = d^Σ` with partial pivoting. Pivots below
    /// `1e-12 · ‖I + αA‖∞` are treated as singular.
    pub fn solve(&self, alpha: f64) -> Result<Vec<f64>> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidAlpha(alpha));
        }
        let n = self.n;
        let mut m: Vec<f64> = self.a.iter().map(|v| alpha * v).collect();
        for i in 0..n {
            m[i * n + i] += 1.0;
        }
        let tol = 1e-12 * norm_inf(&m, n);
        lu_solve(&m, n, &self.dsum, tol).ok_or(Error::Singular { alpha })
    }
}

pub fn influence_matrix(net: &TransportationNetwork) -> Result<InfluenceMatrix> {
    InfluenceMatrix::new(net)
}

pub fn existence_alpha_bound(net: &TransportationNetwork) -> Result<f64> {
    InfluenceMatrix::new(net)?.existence_bound()
}

pub fn generalized_distance_sum(net: &TransportationNetwork, alpha: f64) -> Result<AccessibilityVector> {
    if net.n() < 2 {
        return Err(Error::TooFewNodes {
            operation: "generalized_distance_sum",
            needed: 2,
            got: net.n(),
        });
    }
    let x = InfluenceMatrix::new(net)?.solve(alpha)?;
    Ok(AccessibilityVector::new(x, AccessibilityIndex::Generalized { alpha }, net))
}

/// Which numerator the dominance-preservation condition uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConditionForm {
    /// `min(min₂ d^Σ, min₂ x(α)) / max x(α)`. Never larger than the
    /// distance-sum form, and the one that reproduces the published bounds.
    #[default]
    Combined,
    /// `min₂ d^Σ / max x(α)` only.
    DistanceSumOnly,
}

fn second_smallest(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s[1]
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// `min d^Σ / max d^Σ`, the parameter-free half of the condition.
pub fn static_dp_bound(net: &TransportationNetwork) -> f64 {
    let (lo, hi) = min_max(&row_sums(net));
    lo / hi
}

/// `c(α)`: the right-hand side of the sufficient condition `α < c(α)` for
/// dominance preservation.
pub fn condition_value(a: &InfluenceMatrix, alpha: f64, form: ConditionForm) -> Result<f64> {
    let x = a.solve(alpha)?;
    Ok(condition_from_solution(a.dsum(), &x, form))
}

fn condition_from_solution(dsum: &[f64], x: &[f64], form: ConditionForm) -> f64 {
    let (dmin, dmax) = min_max(dsum);
    let (_, xmax) = min_max(x);
    let numerator = match form {
        ConditionForm::Combined => second_smallest(dsum).min(second_smallest(x)),
        ConditionForm::DistanceSumOnly => second_smallest(dsum),
    };
    (numerator / xmax).min(dmin / dmax)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaDiagnostics {
    pub alpha_exist: f64,
    pub alpha_hat: f64,
    pub capped_by_existence: bool,
    #[serde(rename = "iterations")]
    pub bisection_iterations: usize,
    /// Every evaluated `(α, c(α))`, grid points first, then bisection steps.
    #[serde(rename = "trace")]
    pub condition_values: Vec<(f64, f64)>,
}

impl AlphaDiagnostics {
    pub fn to_json(&self) -> String {
        // +∞ has no JSON representation
        let mut v = serde_json::to_value(self).expect("diagnostics serialize");
        if self.alpha_exist.is_infinite() {
            v["alpha_exist"] = serde_json::Value::String("inf".into());
        }
        serde_json::to_string_pretty(&v).expect("diagnostics serialize")
    }
}

const ALPHA_GRID_POINTS: usize = 64;
const EXISTENCE_CAP: f64 = 0.999;
pub const DEFAULT_ALPHA_TOL: f64 = 1e-6;

pub fn reasonable_alpha(net: &TransportationNetwork, tol: f64) -> Result<AlphaDiagnostics> {
    reasonable_alpha_with(net, tol, ConditionForm::default())
}

/// Largest α below the first crossing of `h(α) = c(α) - α`.
///
/// The interval `(0, 0.999·α_exist]` is scanned on a 64-point grid to bracket
/// the first sign change, which is then bisected to width `tol`. If `h` stays
/// positive across the grid the bound is the cap itself.
pub fn reasonable_alpha_with(
    net: &TransportationNetwork,
    tol: f64,
    form: ConditionForm,
) -> Result<AlphaDiagnostics> {
    if net.n() < 2 {
        return Err(Error::TooFewNodes {
            operation: "reasonable_alpha",
            needed: 2,
            got: net.n(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidGrid(format!("tolerance must be positive, got {tol}")));
    }
    let a = InfluenceMatrix::new(net)?;
    let alpha_exist = a.existence_bound()?;
    // c(α) ≤ min d^Σ / max d^Σ ≤ 1, so 1 is a safe cap when A never loses definiteness
    let hi = if alpha_exist.is_finite() {
        EXISTENCE_CAP * alpha_exist
    } else {
        1.0
    };
    let mut trace = Vec::new();
    let mut eval = |alpha: f64| -> Result<f64> {
        let c = condition_value(&a, alpha, form)?;
        trace.push((alpha, c));
        Ok(c - alpha)
    };

    let mut bracket = None;
    let mut prev = 0.0;
    for g in 1..=ALPHA_GRID_POINTS {
        let alpha = hi * g as f64 / ALPHA_GRID_POINTS as f64;
        if eval(alpha)? <= 0.0 {
            bracket = Some((prev, alpha));
            break;
        }
        prev = alpha;
    }
    let Some((mut lo, mut up)) = bracket else {
        return Ok(AlphaDiagnostics {
            alpha_exist,
            alpha_hat: hi,
            capped_by_existence: true,
            bisection_iterations: 0,
            condition_values: trace,
        });
    };
    let mut iterations = 0;
    while up - lo > tol {
        let mid = 0.5 * (lo + up);
        if eval(mid)? > 0.0 {
            lo = mid;
        } else {
            up = mid;
        }
        iterations += 1;
    }
    // lo = 0 only when the very first grid point already fails
    let alpha_hat = if lo > 0.0 { lo } else { 0.5 * up };
    Ok(AlphaDiagnostics {
        alpha_exist,
        alpha_hat,
        capped_by_existence: false,
        bisection_iterations: iterations,
        condition_values: trace,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub result: Result<AccessibilityVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub labels: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn alphas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.alpha).collect()
    }

    pub fn solved(&self) -> impl Iterator<Item = (f64, &AccessibilityVector)> {
        self.rows
            .iter()
            .filter_map(|r| r.result.as_ref().ok().map(|v| (r.alpha, v)))
    }

    /// `alpha,node,score` rows; failed rows are omitted.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,node,score\n");
        for (alpha, v) in self.solved() {
            let a = format_sig(alpha, 10);
            for (label, s) in self.labels.iter().zip(&v.scores) {
                out.push_str(&format!("{},{},{}\n", a, label, format_sig(*s, 12)));
            }
        }
        out
    }
}

/// Evaluates `x(α)` on `steps` evenly spaced values from `alpha_min` to
/// `alpha_max` inclusive. A failed solve is recorded on its row.
pub fn sweep(net: &TransportationNetwork, alpha_min: f64, alpha_max: f64, steps: usize) -> Result<SweepTable> {
    if steps < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 steps, got {steps}")));
    }
    if !(alpha_min > 0.0 && alpha_min < alpha_max) {
        return Err(Error::InvalidGrid(format!(
            "need 0 < alpha_min < alpha_max, got {alpha_min}..{alpha_max}"
        )));
    }
    let a = InfluenceMatrix::new(net)?;
    let bound = a.existence_bound()?;
    if alpha_max >= bound {
        return Err(Error::InvalidGrid(format!(
            "alpha_max {alpha_max} is not below the existence bound {bound}"
        )));
    }
    let non_metric = !net.is_metric();
    let rows = (0..steps)
        .into_par_iter()
        .map(|k| {
            let alpha = alpha_min + (alpha_max - alpha_min) * k as f64 / (steps - 1) as f64;
            let result = a.solve(alpha).map(|scores| AccessibilityVector {
                scores,
                index: AccessibilityIndex::Generalized { alpha },
                non_metric,
            });
            SweepRow { alpha, result }
        })
        .collect();
    Ok(SweepTable {
        labels: net.labels().to_vec(),
        rows,
    })
}
