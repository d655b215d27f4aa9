//! Closed-form success bounds, the full-path comparison, and the exhaustive
//! check that no deterministic oblivious agent can use classical pebbles.
//!
//! Everything that can under- or overflow is carried in log space:
//! `ln(1/cos^2 x)` switches to its series `x^2 + x^4/6` below `x = 1e-4`.

use std::f64::consts::{FRAC_PI_2, LN_2};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::agent::{classical_trajectory, Action, DecisionTable};
use crate::graph::{gen_gpqr, GadgetSpec, PortGraph};

/// Target failure used when none is given.
pub const DEFAULT_EPS: f64 = 0.01;

/// Below this angle `ln(1/cos^2 x)` uses its series.
const SERIES_SWITCH: f64 = 1e-4;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("{0}")]
    InvalidInput(String),
}

/// `ln(1 / cos^2 x)` for `0 <= x < pi/2`.
pub fn ln_inv_cos2(x: f64) -> f64 {
    if x < SERIES_SWITCH {
        let x2 = x * x;
        x2 + x2 * x2 / 6.0
    } else {
        -2.0 * x.cos().ln()
    }
}

/// `ln(1/delta)` with `delta = cos^2(pi / (2 * max_degree))`.
pub fn ln_inv_delta(max_degree: usize) -> f64 {
    ln_inv_cos2(FRAC_PI_2 / max_degree as f64)
}

/// `ln(max_degree * delta^n)`: log of the per-node bad-event bound.
fn ln_per_node_failure(max_degree: usize, n: usize) -> f64 {
    (max_degree as f64).ln() - n as f64 * ln_inv_delta(max_degree)
}

/// `max_degree * delta^n`, uncapped.
pub fn per_node_failure(max_degree: usize, n: usize) -> f64 {
    ln_per_node_failure(max_degree, n).exp()
}

/// `max(0, 1 - max_degree * delta^n)^d`.
pub fn success_lower_bound(d: usize, max_degree: usize, n: usize) -> f64 {
    let ln_fail = ln_per_node_failure(max_degree, n);
    if ln_fail >= 0.0 {
        return 0.0;
    }
    (d as f64 * (-ln_fail.exp()).ln_1p()).exp()
}

/// Smallest `n >= 1` with `max_degree * delta^n <= eps / d`, compared in
/// log space with `1e-12` slack so exact ties (e.g. `delta = 1/2`) are not
/// lost to rounding in `cos`.
pub fn required_n(d: usize, max_degree: usize, eps: f64) -> usize {
    let target = (eps / d as f64).ln();
    let ln_delta = (max_degree as f64).ln();
    let rate = ln_inv_delta(max_degree);
    let fits = |n: usize| ln_delta - n as f64 * rate <= target + 1e-12;
    let mut n = (((ln_delta - target) / rate).ceil().max(1.0)) as usize;
    while n > 1 && fits(n - 1) {
        n -= 1;
    }
    while !fits(n) {
        n += 1;
    }
    n
}

/// Analytic guarantee of the fixed-n protocol for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    /// `cos^2(pi / (2 * max_degree))`.
    pub delta: f64,
    /// `max_degree * delta^n`, capped at 1.
    pub per_node_failure: f64,
    pub success_lower: f64,
    /// `n` reaching `1 - eps` at this `D` and degree.
    pub required_n: usize,
    pub path_length: usize,
    pub max_degree: usize,
    pub n: usize,
    pub eps: f64,
}

/// Bound for `n` samples per basis; `n = None` evaluates at `required_n`.
pub fn bound_report(d: usize, max_degree: usize, n: Option<usize>, eps: f64) -> Result<BoundReport, AnalysisError> {
    if d == 0 || max_degree < 2 {
        return Err(AnalysisError::InvalidInput(format!(
            "need D >= 1 and delta >= 2, got D={d} delta={max_degree}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(AnalysisError::InvalidInput(format!("eps must lie in (0, 1), got {eps}")));
    }
    let required = required_n(d, max_degree, eps);
    let n = n.unwrap_or(required);
    if n == 0 {
        return Err(AnalysisError::InvalidInput("n must be at least 1".into()));
    }
    let c = (FRAC_PI_2 / max_degree as f64).cos();
    Ok(BoundReport {
        delta: c * c,
        per_node_failure: per_node_failure(max_degree, n).min(1.0),
        success_lower: success_lower_bound(d, max_degree, n),
        required_n: required,
        path_length: d,
        max_degree,
        n,
        eps,
    })
}

/// Probability that one wrong bit/sign basis shows a uniform run over `n`
/// samples of either sign: `2 * 2^-n`. Each sign alone is `2^-n`.
pub fn bitsign4_wrong_run_prob(n: usize) -> f64 {
    assert!(n >= 1, "a run needs at least one sample");
    (-((n as f64 - 1.0) * LN_2)).exp()
}

/// Per-sign uniform-run probability for a wrong bit/sign basis: `2^-n`.
pub fn bitsign4_wrong_run_prob_per_sign(n: usize) -> f64 {
    0.5 * bitsign4_wrong_run_prob(n)
}

/// Smallest `n >= 1` with `2^(1-n) <= eps / d`, the bit/sign counterpart of
/// [`required_n`].
pub fn bitsign4_required_n(d: usize, eps: f64) -> usize {
    let need = (d as f64 / eps).ln() / LN_2;
    let n = (need - 1e-12).ceil().max(0.0) as usize + 1;
    n.max(1)
}

/// [`bound_report`] for the bit/sign scheme: one wrong basis per node,
/// mimicking a run with probability `2^(1-n)`.
pub fn bitsign4_bound_report(d: usize, n: Option<usize>, eps: f64) -> Result<BoundReport, AnalysisError> {
    if d == 0 {
        return Err(AnalysisError::InvalidInput("need D >= 1".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(AnalysisError::InvalidInput(format!("eps must lie in (0, 1), got {eps}")));
    }
    let required = bitsign4_required_n(d, eps);
    let n = n.unwrap_or(required);
    if n == 0 {
        return Err(AnalysisError::InvalidInput("n must be at least 1".into()));
    }
    let fail = bitsign4_wrong_run_prob(n);
    Ok(BoundReport {
        delta: 0.5,
        per_node_failure: fail.min(1.0),
        success_lower: if fail >= 1.0 { 0.0 } else { (d as f64 * (-fail).ln_1p()).exp() },
        required_n: required,
        path_length: d,
        max_degree: 4,
        n,
        eps,
    })
}

/// Discrimination cost when the whole path is packed into one qubit of a
/// `delta^D`-vector family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FullPathBound {
    /// `ln(1/delta')`, `delta' = cos^2(pi / (2 delta^D))`. May underflow to
    /// 0 for very long paths; the `ln_` fields stay finite.
    pub log_inv_delta_prime: f64,
    pub ln_log_inv_delta_prime: f64,
    /// `ln(delta D / eps) / ln(1/delta')`; may overflow to infinity.
    pub measurement_count_estimate: f64,
    pub ln_measurement_count: f64,
}

pub fn full_path_log_bound(d: usize, delta: usize) -> FullPathBound {
    full_path_log_bound_eps(d, delta, DEFAULT_EPS)
}

pub fn full_path_log_bound_eps(d: usize, delta: usize, eps: f64) -> FullPathBound {
    let ln_size = d as f64 * (delta as f64).ln();
    let ln_x = FRAC_PI_2.ln() - ln_size;
    let x = if ln_size < 700.0 {
        FRAC_PI_2 / (delta as f64).powi(d as i32)
    } else {
        ln_x.exp()
    };
    let (l, ln_l) = if x < SERIES_SWITCH {
        let x2 = x * x;
        // ln(x^2 (1 + x^2/6)) without forming x^2 when it underflows
        (x2 + x2 * x2 / 6.0, 2.0 * ln_x + (x2 / 6.0).ln_1p())
    } else {
        let l = ln_inv_cos2(x);
        (l, l.ln())
    };
    let ln_numer = (delta as f64 * d as f64 / eps).ln();
    FullPathBound {
        log_inv_delta_prime: l,
        ln_log_inv_delta_prime: ln_l,
        measurement_count_estimate: ln_numer / l,
        ln_measurement_count: ln_numer.ln() - ln_l,
    }
}

/// Total sampled qubits of the per-node scheme against the single-qubit
/// full-path scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub path_length: usize,
    pub max_degree: usize,
    pub eps: f64,
    /// `D * required_n * delta / 2`.
    pub per_node_total: f64,
    /// `measurement_count_estimate * delta^D / 2`.
    pub full_path_total: f64,
    pub ln_per_node_total: f64,
    pub ln_full_path_total: f64,
    /// `full_path_total / per_node_total`, in log space.
    pub ln_ratio: f64,
    /// `full_path_total >= per_node_total`.
    pub full_path_not_better: bool,
}

pub fn compare_single_vs_per_node(d: usize, delta: usize) -> Result<ComparisonReport, AnalysisError> {
    compare_single_vs_per_node_eps(d, delta, DEFAULT_EPS)
}

pub fn compare_single_vs_per_node_eps(d: usize, delta: usize, eps: f64) -> Result<ComparisonReport, AnalysisError> {
    if d < 2 {
        return Err(AnalysisError::InvalidInput(
            "D = 1 makes both schemes identical; need D >= 2".into(),
        ));
    }
    if delta < 2 {
        return Err(AnalysisError::InvalidInput(format!("delta must be >= 2, got {delta}")));
    }
    let half = delta as f64 / 2.0;
    let n = required_n(d, delta, eps);
    let ln_per_node_total = (d as f64).ln() + (n as f64).ln() + half.ln();
    let fp = full_path_log_bound_eps(d, delta, eps);
    let ln_full_path_total = fp.ln_measurement_count + d as f64 * (delta as f64).ln() - LN_2;
    Ok(ComparisonReport {
        path_length: d,
        max_degree: delta,
        eps,
        per_node_total: d as f64 * n as f64 * half,
        full_path_total: ln_full_path_total.exp(),
        ln_per_node_total,
        ln_full_path_total,
        ln_ratio: ln_full_path_total - ln_per_node_total,
        full_path_not_better: ln_full_path_total >= ln_per_node_total,
    })
}

/// The 64 deterministic oblivious tables on the gadget's degrees 3 and 1,
/// indexed `((a * 4 + b) * 2 + c) * 2 + d` with `a`/`b` the degree-3 action
/// without/with a pebble (stay, 0, 1, 2) and `c`/`d` the degree-1 actions
/// (stay, 0).
pub fn gadget_tables() -> Vec<DecisionTable> {
    let deg3 = [Action::Stay, Action::Port(0), Action::Port(1), Action::Port(2)];
    let deg1 = [Action::Stay, Action::Port(0)];
    let mut out = Vec::with_capacity(64);
    for a in deg3 {
        for b in deg3 {
            for c in deg1 {
                for d in deg1 {
                    let t = DecisionTable::new()
                        .with(3, a, b)
                        .and_then(|t| t.with(1, c, d))
                        .expect("actions fit the degrees");
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Verdict for one table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableVerdict {
    pub index: usize,
    pub table: String,
    /// First gadget (family order) on which every placement fails.
    pub witness: Option<usize>,
    pub witness_spec: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpossibilityReport {
    pub tables: usize,
    pub graphs: usize,
    pub placements_per_graph: usize,
    pub defeated: usize,
    /// Longest visited prefix needed to decide any walk.
    pub max_walk_len: usize,
    /// A single gadget defeating every table, if one exists.
    pub universal_witness: Option<usize>,
    pub verdicts: Vec<TableVerdict>,
    pub pass: bool,
}

/// `true` when every one of the `2^n` marker placements keeps `table` from
/// the treasure. Also returns the longest trajectory seen.
pub fn defeats_all_placements(g: &PortGraph, table: &DecisionTable) -> (bool, usize) {
    let n = g.node_count();
    let mut longest = 0;
    for mask in 0u64..(1 << n) {
        let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let t = classical_trajectory(g, &bits, table).expect("gadget tables are total");
        longest = longest.max(t.visited.len());
        if t.reached_treasure {
            return (false, longest);
        }
    }
    (true, longest)
}

/// For each table, searches the 216 gadgets for one on which all 64
/// placements fail.
pub fn check_impossibility() -> ImpossibilityReport {
    let specs: Vec<GadgetSpec> = GadgetSpec::family().collect();
    let graphs: Vec<PortGraph> = specs
        .iter()
        .map(|&s| gen_gpqr(s).expect("family specs are valid"))
        .collect();
    let tables = gadget_tables();

    // defeat[t][g]
    let rows: Vec<(Vec<bool>, usize)> = tables
        .par_iter()
        .map(|t| {
            let mut longest = 0;
            let row = graphs
                .iter()
                .map(|g| {
                    let (beaten, len) = defeats_all_placements(g, t);
                    longest = longest.max(len);
                    beaten
                })
                .collect();
            (row, longest)
        })
        .collect();

    let verdicts: Vec<TableVerdict> = rows
        .iter()
        .enumerate()
        .map(|(i, (row, _))| {
            let witness = row.iter().position(|&b| b);
            TableVerdict {
                index: i,
                table: tables[i].to_string(),
                witness,
                witness_spec: witness.map(|w| format!("{:?}", specs[w])),
            }
        })
        .collect();
    let universal_witness = (0..graphs.len()).find(|&g| rows.iter().all(|(row, _)| row[g]));
    let defeated = verdicts.iter().filter(|v| v.witness.is_some()).count();
    ImpossibilityReport {
        tables: tables.len(),
        graphs: graphs.len(),
        placements_per_graph: 1 << 6,
        defeated,
        max_walk_len: rows.iter().map(|(_, l)| *l).max().unwrap_or(0),
        universal_witness,
        pass: defeated == tables.len(),
        verdicts,
    }
}
