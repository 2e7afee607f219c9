//! Log-log slope fits, confidence intervals and trace aggregation.

use std::collections::BTreeMap;

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::solvers::{SolverKind, TraceRow};

/// Minimum number of points a slope fit accepts.
pub const MIN_FIT_POINTS: usize = 5;

/// Values at or below this are treated as having hit the numerical floor.
pub const FIT_FLOOR: f64 = 1e-14;

/// Ordinary least squares fit of `ln y = intercept + slope · ln x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Smallest and largest x actually used.
    pub fit_range: (f64, f64),
    pub points: usize,
}

/// Fits `points` with `lo ≤ x ≤ hi` and `y > FIT_FLOOR` on log-log axes.
pub fn fit_loglog(points: &[(f64, f64)], lo: f64, hi: f64) -> Result<SlopeFit> {
    let kept: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(x, y)| x >= lo && x <= hi && x > 0.0 && y > FIT_FLOOR)
        .collect();
    let used: Vec<(f64, f64)> = kept.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    if used.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, have: used.len() });
    }
    let n = used.len() as f64;
    let mx = used.iter().map(|p| p.0).sum::<f64>() / n;
    let my = used.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = used.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = used.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = used.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, have: 1 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = used.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy <= f64::EPSILON * n { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    let fit_range = kept.iter().map(|p| p.0).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    Ok(SlopeFit { slope, intercept, r_squared, fit_range, points: used.len() })
}

/// Slope of log exploitability against log iteration over `[lo_iter, hi_iter]`.
pub fn fit_loglog_slope(trace: &[TraceRow], lo_iter: f64, hi_iter: f64) -> Result<SlopeFit> {
    let points: Vec<(f64, f64)> =
        trace.iter().map(|r| (r.iteration as f64, r.exploitability)).collect();
    fit_loglog(&points, lo_iter, hi_iter)
}

/// Growth exponent of cumulative weight against iteration count.
pub fn weight_correspondence(trace: &[TraceRow], lo_iter: f64, hi_iter: f64) -> Result<SlopeFit> {
    let points: Vec<(f64, f64)> =
        trace.iter().map(|r| (r.iteration as f64, r.cumulative_weight)).collect();
    fit_loglog(&points, lo_iter, hi_iter)
}

/// For each point of `fast`, the (log-interpolated) iteration at which `slow`
/// first reaches the same exploitability, fitted against `fast`'s iteration.
///
/// With `fast` a DW-FP trace and `slow` an FP trace on the same game, the
/// slope says how FP's iteration count to a given accuracy scales with DW-FP's.
pub fn exploitability_matched_correspondence(
    fast: &[TraceRow],
    slow: &[TraceRow],
    lo_iter: f64,
    hi_iter: f64,
) -> Result<SlopeFit> {
    let points: Vec<(f64, f64)> = fast
        .iter()
        .filter_map(|r| {
            iteration_reaching(slow, r.exploitability).map(|t| (r.iteration as f64, t))
        })
        .collect();
    fit_loglog(&points, lo_iter, hi_iter)
}

/// Log-log interpolated iteration at which `trace` first drops to `target`.
fn iteration_reaching(trace: &[TraceRow], target: f64) -> Option<f64> {
    let idx = trace.iter().position(|r| r.exploitability <= target)?;
    if idx == 0 {
        return Some(trace[0].iteration as f64);
    }
    let (a, b) = (&trace[idx - 1], &trace[idx]);
    if b.exploitability <= FIT_FLOOR || a.exploitability <= b.exploitability {
        return Some(b.iteration as f64);
    }
    let (la, lb) = ((a.iteration as f64).ln(), (b.iteration as f64).ln());
    let (ea, eb, et) = (a.exploitability.ln(), b.exploitability.ln(), target.ln());
    Some((la + (lb - la) * (ea - et) / (ea - eb)).exp())
}

/// First recorded iteration with exploitability at or below `target`.
pub fn iterations_to_reach(trace: &[TraceRow], target: f64) -> Option<u64> {
    trace.iter().find(|r| r.exploitability <= target).map(|r| r.iteration)
}

/// Sample mean with a two-sided 95% Student-t interval.
pub fn confidence_interval(samples: &[f64]) -> Result<(f64, f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, have: samples.len() });
    }
    if samples.iter().all(|&x| x == samples[0]) {
        return Ok((samples[0], samples[0], samples[0]));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let t = StudentsT::new(0.0, 1.0, n - 1.0)
        .map_err(|e| Error::Config(e.to_string()))?
        .inverse_cdf(0.975);
    let half = t * (var / n).sqrt();
    Ok((mean, mean - half, mean + half))
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { 0.5 * (v[mid - 1] + v[mid]) })
}

/// Rows of one solver grouped by game seed, each run in iteration order.
pub fn runs_of(rows: &[TraceRow], solver: SolverKind) -> BTreeMap<u64, Vec<TraceRow>> {
    let mut runs: BTreeMap<u64, Vec<TraceRow>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.solver == solver) {
        runs.entry(r.game_seed).or_default().push(r.clone());
    }
    for run in runs.values_mut() {
        run.sort_by_key(|r| r.iteration);
    }
    runs
}

/// Mean exploitability over games at each recorded iteration of one solver.
pub fn mean_by_iteration(rows: &[TraceRow], solver: SolverKind) -> Vec<(u64, f64)> {
    let mut sorted: Vec<&TraceRow> = rows.iter().filter(|r| r.solver == solver).collect();
    sorted.sort_by_key(|r| (r.iteration, r.game_seed));
    let mut acc: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
    for r in sorted {
        let e = acc.entry(r.iteration).or_default();
        e.0 += r.exploitability;
        e.1 += 1;
    }
    acc.into_iter().map(|(it, (sum, n))| (it, sum / n as f64)).collect()
}
