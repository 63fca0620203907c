use crate::engine::{SolveReport, SolveStatus};

/// `exp(mean(ln(v + shift))) - shift`, or `None` for an empty slice.
pub fn shifted_geomean(values: &[f64], shift: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mean = values.iter().map(|v| (v + shift).ln()).sum::<f64>() / values.len() as f64;
    Some(mean.exp() - shift)
}

/// Remaining gap at termination relative to the root integrality gap.
///
/// `z_star` and `root_lp` are in the instance's sense. Finished runs score 0;
/// an unfinished run without an incumbent, or with a zero root gap, scores 1.
pub fn gap_remaining(report: &SolveReport, z_star: f64, root_lp: f64) -> f64 {
    if report.status != SolveStatus::NodeLimit {
        return 0.0;
    }
    let denom = (z_star - root_lp).abs();
    let open = report.incumbent.bound - report.dual_bound;
    if !(denom > 0.0) || !open.is_finite() {
        return 1.0;
    }
    (open / denom).clamp(0.0, 1.0)
}

/// Percentage by which `value` improves on `baseline`.
pub fn reduction_pct(baseline: f64, value: f64) -> f64 {
    100.0 * (baseline - value) / baseline
}
