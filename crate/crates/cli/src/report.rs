//! Text formatting for `compute` output.

use modtrace_core::measures::MeasureValue;
use modtrace_core::{DensityMatrix, MeasureReport, Result};

/// Formats `v` with `digits` significant digits, in fixed notation when the
/// decimal exponent lies in `[-5, digits)` and scientific otherwise.
pub fn format_significant(v: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if v == 0.0 || (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

/// One `name value method iterations` line; solver results append the
/// feasibility-certificate residual and an `unconverged` marker when needed.
pub fn format_line(entry: &MeasureValue, rho: &DensityMatrix) -> Result<String> {
    let mut line = format!(
        "{} {} {} {}",
        entry.measure.key(),
        format_significant(entry.value, 12),
        entry.method,
        entry.iterations
    );
    if let Some(res) = &entry.solver {
        line.push_str(&format!(" certificate={:.3e}", res.certificate_gap(rho)?));
        line.push_str(&format!(" lambda={}", format_significant(res.lambda, 12)));
    }
    if !entry.converged {
        line.push_str(" unconverged");
    }
    Ok(line)
}

pub fn format_report(report: &MeasureReport, rho: &DensityMatrix) -> Result<Vec<String>> {
    report.entries().map(|e| format_line(e, rho)).collect()
}
