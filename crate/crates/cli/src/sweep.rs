//! Measure curves along the maximally coherent mixed state family.

use std::fmt::Write as _;

use modtrace_core::measures::{c_l1, c_r};
use modtrace_core::solver::{c_g, c_tr_modified};
use modtrace_core::states::mcms;
use modtrace_core::SolverConfig;

use crate::error::{CliError, Result};

pub const CSV_HEADER: &str = "p,c_l1,c_tr_mod,c_g,c_r";

/// Slack on the per-row ordering `c_g <= c_tr_mod <= c_l1`.
pub const ROW_ORDER_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub c_l1: f64,
    pub c_tr_mod: f64,
    pub c_g: f64,
    pub c_r: f64,
}

impl SweepRow {
    pub fn ordered(&self) -> bool {
        self.c_g <= self.c_tr_mod + ROW_ORDER_TOL && self.c_tr_mod <= self.c_l1 + ROW_ORDER_TOL
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{:.9},{:.9},{:.9},{:.9},{:.9}",
            self.p, self.c_l1, self.c_tr_mod, self.c_g, self.c_r
        )
    }
}

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| {
            if k + 1 == steps {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

pub fn sweep(d: usize, p_min: f64, p_max: f64, steps: usize, cfg: &SolverConfig) -> Result<Vec<SweepRow>> {
    if d < 2 {
        return Err(CliError::Input(format!("dimension {d} must be >= 2")));
    }
    if !(p_min > 0.0 && p_min < p_max && p_max <= 1.0) {
        return Err(CliError::Input(format!(
            "need 0 < p-min < p-max <= 1, got [{p_min}, {p_max}]"
        )));
    }
    if steps < 2 {
        return Err(CliError::Input(format!("steps {steps} must be >= 2")));
    }
    let mut rows = Vec::with_capacity(steps);
    for p in linspace(p_min, p_max, steps) {
        let rho = mcms(d, p)?;
        let solved = c_tr_modified(&rho, cfg)?;
        if !solved.converged {
            return Err(CliError::Unconverged);
        }
        let row = SweepRow {
            p,
            c_l1: c_l1(&rho),
            c_tr_mod: solved.value,
            c_g: c_g(&rho, cfg)?,
            c_r: c_r(&rho)?,
        };
        if !row.ordered() {
            return Err(CliError::Input(format!("row at p = {p} violates c_g <= c_tr_mod <= c_l1: {row:?}")));
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_endpoints() {
        let g = linspace(0.05, 1.0, 20);
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[19], 1.0);
        assert!((g[9] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_ranges() {
        let cfg = SolverConfig::default();
        assert!(sweep(1, 0.1, 0.9, 5, &cfg).is_err());
        assert!(sweep(3, 0.0, 0.9, 5, &cfg).is_err());
        assert!(sweep(3, 0.5, 0.4, 5, &cfg).is_err());
        assert!(sweep(3, 0.1, 1.1, 5, &cfg).is_err());
        assert!(sweep(3, 0.1, 0.9, 1, &cfg).is_err());
    }

    #[test]
    fn mcms_rows() {
        let rows = sweep(3, 0.05, 1.0, 20, &SolverConfig::default()).unwrap();
        let mid = &rows[9];
        assert!((mid.p - 0.5).abs() < 1e-12);
        assert!((mid.c_l1 - 1.0).abs() < 1e-12);
        assert!((mid.c_tr_mod - 0.5).abs() < 1e-6);
        for row in &rows {
            assert!((row.c_tr_mod - row.p).abs() <= 1e-6, "{row:?}");
        }
        let last = rows.last().unwrap();
        assert!(last.c_r > last.c_tr_mod);
    }

    #[test]
    fn csv_layout() {
        let rows = sweep(2, 0.5, 1.0, 2, &SolverConfig::default()).unwrap();
        let csv = to_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0.500000000,0.500000000,0.500000000,"));
        assert!(csv.ends_with('\n') && !csv.contains(",\n"));
    }
}
