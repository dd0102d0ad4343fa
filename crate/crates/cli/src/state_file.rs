//! Plain-text state files.
//!
//! ```text
//! 2
//! 0.5,0 0.5,0
//! 0.5,0 0.5,0
//! ```
//!
//! Line 1 holds the dimension `d`; each of the next `d` lines holds `d`
//! whitespace-separated entries written `re,im`. Blank lines and lines
//! starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use modtrace_core::{Complex64, ComplexMatrix, DensityMatrix};

use crate::error::{CliError, Result};

/// Validation tolerance applied when reading states from disk.
pub const IO_TOLERANCE: f64 = 1e-8;

pub fn parse_state(text: &str, tol: f64) -> Result<DensityMatrix> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_idx, header) = lines
        .next()
        .ok_or_else(|| CliError::Input("state file is empty".into()))?;
    let dim: usize = header
        .parse()
        .map_err(|_| CliError::Input(format!("line {}: expected dimension, got `{header}`", header_idx + 1)))?;
    if dim == 0 {
        return Err(CliError::Input("dimension must be positive".into()));
    }

    let mut entries = Vec::with_capacity(dim * dim);
    for row in 0..dim {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| CliError::Input(format!("expected {dim} matrix rows, found {row}")))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != dim {
            return Err(CliError::Input(format!(
                "line {}: expected {dim} entries, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        for field in fields {
            entries.push(parse_entry(field).ok_or_else(|| {
                CliError::Input(format!("line {}: bad entry `{field}` (want re,im)", lineno + 1))
            })?);
        }
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(CliError::Input(format!("line {}: trailing content", lineno + 1)));
    }

    let matrix = ComplexMatrix::from_row_major(entries)?;
    DensityMatrix::new_with_tolerance(matrix, tol)
        .map_err(|e| CliError::Input(format!("invalid density matrix: {e}")))
}

fn parse_entry(field: &str) -> Option<Complex64> {
    let (re, im) = field.split_once(',')?;
    Some(Complex64::new(re.parse().ok()?, im.parse().ok()?))
}

pub fn read_state(path: &Path, tol: f64) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_state(&text, tol)
}

/// Serializes with round-trip precision.
pub fn format_state(rho: &DensityMatrix) -> String {
    let m = rho.matrix();
    let mut out = format!("{}\n", m.dim());
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim())
            .map(|j| format!("{:?},{:?}", m[(i, j)].re, m[(i, j)].im))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
