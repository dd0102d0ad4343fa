//! Where the relative entropy of coherence of `mcms(d, p)` crosses `p`
//! (the modified trace measure of the same state).

use modtrace_core::measures::c_r;
use modtrace_core::states::mcms;

use crate::error::{CliError, Result};

pub const BRACKET: (f64, f64) = (0.5, 1.0);
pub const WIDTH: f64 = 1e-7;

/// `C_r(mcms(d, p)) - p`.
pub fn gap(d: usize, p: f64) -> Result<f64> {
    Ok(c_r(&mcms(d, p)?)? - p)
}

/// Bisects `gap(d, .)` on [`BRACKET`] down to [`WIDTH`], using whichever sign
/// change the endpoints exhibit.
pub fn crossing(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(CliError::Input(format!("dimension {d} must be >= 2")));
    }
    let (mut lo, mut hi) = BRACKET;
    let g_lo = gap(d, lo)?;
    let g_hi = gap(d, hi)?;
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(CliError::NoSignChange { lo, hi, g_lo, g_hi });
    }
    let lo_sign = g_lo.signum();
    while hi - lo > WIDTH {
        let mid = 0.5 * (lo + hi);
        let g = gap(d, mid)?;
        if g == 0.0 {
            return Ok(mid);
        }
        if g.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qutrit_crossing() {
        let p = crossing(3).unwrap();
        assert!((p - 0.96151).abs() <= 5e-5, "{p}");
        assert!(gap(3, 0.5).unwrap() < 0.0);
        assert!(gap(3, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn qubit_has_no_crossing() {
        // C_r <= ln 2 * p < p on (0, 1] for d = 2
        match crossing(2) {
            Err(CliError::NoSignChange { g_lo, g_hi, .. }) => {
                assert!(g_lo < 0.0 && g_hi < 0.0);
                assert!((g_hi - (2f64.ln() - 1.0)).abs() < 1e-12);
            }
            other => panic!("expected bracketing failure, got {other:?}"),
        }
    }

    #[test]
    fn higher_dimensions_cross_inside_bracket() {
        let mut last = 1.0;
        for d in 3..7 {
            let p = crossing(d).unwrap();
            assert!(p > 0.5 && p < 1.0);
            assert!(gap(d, p).unwrap().abs() < 1e-6);
            assert!(p < last, "crossing should move left as d grows");
            last = p;
        }
    }
}
