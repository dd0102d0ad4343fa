//! Brute-force grid searches for `d <= 3`.
//!
//! These evaluate the objectives directly on explicit grids and share no code
//! path with the iterative solvers beyond the spectral primitives.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::spectral::{fidelity, trace_norm};
use crate::states::DensityMatrix;

const MAX_ORACLE_DIM: usize = 3;

/// All points of the probability simplex in `dim` coordinates whose entries
/// are multiples of `1 / steps`.
pub fn simplex_grid(dim: usize, steps: usize) -> Vec<Vec<f64>> {
    fn fill(dim: usize, left: usize, steps: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() + 1 == dim {
            prefix.push(left);
            out.push(prefix.iter().map(|&k| k as f64 / steps as f64).collect());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            fill(dim, left - k, steps, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim > 0 && steps > 0 {
        fill(dim, steps, steps, &mut Vec::with_capacity(dim), &mut out);
    }
    out
}

fn check_dim(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() > MAX_ORACLE_DIM {
        return Err(Error::DimensionTooLarge(rho.dim()));
    }
    Ok(())
}

/// `min ||rho - lambda diag(x)||_tr` over `lambda in {0, .., lambda_max}`
/// (`steps + 1` points) and `x` on the simplex grid of resolution `1/steps`.
/// Every grid point is feasible, so the result upper-bounds the true minimum.
pub fn grid_oracle_ctr(rho: &DensityMatrix, lambda_max: f64, steps: usize) -> Result<f64> {
    check_dim(rho)?;
    if steps == 0 || steps > 60 {
        return Err(Error::BadParameter(format!("oracle steps {steps} not in 1..=60")));
    }
    if !(lambda_max >= 0.0) {
        return Err(Error::BadParameter(format!("lambda_max {lambda_max} negative")));
    }
    let grid = simplex_grid(rho.dim(), steps);
    let mut best = f64::INFINITY;
    for l in 0..=steps {
        let lambda = lambda_max * l as f64 / steps as f64;
        for x in &grid {
            let weights: Vec<f64> = x.iter().map(|v| lambda * v).collect();
            let gap = rho.matrix() - &ComplexMatrix::from_diagonal(&weights);
            best = best.min(trace_norm(&gap)?);
        }
    }
    Ok(best)
}

/// `1 - max F(rho, diag(x))` over the simplex grid of resolution `1/steps`.
pub fn grid_oracle_cg(rho: &DensityMatrix, steps: usize) -> Result<f64> {
    check_dim(rho)?;
    if steps == 0 || steps > 200 {
        return Err(Error::BadParameter(format!("oracle steps {steps} not in 1..=200")));
    }
    let mut best: f64 = 0.0;
    for x in simplex_grid(rho.dim(), steps) {
        let sigma = DensityMatrix::new(ComplexMatrix::from_diagonal(&x))?;
        best = best.max(fidelity(rho, &sigma)?);
    }
    Ok((1.0 - best).max(0.0))
}
