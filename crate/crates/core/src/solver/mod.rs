//! Numerical optimization for the measures without a general closed form.
//!
//! - [`c_tr_modified`]: `min_{lambda >= 0, delta incoherent} ||rho - lambda delta||_tr`,
//!   solved as a convex problem over the cone of nonnegative diagonal matrices
//!   with Douglas-Rachford splitting.
//! - [`c_g`]: geometric measure `1 - max_sigma F(rho, sigma)` over incoherent
//!   `sigma`, by multi-start entropic mirror ascent on the simplex.
//! - [`grid_oracle_ctr`] / [`grid_oracle_cg`]: brute-force grid searches for
//!   `d <= 3`, used to certify the two solvers.

mod geometric;
mod oracle;
mod splitting;

pub use geometric::{c_g, c_g_detailed, GeometricResult};
pub use oracle::{grid_oracle_cg, grid_oracle_ctr, simplex_grid};
pub use splitting::{c_tr_modified, project_nonneg_diag, prox_trace_norm};

use crate::error::{Error, Result};
use crate::spectral::trace_norm;
use crate::states::{DensityMatrix, IncoherentState};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Proximal step `t`.
    pub step: f64,
    /// Fixed-point residual `||X - Y||_F` at which splitting stops.
    pub tol: f64,
    pub max_iter: usize,
    /// Number of starts for the geometric-measure optimizer.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            step: 1.0,
            tol: 1e-9,
            max_iter: 20_000,
            restarts: 8,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::BadParameter(format!("step {} must be positive", self.step)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::BadParameter(format!("tol {} must be positive", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::BadParameter("max_iter must be >= 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::BadParameter("restarts must be >= 1".into()));
        }
        Ok(())
    }
}

/// Output of [`c_tr_modified`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    /// `||rho - lambda diag(delta)||_tr` at the reported optimizer.
    pub value: f64,
    pub lambda: f64,
    pub delta: IncoherentState,
    pub iterations: usize,
    /// Final fixed-point residual.
    pub residual: f64,
    pub converged: bool,
    /// `lambda` was below 1e-12, so `delta` is reported as uniform.
    pub degenerate_lambda: bool,
}

impl SolverResult {
    /// Recomputes the objective at `(lambda, delta)` and returns
    /// `|objective - value|`, independently of how the solver got there.
    pub fn certificate_gap(&self, rho: &DensityMatrix) -> Result<f64> {
        let feasible = self.delta.to_matrix().scale(self.lambda);
        let objective = trace_norm(&(rho.matrix() - &feasible))?;
        Ok((objective - self.value).abs())
    }
}
