use rand_distr::{Distribution, Exp1};

use super::SolverConfig;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::measures::hs_bound;
use crate::spectral::fidelity_with_diagonal;
use crate::states::{dephase, seeded_rng, DensityMatrix, IncoherentState};

/// Finite-difference step along simplex tangent directions.
const FD_STEP: f64 = 1e-6;
/// A start stops once an accepted step improves the fidelity by less than this.
const MIN_IMPROVEMENT: f64 = 1e-10;
const MAX_STEPS_PER_START: usize = 5_000;
const MIN_RATE: f64 = 1e-14;
const MAX_RATE: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct GeometricResult {
    /// `1 - F*`.
    pub value: f64,
    /// Best fidelity found.
    pub fidelity: f64,
    /// Incoherent state attaining `fidelity`.
    pub closest: IncoherentState,
    /// Ascent steps summed over all starts.
    pub iterations: usize,
    /// At least one start met its stopping rule before the step budget.
    pub converged: bool,
}

/// Geometric measure of coherence `1 - max_{sigma incoherent} F(rho, sigma)`.
pub fn c_g(rho: &DensityMatrix, cfg: &SolverConfig) -> Result<f64> {
    Ok(c_g_detailed(rho, cfg)?.value)
}

/// Multi-start entropic mirror ascent on the fidelity over the probability simplex.
///
/// Starts are, in order: the Hilbert-Schmidt bound optimizer, the dephased
/// state, the uniform distribution, then seeded Dirichlet draws (stream =
/// start index). The best start wins, ties going to the earlier one, so the
/// result is a deterministic function of `(rho, cfg.seed, cfg.restarts)`.
///
/// Since the first start already has fidelity at least `sum_i b_ii^2`, the
/// returned value never exceeds the Hilbert-Schmidt bound; a violation beyond
/// 1e-4 is reported as [`Error::OptimizerFailure`].
pub fn c_g_detailed(rho: &DensityMatrix, cfg: &SolverConfig) -> Result<GeometricResult> {
    cfg.validate()?;
    let d = rho.dim();
    let bound = hs_bound(rho)?;

    let mut starts: Vec<Vec<f64>> = vec![
        bound.delta.probs().to_vec(),
        dephase(rho).probs().to_vec(),
        IncoherentState::uniform(d).probs().to_vec(),
    ];
    for k in starts.len()..cfg.restarts.max(1) {
        let mut rng = seeded_rng(cfg.seed, k as u64);
        let draw: Vec<f64> = (0..d).map(|_| Exp1.sample(&mut rng)).collect();
        let total: f64 = draw.iter().sum();
        starts.push(draw.iter().map(|v| v / total).collect());
    }
    starts.truncate(cfg.restarts.max(1));

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut iterations = 0;
    let mut any_converged = false;
    for start in starts {
        let run = ascend(rho.matrix(), start)?;
        iterations += run.steps;
        any_converged |= run.converged;
        if best.as_ref().is_none_or(|(f, _)| run.fidelity > *f) {
            best = Some((run.fidelity, run.point));
        }
    }
    let (fidelity, point) = best.expect("at least one start");
    if !any_converged {
        return Err(Error::OptimizerFailure(
            "no start of the fidelity ascent converged".into(),
        ));
    }

    let value = (1.0 - fidelity).max(0.0);
    if value > bound.value + 1e-4 {
        return Err(Error::OptimizerFailure(format!(
            "geometric measure {value} exceeds Hilbert-Schmidt bound {}",
            bound.value
        )));
    }
    Ok(GeometricResult {
        value,
        fidelity,
        closest: IncoherentState::from_weights(&point)?,
        iterations,
        converged: any_converged,
    })
}

struct Ascent {
    fidelity: f64,
    point: Vec<f64>,
    steps: usize,
    converged: bool,
}

fn ascend(rho: &ComplexMatrix, mut x: Vec<f64>) -> Result<Ascent> {
    let objective = |x: &[f64]| fidelity_with_diagonal(rho, x);
    let mut f = objective(&x)?;
    let mut rate = 1.0;
    let mut steps = 0;
    let mut converged = false;

    while steps < MAX_STEPS_PER_START {
        steps += 1;
        let grad = tangent_gradient(&x, f, &objective)?;
        let mut proposal: Vec<f64> = x
            .iter()
            .zip(&grad)
            .map(|(xi, gi)| xi * (rate * gi).clamp(-700.0, 700.0).exp())
            .collect();
        let total: f64 = proposal.iter().sum();
        proposal.iter_mut().for_each(|p| *p /= total);
        let candidate = objective(&proposal)?;

        if candidate > f {
            let gain = candidate - f;
            x = proposal;
            f = candidate;
            rate = (rate * 2.0).min(MAX_RATE);
            if gain < MIN_IMPROVEMENT {
                converged = true;
                break;
            }
        } else {
            rate *= 0.5;
            if rate < MIN_RATE {
                // no ascent direction at any step length: stationary
                converged = true;
                break;
            }
        }
    }
    Ok(Ascent {
        fidelity: f,
        point: x,
        steps,
        converged,
    })
}

/// Directional derivatives along `e_i - x`, which stay on the simplex.
/// Central differences where both sides are feasible, forward otherwise.
fn tangent_gradient(
    x: &[f64],
    fx: f64,
    objective: &impl Fn(&[f64]) -> Result<f64>,
) -> Result<Vec<f64>> {
    let d = x.len();
    let mut grad = vec![0.0; d];
    let mut probe = vec![0.0; d];
    for i in 0..d {
        let shifted = |probe: &mut Vec<f64>, h: f64| {
            for j in 0..d {
                let e = if i == j { 1.0 } else { 0.0 };
                probe[j] = x[j] + h * (e - x[j]);
            }
        };
        shifted(&mut probe, FD_STEP);
        let plus = objective(&probe)?;
        let backward_ok = x[i] * (1.0 + FD_STEP) - FD_STEP >= 0.0;
        grad[i] = if backward_ok {
            shifted(&mut probe, -FD_STEP);
            (plus - objective(&probe)?) / (2.0 * FD_STEP)
        } else {
            (plus - fx) / FD_STEP
        };
    }
    Ok(grad)
}
