use super::{SolverConfig, SolverResult};
use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::spectral::{eig_hermitian, trace_norm};
use crate::states::{dephase, DensityMatrix, IncoherentState};

/// Tolerance for the multiplier selection along the optimizer ray.
const RAY_SLACK: f64 = 1e-14;

const DEGENERATE_LAMBDA: f64 = 1e-12;

/// Proximal operator of `t ||.||_tr`: soft-thresholds the eigenvalues of `v` by `t`.
pub fn prox_trace_norm(v: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(v)?;
    Ok(eig.map(|mu| mu.signum() * (mu.abs() - t).max(0.0)))
}

/// Euclidean projection onto real nonnegative diagonal matrices.
pub fn project_nonneg_diag(v: &ComplexMatrix) -> ComplexMatrix {
    let diag: Vec<f64> = v.diagonal().iter().map(|z| z.re.max(0.0)).collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// Modified trace distance measure of coherence.
///
/// Every `lambda * delta` with `lambda >= 0` and `delta` incoherent is a
/// nonnegative diagonal matrix `D`, and every such `D` arises this way, so the
/// problem is `min_{D >= 0 diagonal} ||rho - D||_tr`. Splitting alternates
/// `X = argmin_D ||rho - D||_tr + ||D - Z||^2 / 2t`
/// (`= rho - prox_{t||.||_tr}(rho - Z)`), the projection
/// `Y = P(2X - Z)`, and `Z += Y - X`, starting from `Z = diag(rho)`.
///
/// Optimizers need not be unique (for qubits with `r3 = 0` a whole interval
/// of multipliers is optimal). The reported optimizer is the point of
/// smallest multiplier on the segment `[0, D*]` whose objective stays within
/// 1e-14 of the value at the splitting limit `D*`.
///
/// A run that exhausts `max_iter` still returns its best iterate with
/// `converged = false`.
pub fn c_tr_modified(rho: &DensityMatrix, cfg: &SolverConfig) -> Result<SolverResult> {
    cfg.validate()?;
    let target = rho.matrix();
    let t = cfg.step;

    let mut z = dephase(rho).to_matrix();
    let mut y = z.clone();
    let mut best = (trace_norm(&(target - &y))?, y.clone());
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.max_iter {
        iterations += 1;
        let x = target - &prox_trace_norm(&(target - &z), t)?;
        let reflected = &x.scale(2.0) - &z;
        y = project_nonneg_diag(&reflected);
        let step = &y - &x;
        residual = step.hs_norm();
        z = &z + &step;
        if residual <= cfg.tol {
            converged = true;
            break;
        }
        if iterations % 64 == 0 {
            let value = trace_norm(&(target - &y))?;
            if value < best.0 {
                best = (value, y.clone());
            }
        }
    }

    let last_value = trace_norm(&(target - &y))?;
    let (value, d) = if converged || last_value <= best.0 {
        (last_value, y)
    } else {
        best
    };
    let (_, d) = shrink_along_ray(target, d, value)?;

    let diag: Vec<f64> = d.diagonal().iter().map(|z| z.re).collect();
    let lambda: f64 = diag.iter().sum();
    let degenerate_lambda = lambda <= DEGENERATE_LAMBDA;
    let delta = if degenerate_lambda {
        IncoherentState::uniform(rho.dim())
    } else {
        IncoherentState::from_weights(&diag)?
    };
    // evaluate at the normalized pair so the certificate is exact
    let lambda = if degenerate_lambda { 0.0 } else { lambda };
    let value = trace_norm(&(target - &delta.to_matrix().scale(lambda)))?;

    Ok(SolverResult {
        value,
        lambda,
        delta,
        iterations,
        residual,
        converged,
        degenerate_lambda,
    })
}

/// Smallest `s in [0, 1]` with `||rho - s D||_tr <= value + RAY_SLACK`; the
/// objective is convex in `s`, so the sublevel set is an interval.
fn shrink_along_ray(
    target: &ComplexMatrix,
    d: ComplexMatrix,
    value: f64,
) -> Result<(f64, ComplexMatrix)> {
    let level = value + RAY_SLACK;
    let objective = |s: f64| trace_norm(&(target - &d.scale(s)));
    let at_zero = objective(0.0)?;
    if at_zero <= level {
        return Ok((at_zero, ComplexMatrix::zeros(d.dim())));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if objective(mid)? <= level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi == 1.0 {
        return Ok((value, d));
    }
    Ok((objective(hi)?, d.scale(hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::measures::{c_l1, c_tr_qubit, hs_bound};
    use crate::states::{from_bloch, max_coherent, mcms, random_density, BlochVector};

    fn solve(rho: &DensityMatrix) -> SolverResult {
        c_tr_modified(rho, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn prox_examples() {
        let v = ComplexMatrix::from_diagonal(&[3.0, -1.0]);
        let out = prox_trace_norm(&v, 1.0).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::from_diagonal(&[2.0, 0.0])) < 1e-15);

        let rho = random_density(4, 4, 3).unwrap();
        let out = prox_trace_norm(rho.matrix(), 1.0).unwrap();
        assert!(out.hs_norm() < 1e-15);

        let v = random_density(3, 2, 4).unwrap().matrix().scale(-2.0);
        let out = prox_trace_norm(&v, 1e-15).unwrap();
        assert!(out.max_abs_diff(&v) < 1e-12);
    }

    #[test]
    fn projection_examples() {
        let v = ComplexMatrix::from_row_major(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 5.0),
            Complex64::new(0.0, -5.0),
            Complex64::new(-2.0, 0.0),
        ])
        .unwrap();
        assert_eq!(project_nonneg_diag(&v), ComplexMatrix::from_diagonal(&[1.0, 0.0]));
        let d = ComplexMatrix::from_diagonal(&[0.3, 0.0, 2.0]);
        assert_eq!(project_nonneg_diag(&d), d);
        assert_eq!(project_nonneg_diag(&ComplexMatrix::zeros(2)), ComplexMatrix::zeros(2));
    }

    #[test]
    fn qubit_with_named_optimizer() {
        let rho = from_bloch(BlochVector::new(0.6, 0.0, 0.3)).unwrap();
        let res = solve(&rho);
        assert!(res.converged);
        assert!((res.value - 0.6).abs() < 1e-9);
        assert!((res.lambda - 1.0).abs() < 1e-6);
        assert!((res.delta.probs()[0] - 0.65).abs() < 1e-6);
        assert!(res.certificate_gap(&rho).unwrap() <= 5.0 * 1e-9);
    }

    #[test]
    fn mcms_with_named_optimizer() {
        let rho = mcms(4, 0.7).unwrap();
        let res = solve(&rho);
        assert!((res.value - 0.7).abs() < 1e-6, "{res:?}");
        assert!((res.lambda - 0.3).abs() < 1e-5, "{res:?}");
        for x in res.delta.probs() {
            assert!((x - 0.25).abs() < 1e-5);
        }
    }

    #[test]
    fn diagonal_state_is_its_own_optimizer() {
        let x = IncoherentState::new(vec![0.2, 0.5, 0.3]).unwrap();
        let rho = DensityMatrix::incoherent(&x);
        let res = solve(&rho);
        assert!(res.value.abs() < 1e-12);
        assert!((res.lambda - 1.0).abs() < 1e-12);
        assert_eq!(res.iterations, 1);
    }

    #[test]
    fn max_coherent_has_zero_multiplier() {
        for d in [2, 3, 5] {
            let res = solve(&max_coherent(d).unwrap());
            assert!((res.value - 1.0).abs() < 1e-6, "d={d} {res:?}");
            assert!(res.lambda < 1e-5, "d={d} {res:?}");
        }
    }

    #[test]
    fn mcms_qubit_reports_smallest_multiplier() {
        // every lambda in [1 - p, 1 + p] is optimal for d = 2
        for p in [0.1, 0.5, 0.9] {
            let res = solve(&mcms(2, p).unwrap());
            assert!((res.value - p).abs() < 1e-9);
            assert!((res.lambda - (1.0 - p)).abs() < 1e-9, "p={p} {res:?}");
        }
    }

    #[test]
    fn random_qubits_match_closed_form() {
        for seed in 0..100 {
            let rho = random_density(2, 1 + (seed as usize % 2), seed).unwrap();
            let res = solve(&rho);
            let expected = c_tr_qubit(&rho).unwrap();
            assert!((res.value - expected).abs() <= 1e-6, "seed {seed}: {res:?} vs {expected}");
        }
    }

    #[test]
    fn random_states_sandwiched() {
        for seed in 0..40 {
            let d = 2 + (seed as usize % 4);
            let rho = random_density(d, 1 + (seed as usize % d), 1000 + seed).unwrap();
            let res = solve(&rho);
            let lower = hs_bound(&rho).unwrap().value;
            assert!(lower - 1e-6 <= res.value, "seed {seed}: {lower} > {}", res.value);
            assert!(res.value <= c_l1(&rho) + 1e-6);
            assert!(res.value <= 1.0 + 1e-9);
            assert!(res.certificate_gap(&rho).unwrap() <= 5.0 * 1e-9);
        }
    }

    #[test]
    fn unconverged_run_still_certified() {
        let rho = random_density(4, 4, 17).unwrap();
        let cfg = SolverConfig {
            max_iter: 3,
            ..Default::default()
        };
        let res = c_tr_modified(&rho, &cfg).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iterations, 3);
        assert!(res.certificate_gap(&rho).unwrap() < 1e-12);
        assert!(res.value <= c_l1(&rho) + 1e-12);
    }

    #[test]
    fn invariant_under_diagonal_unitaries() {
        for seed in 0..10 {
            let rho = random_density(3, 3, 500 + seed).unwrap();
            let phases = [0.3, -1.1, 2.0 + seed as f64];
            let mut u = ComplexMatrix::zeros(3);
            for (i, ph) in phases.iter().enumerate() {
                u[(i, i)] = Complex64::from_polar(1.0, *ph);
            }
            let rotated = rho.unitary_conjugate(&u).unwrap();
            let a = solve(&rho).value;
            let b = solve(&rotated).value;
            assert!((a - b).abs() <= 1e-8, "seed {seed}: {a} vs {b}");
        }
    }
}
