//! Spectral primitives for Hermitian matrices: cyclic Jacobi diagonalization and
//! the matrix functions built on it (trace norm, square root, fidelity, entropy).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::states::DensityMatrix;

/// Maximum number of full Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Relative off-diagonal Frobenius mass at which the iteration stops.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero by `sqrt` and `entropy`.
pub const PSD_TOL: f64 = 1e-10;

/// Eigendecomposition `A = V diag(values) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns are the orthonormal eigenvectors, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    /// Rebuilds `V diag(f(values)) V^dagger`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    if fv[k] != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * fv[k];
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|v| v)
    }

    /// Eigenvalues indistinguishable from zero at working precision:
    /// `|v| <= d * eps * max|values|`.
    pub fn noise_floor(&self) -> f64 {
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.values.len() as f64 * f64::EPSILON * scale
    }
}

fn clamped_sqrt(v: f64, floor: f64) -> f64 {
    if v <= floor {
        0.0
    } else {
        v.sqrt()
    }
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then annihilates it with a real Givens rotation.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let mut a = a.to_hermitian()?;
    let n = a.dim();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.hs_norm();
    let threshold = OFF_DIAGONAL_TOL * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && a.off_diagonal_norm() > threshold {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim();
    let g = a[(p, q)];
    let mag = g.norm();
    if mag == 0.0 {
        return;
    }

    // Phase: A <- P^dagger A P with P = diag(.., e^{-i phi} at q, ..).
    let phase = g / mag;
    let to_real = phase.conj();
    for k in 0..n {
        a[(k, q)] *= to_real;
        v[(k, q)] *= to_real;
    }
    for k in 0..n {
        a[(q, k)] *= phase;
    }

    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s;
        a[(k, q)] = akp * s + akq * c;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s + aqk * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * mag, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian(a)?.values)
}

/// Schatten-1 norm of a Hermitian matrix: the sum of absolute eigenvalues.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|v| v.abs()).sum())
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn matrix_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(a)?;
    let min = eig.min_value();
    if min < -PSD_TOL {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let floor = eig.noise_floor();
    Ok(eig.map(|v| clamped_sqrt(v, floor)))
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let root = matrix_sqrt(sigma.matrix())?;
    let inner = (&(&root * rho.matrix()) * &root).hermitian_part();
    sqrt_trace_squared(&inner)
}

/// Fidelity between `rho` and the diagonal operator `diag(weights)`.
///
/// `weights` need not be normalized; negative entries are treated as zero.
pub fn fidelity_with_diagonal(rho: &ComplexMatrix, weights: &[f64]) -> Result<f64> {
    if rho.dim() != weights.len() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: weights.len(),
        });
    }
    let roots: Vec<f64> = weights.iter().map(|w| w.max(0.0).sqrt()).collect();
    let inner = ComplexMatrix::from_fn(rho.dim(), |i, j| rho[(i, j)] * (roots[i] * roots[j]));
    sqrt_trace_squared(&inner)
}

fn sqrt_trace_squared(m: &ComplexMatrix) -> Result<f64> {
    let eig = eig_hermitian(m)?;
    let floor = eig.noise_floor();
    let root_trace: f64 = eig.values.iter().map(|&v| clamped_sqrt(v, floor)).sum();
    Ok(root_trace * root_trace)
}

/// Von Neumann entropy in nats, with `0 ln 0 = 0`.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(shannon_entropy(&eigenvalues(rho.matrix())?))
}

/// Shannon entropy in nats of a (sub)probability vector; tiny negatives count as zero.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum::<f64>()
        .max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pauli;
    use crate::states::{from_bloch, max_coherent, mcms, random_density, BlochVector};

    fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = ComplexMatrix::from_fn(dim, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        g.hermitian_part()
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let eig = eig_hermitian(&ComplexMatrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let eig = eig_hermitian(&pauli()[0]).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-15);
        assert!((eig.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        for seed in 0..20 {
            let a = random_hermitian(5, seed);
            let eig = eig_hermitian(&a).unwrap();
            let err = (&a - &eig.reconstruct()).hs_norm();
            assert!(err <= 1e-10 * a.hs_norm().max(1.0), "seed {seed}: {err:e}");
            let v = &eig.vectors;
            let gram = &v.adjoint() * v;
            assert!((&gram - &ComplexMatrix::identity(5)).hs_norm() <= 1e-10);
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn zero_and_scalar_matrices() {
        let eig = eig_hermitian(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(eig.values, vec![0.0; 3]);
        let eig = eig_hermitian(&ComplexMatrix::identity(4).scale(2.5)).unwrap();
        assert!(eig.values.iter().all(|v| (v - 2.5).abs() < 1e-15));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
        assert!(matches!(trace_norm(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn symmetrizes_within_tolerance() {
        let mut m = pauli()[0].clone();
        m[(0, 1)] += Complex64::new(5e-13, 0.0);
        let eig = eig_hermitian(&m).unwrap();
        assert!((eig.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&pauli()[0]).unwrap() - 2.0).abs() < 1e-15);
        assert!((trace_norm(&ComplexMatrix::from_diagonal(&[3.0, -4.0])).unwrap() - 7.0).abs() < 1e-15);
        let pure = from_bloch(BlochVector::new(0.6, 0.0, 0.8)).unwrap();
        let shifted = pure.matrix() - &ComplexMatrix::identity(2).scale(0.5);
        assert!((trace_norm(&shifted).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_two_by_two_identity() {
        // ||A||_tr^2 = Tr(A^2) + 2|det A| for 2x2 Hermitian A.
        for seed in 0..50 {
            let a = random_hermitian(2, 100 + seed);
            let tn = trace_norm(&a).unwrap();
            let tr_sq = (&a * &a).trace().re;
            let det = a.determinant().norm();
            assert!((tn - (tr_sq + 2.0 * det).sqrt()).abs() <= 1e-10);
        }
    }

    #[test]
    fn sqrt_examples() {
        let r = matrix_sqrt(&ComplexMatrix::from_diagonal(&[4.0, 9.0])).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_diagonal(&[2.0, 3.0])) < 1e-14);

        let plus = max_coherent(2).unwrap();
        let r = matrix_sqrt(plus.matrix()).unwrap();
        assert!(r.max_abs_diff(plus.matrix()) < 1e-12);

        let rho = random_density(4, 4, 5).unwrap();
        let b = matrix_sqrt(rho.matrix()).unwrap();
        assert!((&(&b * &b) - rho.matrix()).hs_norm() <= 1e-9);
        assert!(eig_hermitian(&b).unwrap().min_value() >= -1e-12);
    }

    #[test]
    fn sqrt_rejects_negative() {
        let m = ComplexMatrix::from_diagonal(&[1.0, -1e-6]);
        assert!(matches!(matrix_sqrt(&m), Err(Error::NotPsd { .. })));
        // clamped within tolerance
        let m = ComplexMatrix::from_diagonal(&[1.0, -1e-11]);
        assert!(matrix_sqrt(&m).is_ok());
    }

    #[test]
    fn fidelity_examples() {
        let rho = random_density(3, 3, 2).unwrap();
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-10);

        let p = [0.2, 0.3, 0.5];
        let q = [0.6, 0.1, 0.3];
        let fp = DensityMatrix::new(ComplexMatrix::from_diagonal(&p)).unwrap();
        let fq = DensityMatrix::new(ComplexMatrix::from_diagonal(&q)).unwrap();
        let bhatt: f64 = p.iter().zip(&q).map(|(a, b)| (a * b).sqrt()).sum();
        assert!((fidelity(&fp, &fq).unwrap() - bhatt * bhatt).abs() < 1e-12);

        let zero = from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let mixed = from_bloch(BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        assert!((fidelity(&zero, &mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let a = max_coherent(2).unwrap();
        let b = max_coherent(3).unwrap();
        assert!(matches!(fidelity(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn fidelity_with_diagonal_agrees_with_general() {
        let rho = random_density(3, 2, 9).unwrap();
        let x = [0.5, 0.25, 0.25];
        let sigma = DensityMatrix::new(ComplexMatrix::from_diagonal(&x)).unwrap();
        let a = fidelity(&rho, &sigma).unwrap();
        let b = fidelity_with_diagonal(rho.matrix(), &x).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn entropy_examples() {
        let pure = max_coherent(4).unwrap();
        assert!(vn_entropy(&pure).unwrap().abs() < 1e-12);
        for d in 2..6 {
            let mixed = DensityMatrix::maximally_mixed(d);
            assert!((vn_entropy(&mixed).unwrap() - (d as f64).ln()).abs() < 1e-12);
        }
        // eigenvalues (p + (1-p)/3, (1-p)/3, (1-p)/3)
        let p: f64 = 0.96151;
        let big = p + (1.0 - p) / 3.0;
        let small = (1.0 - p) / 3.0;
        let oracle = -big * big.ln() - 2.0 * small * small.ln();
        let s = vn_entropy(&mcms(3, p).unwrap()).unwrap();
        assert!((s - oracle).abs() < 1e-12);
        assert!((s - 0.137104).abs() < 1e-5, "{s}");
    }
}
