//! State families: Bloch qubits, maximally coherent (mixed) states, shift
//! unitaries, incoherent states and seeded random density matrices.
//!
//! The incoherent basis is always the computational basis `{|0>, .., |d-1>}`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{pauli, ComplexMatrix, HERMITIAN_TOL};
use crate::spectral::{eig_hermitian, PSD_TOL};

/// Trace tolerance for [`DensityMatrix`].
pub const TRACE_TOL: f64 = 1e-10;

/// Normalization tolerance for [`IncoherentState`].
pub const PROB_TOL: f64 = 1e-12;

/// Deterministic generator for a `(seed, stream)` pair.
///
/// ChaCha8 streams give independent sequences for the same seed, which is how
/// per-item and per-restart generators are split from a base seed.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A validated density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates at the library tolerances (Hermitian 1e-12, trace 1e-10,
    /// eigenvalues >= -1e-10) and stores the symmetrized matrix.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let matrix = matrix.to_hermitian()?;
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let min = eig_hermitian(&matrix)?.min_value();
        if min < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(Self { matrix })
    }

    /// Validates every invariant at a single looser tolerance, then projects
    /// the matrix onto the state space (symmetrize, clip negative eigenvalues,
    /// renormalize). Used at I/O boundaries.
    pub fn new_with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > tol.max(HERMITIAN_TOL) {
            return Err(Error::NotHermitian { deviation });
        }
        let herm = matrix.hermitian_part();
        let trace = herm.trace().re;
        if (trace - 1.0).abs() > tol.max(TRACE_TOL) {
            return Err(Error::TraceNotOne { trace });
        }
        let eig = eig_hermitian(&herm)?;
        let min = eig.min_value();
        if min < -tol.max(PSD_TOL) {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        let clipped = eig.map(|v| v.max(0.0));
        let total = clipped.trace().re;
        Self::new(clipped.scale(1.0 / total))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// Diagonal state `sum_i p_i |i><i|`.
    pub fn incoherent(state: &IncoherentState) -> Self {
        Self {
            matrix: state.to_matrix(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.matrix.off_diagonal_norm() <= tol
    }

    /// `U rho U^dagger` for a unitary `U`.
    pub fn unitary_conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(self.matrix.conjugate_by(u))
    }
}

/// Real Bloch vector of a qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl BlochVector {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Self {
        Self { r1, r2, r3 }
    }

    pub fn norm(&self) -> f64 {
        (self.r1 * self.r1 + self.r2 * self.r2 + self.r3 * self.r3).sqrt()
    }

    /// Length of the projection on the r1-r2 plane.
    pub fn transverse_norm(&self) -> f64 {
        self.r1.hypot(self.r2)
    }
}

/// A diagonal state given by its probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct IncoherentState {
    probs: Vec<f64>,
}

impl IncoherentState {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::BadProbabilities("empty".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0)) {
            return Err(Error::BadProbabilities(format!("negative entry {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::BadProbabilities(format!("sum {total}")));
        }
        Ok(Self { probs })
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let clipped: Vec<f64> = weights.iter().map(|w| w.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::BadProbabilities(format!("weights sum to {total}")));
        }
        Self::new(clipped.iter().map(|w| w / total).collect())
    }

    pub fn uniform(dim: usize) -> Self {
        Self {
            probs: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&self.probs)
    }
}

/// `rho = (I + r . sigma) / 2`.
pub fn from_bloch(r: BlochVector) -> Result<DensityMatrix> {
    let norm = r.norm();
    if norm > 1.0 + 1e-12 {
        return Err(Error::BlochOutOfBall { norm });
    }
    let m = ComplexMatrix::from_row_major(vec![
        Complex64::new((1.0 + r.r3) / 2.0, 0.0),
        Complex64::new(r.r1 / 2.0, -r.r2 / 2.0),
        Complex64::new(r.r1 / 2.0, r.r2 / 2.0),
        Complex64::new((1.0 - r.r3) / 2.0, 0.0),
    ])?;
    Ok(DensityMatrix { matrix: m })
}

/// `r_k = Tr(rho sigma_k)`.
pub fn to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: "2",
            actual: rho.dim(),
        });
    }
    let [sx, sy, sz] = pauli();
    let m = rho.matrix();
    Ok(BlochVector::new(
        (m * &sx).trace().re,
        (m * &sy).trace().re,
        (m * &sz).trace().re,
    ))
}

/// `|phi_d><phi_d|` with `|phi_d> = d^{-1/2} sum_i |i>`.
pub fn max_coherent(d: usize) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    let entry = Complex64::new(1.0 / d as f64, 0.0);
    Ok(DensityMatrix {
        matrix: ComplexMatrix::from_fn(d, |_, _| entry),
    })
}

/// Maximally coherent mixed state `p |phi_d><phi_d| + (1 - p) I / d`, `0 < p <= 1`.
pub fn mcms(d: usize, p: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::BadParameter(format!("mixing weight p = {p} not in (0, 1]")));
    }
    let df = d as f64;
    let off = Complex64::new(p / df, 0.0);
    let diag = Complex64::new(1.0 / df, 0.0);
    Ok(DensityMatrix {
        matrix: ComplexMatrix::from_fn(d, |i, j| if i == j { diag } else { off }),
    })
}

/// Cyclic shift `U_n = sum_k |k + n mod d><k|`.
pub fn shift_unitary(d: usize, n: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    if n >= d {
        return Err(Error::IndexOutOfRange { index: n, dim: d });
    }
    let mut u = ComplexMatrix::zeros(d);
    for k in 0..d {
        u[((k + n) % d, k)] = Complex64::new(1.0, 0.0);
    }
    Ok(u)
}

/// Ginibre-induced random state `G G^dagger / Tr(G G^dagger)` with `G` a
/// `d x rank` matrix of standard complex Gaussians drawn row-major from
/// ChaCha8 seeded with `seed`.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if d < 1 {
        return Err(Error::BadDimension(d));
    }
    if rank < 1 || rank > d {
        return Err(Error::BadRank { rank, dim: d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: Vec<Complex64> = (0..d * rank)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    let mut w = ComplexMatrix::zeros(d);
    for i in 0..d {
        for j in i..d {
            let z: Complex64 = (0..rank).map(|k| g[i * rank + k] * g[j * rank + k].conj()).sum();
            w[(i, j)] = z;
            w[(j, i)] = z.conj();
        }
        w[(i, i)] = Complex64::new(w[(i, i)].re, 0.0);
    }
    let trace = w.trace().re;
    DensityMatrix::new(w.scale(1.0 / trace))
}

/// Diagonal part of `rho` in the incoherent basis.
pub fn dephase(rho: &DensityMatrix) -> IncoherentState {
    let probs: Vec<f64> = rho.matrix().diagonal().iter().map(|z| z.re.max(0.0)).collect();
    let total: f64 = probs.iter().sum();
    IncoherentState {
        probs: probs.iter().map(|p| p / total).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigenvalues;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn bloch_examples() {
        let rho = from_bloch(BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(rho, DensityMatrix::maximally_mixed(2));

        let plus = from_bloch(BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        assert!(plus.matrix().max_abs_diff(max_coherent(2).unwrap().matrix()) < 1e-15);

        let pure = from_bloch(BlochVector::new(0.6, 0.0, 0.8)).unwrap();
        assert!(eigenvalues(pure.matrix()).unwrap()[0].abs() < 1e-12);

        assert!(matches!(
            from_bloch(BlochVector::new(0.8, 0.8, 0.0)),
            Err(Error::BlochOutOfBall { .. })
        ));
    }

    #[test]
    fn bloch_entries_layout() {
        let rho = from_bloch(BlochVector::new(0.2, 0.4, -0.6)).unwrap();
        let m = rho.matrix();
        assert_eq!(m[(0, 0)], c(0.2));
        assert_eq!(m[(0, 1)], Complex64::new(0.1, -0.2));
        assert_eq!(m[(1, 0)], Complex64::new(0.1, 0.2));
        assert_eq!(m[(1, 1)], c(0.8));
    }

    #[test]
    fn to_bloch_examples() {
        let r = to_bloch(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert!(r.norm() < 1e-15);
        let r = to_bloch(&max_coherent(2).unwrap()).unwrap();
        assert!((r.r1 - 1.0).abs() < 1e-15 && r.r2.abs() < 1e-15 && r.r3.abs() < 1e-15);
        assert!(matches!(
            to_bloch(&max_coherent(3).unwrap()),
            Err(Error::WrongDimension { .. })
        ));
    }

    #[test]
    fn bloch_round_trip_random() {
        for seed in 0..50 {
            let rho = random_density(2, 1 + (seed as usize % 2), seed).unwrap();
            let back = from_bloch(to_bloch(&rho).unwrap()).unwrap();
            assert!(back.matrix().max_abs_diff(rho.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn max_coherent_examples() {
        for d in 2..7 {
            let rho = max_coherent(d).unwrap();
            assert!(rho.matrix().as_slice().iter().all(|z| (z - c(1.0 / d as f64)).norm() < 1e-15));
            assert!((rho.purity() - 1.0).abs() < 1e-12);
        }
        assert!(matches!(max_coherent(1), Err(Error::BadDimension(1))));
    }

    #[test]
    fn mcms_examples() {
        let rho = mcms(3, 0.5).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0 / 3.0).abs() < 1e-15);
        assert!((rho.matrix()[(0, 2)].re - 1.0 / 6.0).abs() < 1e-15);
        assert!(mcms(2, 1.0).unwrap().matrix().max_abs_diff(max_coherent(2).unwrap().matrix()) < 1e-15);
        let top = *eigenvalues(mcms(4, 0.7).unwrap().matrix()).unwrap().last().unwrap();
        assert!((top - 0.775).abs() < 1e-12);
        assert!(mcms(3, 0.0).is_err());
        assert!(mcms(3, 1.2).is_err());
        assert!(mcms(3, f64::NAN).is_err());
    }

    #[test]
    fn mcms_spectrum() {
        let (d, p) = (5, 0.3);
        let vals = eigenvalues(mcms(d, p).unwrap().matrix()).unwrap();
        let low = (1.0 - p) / d as f64;
        for v in &vals[..d - 1] {
            assert!((v - low).abs() < 1e-12);
        }
        assert!((vals[d - 1] - (p + low)).abs() < 1e-12);
    }

    #[test]
    fn shift_unitary_examples() {
        assert_eq!(shift_unitary(4, 0).unwrap(), ComplexMatrix::identity(4));
        let u = shift_unitary(3, 1).unwrap();
        let e0 = vec![c(1.0), c(0.0), c(0.0)];
        assert_eq!(u.mul_vec(&e0), vec![c(0.0), c(1.0), c(0.0)]);
        assert!(matches!(shift_unitary(3, 3), Err(Error::IndexOutOfRange { .. })));
        for d in 2..6 {
            let phi = vec![c(1.0 / (d as f64).sqrt()); d];
            for n in 0..d {
                let u = shift_unitary(d, n).unwrap();
                assert!((&(&u * &u.adjoint()) - &ComplexMatrix::identity(d)).hs_norm() < 1e-15);
                let out = u.mul_vec(&phi);
                assert!(out.iter().zip(&phi).all(|(a, b)| (a - b).norm() < 1e-15));
            }
        }
    }

    #[test]
    fn twirling_diagonal_gives_identity() {
        let delta = IncoherentState::new(vec![0.5, 0.3, 0.2]).unwrap().to_matrix();
        let mut sum = ComplexMatrix::zeros(3);
        for n in 0..3 {
            sum = &sum + &delta.conjugate_by(&shift_unitary(3, n).unwrap());
        }
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn random_density_determinism_and_validity() {
        let a = random_density(4, 4, 7).unwrap();
        let b = random_density(4, 4, 7).unwrap();
        assert_eq!(a.matrix().as_slice(), b.matrix().as_slice());
        assert_ne!(a, random_density(4, 4, 8).unwrap());

        let rho = random_density(3, 2, 1).unwrap();
        assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
        let vals = eigenvalues(rho.matrix()).unwrap();
        assert!(vals[0].abs() < 1e-12, "rank 2 in d = 3 has a zero eigenvalue");

        for seed in 0..10 {
            let pure = random_density(2, 1, seed).unwrap();
            assert!((pure.purity() - 1.0).abs() < 1e-10);
        }
        assert!(matches!(random_density(3, 0, 1), Err(Error::BadRank { .. })));
        assert!(matches!(random_density(3, 4, 1), Err(Error::BadRank { .. })));
    }

    #[test]
    fn dephase_examples() {
        for p in [0.1, 0.5, 1.0] {
            let x = dephase(&mcms(3, p).unwrap());
            assert!(x.probs().iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
        }
        assert_eq!(dephase(&max_coherent(2).unwrap()).probs(), &[0.5, 0.5]);
        let diag = IncoherentState::new(vec![0.1, 0.6, 0.3]).unwrap();
        assert_eq!(dephase(&DensityMatrix::incoherent(&diag)).probs(), diag.probs());
    }

    #[test]
    fn density_validation_errors() {
        let m = ComplexMatrix::from_diagonal(&[0.6, 0.6]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::TraceNotOne { .. })));
        let m = ComplexMatrix::from_diagonal(&[1.2, -0.2]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPsd { .. })));
        let mut m = ComplexMatrix::from_diagonal(&[0.5, 0.5]);
        m[(0, 1)] = c(0.1);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn io_tolerance_projects_onto_states() {
        let m = ComplexMatrix::from_diagonal(&[0.5 + 5e-9, 0.5 - 1e-9]);
        assert!(DensityMatrix::new(m.clone()).is_err());
        let rho = DensityMatrix::new_with_tolerance(m, 1e-8).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14);
        let bad = ComplexMatrix::from_diagonal(&[0.6, 0.6]);
        assert!(DensityMatrix::new_with_tolerance(bad, 1e-8).is_err());
    }

    #[test]
    fn incoherent_state_validation() {
        assert!(IncoherentState::new(vec![0.5, 0.6]).is_err());
        assert!(IncoherentState::new(vec![1.1, -0.1]).is_err());
        assert!(IncoherentState::new(vec![]).is_err());
        let x = IncoherentState::from_weights(&[2.0, 6.0]).unwrap();
        assert_eq!(x.probs(), &[0.25, 0.75]);
        assert!(IncoherentState::from_weights(&[0.0, 0.0]).is_err());
    }
}
