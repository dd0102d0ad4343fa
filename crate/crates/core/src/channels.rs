//! Incoherent Kraus channels and audits of the monotonicity axioms.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::measures::{evaluate, Measure, Method};
use crate::solver::{SolverConfig, SolverResult};
use crate::states::DensityMatrix;

/// Completeness tolerance `||sum_n K_n^dagger K_n - I||_F`.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Entries below this modulus count as structural zeros.
const ZERO_ENTRY: f64 = 1e-14;
/// Outcomes with probability at or below this are skipped in strong-monotonicity audits.
pub const OUTCOME_CUTOFF: f64 = 1e-12;

/// Audit tolerance for closed-form measures.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Audit tolerance for solver- and optimizer-based measures.
pub const SOLVER_TOL: f64 = 1e-5;

/// A trace-preserving channel `rho -> sum_n K_n rho K_n^dagger`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
    dim: usize,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = kraus
            .first()
            .map(ComplexMatrix::dim)
            .ok_or_else(|| Error::BadParameter("channel needs at least one Kraus operator".into()))?;
        if let Some(k) = kraus.iter().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: k.dim(),
            });
        }
        let ch = Self { kraus, dim };
        let residual = ch.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(dim)],
            dim,
        }
    }

    /// Kraus operators `|i><i|`.
    pub fn full_dephasing(dim: usize) -> Self {
        let kraus = (0..dim)
            .map(|i| {
                let mut k = ComplexMatrix::zeros(dim);
                k[(i, i)] = Complex64::new(1.0, 0.0);
                k
            })
            .collect();
        Self { kraus, dim }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn completeness_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim);
        for k in &self.kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        (&sum - &ComplexMatrix::identity(self.dim)).hs_norm()
    }

    /// Every Kraus operator has at most one nonzero entry per column, i.e.
    /// maps each basis state to a multiple of a basis state.
    pub fn is_incoherent(&self) -> bool {
        self.kraus.iter().all(|k| {
            (0..self.dim).all(|j| (0..self.dim).filter(|&i| k[(i, j)].norm() > ZERO_ENTRY).count() <= 1)
        })
    }

    /// `K_n rho K_n^dagger` for each `n`, unnormalized.
    pub fn branches(&self, rho: &DensityMatrix) -> Result<Vec<ComplexMatrix>> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rho.dim(),
            });
        }
        Ok(self.kraus.iter().map(|k| rho.matrix().conjugate_by(k)).collect())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let mut out = ComplexMatrix::zeros(self.dim);
        for branch in self.branches(rho)? {
            out = &out + &branch;
        }
        DensityMatrix::new(out)
    }
}

/// Random incoherent channel with `n_kraus` operators.
///
/// For each Kraus index `n` a random permutation `f_n` fixes the row of the
/// single nonzero entry in every column `j`; the amplitudes `(a_{n,j})_n` of
/// each column form a uniformly random unit vector in `C^{n_kraus}`. Then
/// `K_n^dagger K_n = diag(|a_{n,j}|^2)` and completeness holds exactly.
pub fn random_incoherent_channel(d: usize, n_kraus: usize, seed: u64) -> Result<KrausChannel> {
    if d < 2 {
        return Err(Error::BadParameter(format!("channel dimension {d} < 2")));
    }
    if n_kraus < 1 {
        return Err(Error::BadParameter("n_kraus must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let targets: Vec<Vec<usize>> = (0..n_kraus)
        .map(|_| {
            let mut perm: Vec<usize> = (0..d).collect();
            perm.shuffle(&mut rng);
            perm
        })
        .collect();
    let mut kraus = vec![ComplexMatrix::zeros(d); n_kraus];
    for j in 0..d {
        let amps: Vec<Complex64> = (0..n_kraus)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for (n, a) in amps.iter().enumerate() {
            kraus[n][(targets[n][j], j)] = a / norm;
        }
    }
    KrausChannel::new(kraus)
}

/// Outcome of one monotonicity check.
#[derive(Debug, Clone)]
pub struct AuditRecord {
    pub measure: Measure,
    /// `C(rho)`.
    pub before: f64,
    /// `C(Lambda(rho))`, or `sum_n p_n C(rho_n)` for strong monotonicity.
    pub after: f64,
    /// `before - after`; negative values are violations.
    pub slack: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Solver outputs behind `before` and `after` when the measure is solver-based.
    pub certificates: Vec<SolverResult>,
}

fn audit_tolerance(measure: Measure) -> f64 {
    match measure.method() {
        Method::ClosedForm => CLOSED_FORM_TOL,
        Method::Solver | Method::Optimizer => SOLVER_TOL,
    }
}

fn check_auditable(measure: Measure, ch: &KrausChannel) -> Result<()> {
    if !ch.is_incoherent() {
        return Err(Error::NotIncoherent);
    }
    if !measure.is_coherence() {
        return Err(Error::BadParameter(format!("{measure} is not a coherence measure")));
    }
    Ok(())
}

fn record(measure: Measure, before: f64, after: f64, certificates: Vec<SolverResult>) -> AuditRecord {
    let tolerance = audit_tolerance(measure);
    let slack = before - after;
    AuditRecord {
        measure,
        before,
        after,
        slack,
        tolerance,
        passed: slack >= -tolerance,
        certificates,
    }
}

/// Checks `C(Lambda(rho)) <= C(rho)`.
pub fn monotonicity_audit(
    measure: Measure,
    rho: &DensityMatrix,
    ch: &KrausChannel,
    cfg: &SolverConfig,
) -> Result<AuditRecord> {
    check_auditable(measure, ch)?;
    let before = evaluate(measure, rho, cfg)?;
    let after = evaluate(measure, &ch.apply(rho)?, cfg)?;
    let certificates = [before.solver.clone(), after.solver.clone()].into_iter().flatten().collect();
    Ok(record(measure, before.value, after.value, certificates))
}

/// Checks `sum_n p_n C(rho_n) <= C(rho)` with `p_n = Tr(K_n rho K_n^dagger)`
/// and `rho_n = K_n rho K_n^dagger / p_n`.
pub fn strong_monotonicity_audit(
    measure: Measure,
    rho: &DensityMatrix,
    ch: &KrausChannel,
    cfg: &SolverConfig,
) -> Result<AuditRecord> {
    check_auditable(measure, ch)?;
    let before = evaluate(measure, rho, cfg)?;
    let mut certificates: Vec<SolverResult> = before.solver.clone().into_iter().collect();
    let mut average = 0.0;
    for branch in ch.branches(rho)? {
        let p = branch.trace().re;
        if p <= OUTCOME_CUTOFF {
            continue;
        }
        let post = DensityMatrix::new(branch.scale(1.0 / p))?;
        let value = evaluate(measure, &post, cfg)?;
        average += p * value.value;
        certificates.extend(value.solver);
    }
    Ok(record(measure, before.value, average, certificates))
}
