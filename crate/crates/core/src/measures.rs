//! Coherence and mixedness functionals with closed forms.
//!
//! Solver-backed quantities (the modified trace measure in general dimension
//! and the geometric measure) live in [`crate::solver`]; [`evaluate`] dispatches
//! across both.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::solver::{self, SolverConfig, SolverResult};
use crate::spectral::{matrix_sqrt, shannon_entropy, trace_norm, vn_entropy};
use crate::states::{dephase, to_bloch, DensityMatrix, IncoherentState};

/// l1-norm of coherence: sum of off-diagonal moduli.
pub fn c_l1(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let diag: f64 = m.diagonal().iter().map(|z| z.norm()).sum();
    (m.l1_entrywise() - diag).max(0.0)
}

/// Relative entropy of coherence `S(dephased rho) - S(rho)`, in nats.
pub fn c_r(rho: &DensityMatrix) -> Result<f64> {
    let dephased = shannon_entropy(dephase(rho).probs());
    Ok((dephased - vn_entropy(rho)?).max(0.0))
}

/// Modified trace measure of a qubit: the transverse Bloch length `sqrt(r1^2 + r2^2)`.
pub fn c_tr_qubit(rho: &DensityMatrix) -> Result<f64> {
    Ok(to_bloch(rho)?.transverse_norm())
}

/// A value together with the minimizing pair `(lambda, delta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormOptimum {
    pub value: f64,
    pub lambda: f64,
    pub delta: IncoherentState,
}

/// Modified trace measure of `mcms(d, p)`: equal to `p`, attained at
/// `lambda = 1 - p` with uniform `delta`.
pub fn c_tr_mcms(d: usize, p: f64) -> Result<ClosedFormOptimum> {
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::BadParameter(format!("mixing weight p = {p} not in (0, 1]")));
    }
    Ok(ClosedFormOptimum {
        value: p,
        lambda: 1.0 - p,
        delta: IncoherentState::uniform(d),
    })
}

fn require_nontrivial(rho: &DensityMatrix) -> Result<f64> {
    match rho.dim() {
        1 => Err(Error::WrongDimension {
            expected: ">= 2",
            actual: 1,
        }),
        d => Ok(d as f64),
    }
}

/// Normalized linear entropy `d/(d-1) (1 - Tr rho^2)`.
pub fn m_l(rho: &DensityMatrix) -> Result<f64> {
    let d = require_nontrivial(rho)?;
    Ok((d / (d - 1.0) * (1.0 - rho.purity())).max(0.0))
}

/// Trace-norm mixedness `1 - d/(2(d-1)) ||rho - I/d||_tr`.
pub fn m_tr(rho: &DensityMatrix) -> Result<f64> {
    let d = require_nontrivial(rho)?;
    let shifted = rho.matrix() - &ComplexMatrix::identity(rho.dim()).scale(1.0 / d);
    let value = 1.0 - d / (2.0 * (d - 1.0)) * trace_norm(&shifted)?;
    Ok(if (-1e-10..0.0).contains(&value) { 0.0 } else { value })
}

/// `1 - sum_i b_ii^2` with `b = sqrt(rho)`, and the pair
/// `lambda = sum_i b_ii^2`, `x_i = b_ii^2 / lambda` at which the
/// Hilbert-Schmidt relaxation of the modified trace problem is tight.
///
/// The value lower-bounds the modified trace measure and upper-bounds the
/// geometric measure.
pub fn hs_bound(rho: &DensityMatrix) -> Result<ClosedFormOptimum> {
    let root = matrix_sqrt(rho.matrix())?;
    let squares: Vec<f64> = root.diagonal().iter().map(|z| z.re * z.re).collect();
    let lambda: f64 = squares.iter().sum();
    Ok(ClosedFormOptimum {
        value: (1.0 - lambda).clamp(0.0, 1.0),
        lambda,
        delta: IncoherentState::from_weights(&squares)?,
    })
}

/// Every functional the toolkit can evaluate on a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    L1,
    RelativeEntropy,
    ModifiedTrace,
    Geometric,
    LinearMixedness,
    TraceMixedness,
    HsBound,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::L1,
        Measure::RelativeEntropy,
        Measure::ModifiedTrace,
        Measure::Geometric,
        Measure::LinearMixedness,
        Measure::TraceMixedness,
        Measure::HsBound,
    ];

    /// Report key, e.g. `c_tr_mod`.
    pub fn key(self) -> &'static str {
        match self {
            Measure::L1 => "c_l1",
            Measure::RelativeEntropy => "c_r",
            Measure::ModifiedTrace => "c_tr_mod",
            Measure::Geometric => "c_g",
            Measure::LinearMixedness => "m_l",
            Measure::TraceMixedness => "m_tr",
            Measure::HsBound => "hs_bound",
        }
    }

    pub fn method(self) -> Method {
        match self {
            Measure::ModifiedTrace => Method::Solver,
            Measure::Geometric => Method::Optimizer,
            _ => Method::ClosedForm,
        }
    }

    /// Whether the quantity is a coherence monotone (as opposed to mixedness
    /// or a bound).
    pub fn is_coherence(self) -> bool {
        matches!(
            self,
            Measure::L1 | Measure::RelativeEntropy | Measure::ModifiedTrace | Measure::Geometric
        )
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "l1" | "c_l1" => Measure::L1,
            "rel-entropy" | "relative-entropy" | "c_r" => Measure::RelativeEntropy,
            "mod-trace" | "modified-trace" | "c_tr_mod" => Measure::ModifiedTrace,
            "geometric" | "c_g" => Measure::Geometric,
            "m-l" | "linear-mixedness" | "m_l" => Measure::LinearMixedness,
            "m-tr" | "trace-mixedness" | "m_tr" => Measure::TraceMixedness,
            "hs-bound" | "hs_bound" => Measure::HsBound,
            other => return Err(Error::BadParameter(format!("unknown measure `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Solver,
    Optimizer,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::Solver => "solver",
            Method::Optimizer => "optimizer",
        })
    }
}

/// One evaluated quantity.
#[derive(Debug, Clone)]
pub struct MeasureValue {
    pub measure: Measure,
    pub value: f64,
    pub method: Method,
    pub iterations: usize,
    pub converged: bool,
    /// Full solver output for the modified trace measure.
    pub solver: Option<SolverResult>,
}

/// Evaluates a single measure on `rho`.
pub fn evaluate(measure: Measure, rho: &DensityMatrix, cfg: &SolverConfig) -> Result<MeasureValue> {
    let closed = |value: f64| MeasureValue {
        measure,
        value,
        method: Method::ClosedForm,
        iterations: 0,
        converged: true,
        solver: None,
    };
    Ok(match measure {
        Measure::L1 => closed(c_l1(rho)),
        Measure::RelativeEntropy => closed(c_r(rho)?),
        Measure::LinearMixedness => closed(m_l(rho)?),
        Measure::TraceMixedness => closed(m_tr(rho)?),
        Measure::HsBound => closed(hs_bound(rho)?.value),
        Measure::ModifiedTrace => {
            let res = solver::c_tr_modified(rho, cfg)?;
            MeasureValue {
                measure,
                value: res.value,
                method: Method::Solver,
                iterations: res.iterations,
                converged: res.converged,
                solver: Some(res),
            }
        }
        Measure::Geometric => {
            let res = solver::c_g_detailed(rho, cfg)?;
            MeasureValue {
                measure,
                value: res.value,
                method: Method::Optimizer,
                iterations: res.iterations,
                converged: res.converged,
                solver: None,
            }
        }
    })
}

/// The named quantities evaluated on one state; absent entries were not requested.
#[derive(Debug, Clone, Default)]
pub struct MeasureReport {
    pub c_l1: Option<MeasureValue>,
    pub c_r: Option<MeasureValue>,
    pub c_tr_mod: Option<MeasureValue>,
    pub c_g: Option<MeasureValue>,
    pub m_l: Option<MeasureValue>,
    pub m_tr: Option<MeasureValue>,
    pub hs_bound: Option<MeasureValue>,
}

impl MeasureReport {
    pub fn compute(rho: &DensityMatrix, measures: &[Measure], cfg: &SolverConfig) -> Result<Self> {
        let mut report = Self::default();
        for &m in measures {
            *report.slot(m) = Some(evaluate(m, rho, cfg)?);
        }
        Ok(report)
    }

    fn slot(&mut self, m: Measure) -> &mut Option<MeasureValue> {
        match m {
            Measure::L1 => &mut self.c_l1,
            Measure::RelativeEntropy => &mut self.c_r,
            Measure::ModifiedTrace => &mut self.c_tr_mod,
            Measure::Geometric => &mut self.c_g,
            Measure::LinearMixedness => &mut self.m_l,
            Measure::TraceMixedness => &mut self.m_tr,
            Measure::HsBound => &mut self.hs_bound,
        }
    }

    /// Present entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = &MeasureValue> {
        [
            &self.c_l1,
            &self.c_r,
            &self.c_tr_mod,
            &self.c_g,
            &self.m_l,
            &self.m_tr,
            &self.hs_bound,
        ]
        .into_iter()
        .flatten()
    }

    /// Checks nonnegativity and, when all three are present, the ordering
    /// `c_g <= c_tr_mod <= c_l1` at slacks 1e-4 and 1e-6.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for e in self.entries() {
            if e.value < -1e-9 {
                return Err(format!("{} is negative: {}", e.measure, e.value));
            }
        }
        if let (Some(g), Some(t), Some(l)) = (&self.c_g, &self.c_tr_mod, &self.c_l1) {
            if t.value > l.value + 1e-6 {
                return Err(format!("c_tr_mod {} exceeds c_l1 {}", t.value, l.value));
            }
            if g.value > t.value + 1e-4 {
                return Err(format!("c_g {} exceeds c_tr_mod {}", g.value, t.value));
            }
        }
        Ok(())
    }
}
