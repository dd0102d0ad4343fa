//! Quantum coherence and mixedness measures for finite-dimensional density
//! matrices.
//!
//! The centerpiece is the modified trace distance measure
//! `min_{lambda >= 0, delta incoherent} ||rho - lambda delta||_tr`, computed in
//! general dimension by Douglas-Rachford splitting ([`solver::c_tr_modified`])
//! and in closed form for qubits and maximally coherent mixed states
//! ([`measures`]). Alongside it: the l1-norm, relative-entropy and geometric
//! measures, two mixedness measures, incoherent Kraus channels with axiom
//! audits, and brute-force grid oracles for small dimensions.
//!
//! The incoherent basis is the computational basis throughout.

pub mod channels;
pub mod error;
pub mod matrix;
pub mod measures;
pub mod solver;
pub mod spectral;
pub mod states;

pub use channels::{random_incoherent_channel, AuditRecord, KrausChannel};
pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use measures::{Measure, MeasureReport, Method};
pub use solver::{SolverConfig, SolverResult};
pub use spectral::HermitianEigen;
pub use states::{BlochVector, DensityMatrix, IncoherentState};

pub use num_complex::Complex64;
