//! Seeded verification suites for `modtrace verify`.
//!
//! Every item draws its inputs from a seed derived from `(base seed, item
//! index)`, items run in parallel, and results are reduced in index order, so
//! summaries are identical however the work is scheduled.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use modtrace_core::channels::{monotonicity_audit, strong_monotonicity_audit};
use modtrace_core::measures::{c_l1, c_tr_qubit, hs_bound, m_l, m_tr};
use modtrace_core::solver::{c_g, c_tr_modified, grid_oracle_cg, grid_oracle_ctr};
use modtrace_core::states::{from_bloch, mcms, random_density, seeded_rng, to_bloch, BlochVector};
use modtrace_core::{random_incoherent_channel, DensityMatrix, Measure, SolverConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Prop1,
    Mcms,
    Hierarchy,
    Tradeoff,
    Axioms,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Prop1,
        Suite::Mcms,
        Suite::Hierarchy,
        Suite::Tradeoff,
        Suite::Axioms,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Prop1 => "prop1",
            Suite::Mcms => "mcms",
            Suite::Hierarchy => "hierarchy",
            Suite::Tradeoff => "tradeoff",
            Suite::Axioms => "axioms",
            Suite::Oracle => "oracle",
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| CliError::Input(format!("unknown suite `{s}`")))
    }
}

/// Result of one check on one item. `slack` is the margin to the bound
/// (negative means the raw inequality is violated, possibly within tolerance).
#[derive(Debug, Clone, Copy)]
pub struct Outcome {
    pub slack: f64,
    pub passed: bool,
}

/// `|err| <= tol`.
pub fn within(err: f64, tol: f64) -> Outcome {
    Outcome {
        slack: tol - err.abs(),
        passed: err.abs() <= tol,
    }
}

/// `lhs <= rhs + tol`.
pub fn at_most(lhs: f64, rhs: f64, tol: f64) -> Outcome {
    Outcome {
        slack: rhs - lhs,
        passed: lhs <= rhs + tol,
    }
}

#[derive(Debug, Clone)]
pub struct CheckStats {
    pub name: &'static str,
    pub total: usize,
    pub passed: usize,
    pub worst_slack: f64,
    /// Item seeds of failing items.
    pub failures: Vec<u64>,
}

impl CheckStats {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            total: 0,
            passed: 0,
            worst_slack: f64::INFINITY,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, seed: u64, outcome: Outcome) {
        self.total += 1;
        self.worst_slack = self.worst_slack.min(outcome.slack);
        if outcome.passed {
            self.passed += 1;
        } else {
            self.failures.push(seed);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for CheckStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}/{} pass worst_slack={:.3e}",
            self.name, self.passed, self.total, self.worst_slack
        )?;
        if !self.failures.is_empty() {
            let seeds: Vec<String> = self.failures.iter().map(u64::to_string).collect();
            write!(f, " failing_seeds={}", seeds.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct VerifySummary {
    pub suite: Suite,
    pub checks: Vec<CheckStats>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckStats::all_passed)
    }
}

impl fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{}", check)?;
        }
        write!(
            f,
            "suite {}: {}",
            self.suite.name(),
            if self.all_passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Seed of item `index` under base seed `base`.
pub fn item_seed(base: u64, index: u64) -> u64 {
    seeded_rng(base, index).random()
}

/// Qubit with Bloch vector uniform in the unit disk of the r1-r2 plane.
pub fn random_equatorial_qubit(seed: u64) -> DensityMatrix {
    let mut rng = seeded_rng(seed, 0);
    let radius = rng.random::<f64>().sqrt();
    let angle = rng.random::<f64>() * std::f64::consts::TAU;
    from_bloch(BlochVector::new(radius * angle.cos(), radius * angle.sin(), 0.0)).expect("inside disk")
}

/// Qubit with Bloch vector uniform in the ball, conditioned on
/// `|r3| >= 0.05` and `|r| <= 0.99`.
pub fn random_tilted_qubit(seed: u64) -> DensityMatrix {
    let mut rng = seeded_rng(seed, 0);
    loop {
        let r = BlochVector::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if r.r3.abs() >= 0.05 && r.norm() <= 0.99 {
            return from_bloch(r).expect("inside ball");
        }
    }
}

type ItemResult = Result<Vec<Outcome>>;

fn run_items(
    names: &[&'static str],
    seeds: Vec<u64>,
    item: impl Fn(usize, u64) -> ItemResult + Sync,
) -> Result<Vec<CheckStats>> {
    let results: Vec<ItemResult> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| item(i, seed))
        .collect();
    let mut stats: Vec<CheckStats> = names.iter().map(|n| CheckStats::new(n)).collect();
    for (seed, result) in seeds.iter().zip(results) {
        let outcomes = result?;
        debug_assert_eq!(outcomes.len(), stats.len());
        for (s, o) in stats.iter_mut().zip(outcomes) {
            s.record(*seed, o);
        }
    }
    Ok(stats)
}

pub fn run(suite: Suite, seed: u64, count: usize, cfg: &SolverConfig) -> Result<VerifySummary> {
    if count == 0 {
        return Err(CliError::Input("count must be >= 1".into()));
    }
    let seeds = |stream: u64| -> Vec<u64> {
        (0..count as u64).map(|i| item_seed(seed ^ stream, i)).collect()
    };
    let checks = match suite {
        Suite::Prop1 => run_items(&["c_tr_mod=transverse_bloch", "c_tr_mod=c_l1"], seeds(0), |i, s| {
            let rho = random_density(2, 1 + i % 2, s)?;
            let solved = c_tr_modified(&rho, cfg)?.value;
            let transverse = to_bloch(&rho)?.transverse_norm();
            Ok(vec![within(solved - transverse, 1e-6), within(solved - c_l1(&rho), 1e-6)])
        })?,
        Suite::Mcms => {
            let grid: Vec<(usize, f64)> = (2..=10)
                .flat_map(|d| (1..=10).map(move |k| (d, k as f64 / 10.0)))
                .collect();
            let grid_seeds = (0..grid.len() as u64).collect();
            run_items(
                &["c_tr_mod=p", "lambda=1-p", "c_tr_mod+m_tr=1", "eq7_saturated"],
                grid_seeds,
                |i, _| {
                    let (d, p) = grid[i];
                    let rho = mcms(d, p)?;
                    let solved = c_tr_modified(&rho, cfg)?;
                    let c = c_l1(&rho) / (d as f64 - 1.0);
                    Ok(vec![
                        within(solved.value - p, 1e-6),
                        within(solved.lambda - (1.0 - p), 1e-5),
                        within(solved.value + m_tr(&rho)? - 1.0, 1e-6),
                        within(c * c + m_l(&rho)? - 1.0, 1e-9),
                    ])
                },
            )?
        }
        Suite::Hierarchy => run_items(
            &["hs_bound<=c_tr_mod", "c_tr_mod<=c_l1", "c_g<=hs_bound", "certificate"],
            seeds(1),
            |i, s| {
                let d = 2 + i % 4;
                let rho = random_density(d, 1 + (i / 4) % d, s)?;
                let solved = c_tr_modified(&rho, cfg)?;
                let bound = hs_bound(&rho)?.value;
                Ok(vec![
                    at_most(bound, solved.value, 1e-6),
                    at_most(solved.value, c_l1(&rho), 1e-6),
                    at_most(c_g(&rho, cfg)?, bound, 1e-4),
                    within(solved.certificate_gap(&rho)?, 5.0 * cfg.tol),
                ])
            },
        )?,
        Suite::Tradeoff => {
            let mut checks = run_items(&["equatorial:c_tr+m_tr=1"], seeds(2), |_, s| {
                let rho = random_equatorial_qubit(s);
                Ok(vec![within(c_tr_qubit(&rho)? + m_tr(&rho)? - 1.0, 1e-9)])
            })?;
            checks.extend(run_items(&["tilted:c_tr+m_tr<1"], seeds(3), |_, s| {
                let rho = random_tilted_qubit(s);
                Ok(vec![at_most(c_tr_qubit(&rho)? + m_tr(&rho)?, 1.0 - 1e-9, 0.0)])
            })?);
            checks
        }
        Suite::Axioms => {
            const MEASURES: [Measure; 3] = [Measure::L1, Measure::RelativeEntropy, Measure::ModifiedTrace];
            run_items(
                &[
                    "monotone:c_l1",
                    "monotone:c_r",
                    "monotone:c_tr_mod",
                    "strong:c_l1",
                    "strong:c_r",
                    "strong:c_tr_mod",
                ],
                seeds(4),
                |i, s| {
                    let d = 2 + i % 3;
                    let rho = random_density(d, 1 + (i / 3) % d, s)?;
                    let ch = random_incoherent_channel(d, 1 + (i / 3) % 3, s.wrapping_add(1))?;
                    let mut out = Vec::with_capacity(6);
                    for m in MEASURES {
                        let rec = monotonicity_audit(m, &rho, &ch, cfg)?;
                        out.push(Outcome {
                            slack: rec.slack,
                            passed: rec.passed,
                        });
                    }
                    for m in MEASURES {
                        let rec = strong_monotonicity_audit(m, &rho, &ch, cfg)?;
                        out.push(Outcome {
                            slack: rec.slack,
                            passed: rec.passed,
                        });
                    }
                    Ok(out)
                },
            )?
        }
        Suite::Oracle => {
            let mut checks = run_items(&["oracle>=solver", "oracle<=solver+0.03"], seeds(5), |i, s| {
                let rho = random_density(2 + i % 2, 1 + (i / 2) % (2 + i % 2), s)?;
                let solved = c_tr_modified(&rho, cfg)?.value;
                let oracle = grid_oracle_ctr(&rho, 2.0, 50)?;
                Ok(vec![at_most(solved, oracle, 1e-6), at_most(oracle, solved + 0.03, 0.0)])
            })?;
            checks.extend(run_items(&["c_g~grid_oracle"], seeds(6), |i, s| {
                let rho = random_density(2, 1 + i % 2, s)?;
                Ok(vec![within(c_g(&rho, cfg)? - grid_oracle_cg(&rho, 200)?, 2e-4)])
            })?);
            checks
        }
    };
    Ok(VerifySummary { suite, checks })
}
