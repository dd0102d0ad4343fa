use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use modtrace_cli::crossing::{crossing, BRACKET};
use modtrace_cli::report::format_report;
use modtrace_cli::state_file::{read_state, IO_TOLERANCE};
use modtrace_cli::sweep::{sweep, to_csv};
use modtrace_cli::verify::{self, Suite};
use modtrace_cli::{CliError, Result};
use modtrace_core::{Measure, MeasureReport, SolverConfig};

#[derive(Parser)]
#[command(name = "modtrace", version, about = "Coherence and mixedness measures for density matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolverFlags {
    /// Stopping tolerance of the splitting solver.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = 20_000)]
    max_iter: usize,
    /// Seed for randomized optimizer restarts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverFlags {
    fn config(&self) -> Result<SolverConfig> {
        let cfg = SolverConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            seed: self.seed,
            ..SolverConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate measures on a state file.
    Compute {
        #[arg(long)]
        state: PathBuf,
        /// Comma-separated measure names, or `all`.
        #[arg(long, default_value = "all")]
        measure: String,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Tabulate c_l1, c_tr_mod, c_g and c_r along the maximally coherent mixed family.
    Sweep {
        #[arg(long)]
        dim: usize,
        #[arg(long = "p-min", default_value_t = 0.05)]
        p_min: f64,
        #[arg(long = "p-max", default_value_t = 1.0)]
        p_max: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Locate p where c_r of the maximally coherent mixed family equals p.
    Crossing {
        #[arg(long)]
        dim: usize,
    },
    /// Run a seeded verification suite.
    Verify {
        /// One of prop1, mcms, hierarchy, tradeoff, axioms, oracle.
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

fn parse_measures(list: &str) -> Result<Vec<Measure>> {
    if list.trim() == "all" {
        return Ok(Measure::ALL.to_vec());
    }
    list.split(',')
        .map(|name| {
            name.trim()
                .parse::<Measure>()
                .map_err(|e| CliError::Input(e.to_string()))
        })
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compute { state, measure, solver } => {
            let cfg = solver.config()?;
            let measures = parse_measures(&measure)?;
            let rho = read_state(&state, IO_TOLERANCE)?;
            let report = MeasureReport::compute(&rho, &measures, &cfg)?;
            for line in format_report(&report, &rho)? {
                println!("{line}");
            }
            if report.entries().any(|e| !e.converged) {
                return Err(CliError::Unconverged);
            }
            if let Err(msg) = report.check_invariants() {
                eprintln!("modtrace: {msg}");
                return Err(CliError::VerificationFailed);
            }
            Ok(())
        }
        Command::Sweep { dim, p_min, p_max, steps, out, solver } => {
            let cfg = solver.config()?;
            let csv = to_csv(&sweep(dim, p_min, p_max, steps, &cfg)?);
            match out {
                Some(path) => std::fs::write(&path, csv).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                }),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
        Command::Crossing { dim } => {
            let root = crossing(dim)?;
            println!("{root:.6}");
            Ok(())
        }
        Command::Verify { suite, seed, count } => {
            let suite: Suite = suite.parse()?;
            let summary = verify::run(suite, seed, count, &SolverConfig::default())?;
            println!("{summary}");
            if summary.all_passed() {
                Ok(())
            } else {
                Err(CliError::VerificationFailed)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CliError::NoSignChange { .. } => {
                    eprintln!("modtrace: searched [{}, {}]: {err}", BRACKET.0, BRACKET.1)
                }
                CliError::Unconverged => eprintln!("modtrace: {err}; values marked `unconverged`"),
                _ => eprintln!("modtrace: {err}"),
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
