//! lsfc: collocation eigensolver for coupled anharmonic oscillators.
//!
//! Exit codes: 0 success, 1 reference-check mismatch, 2 configuration or
//! parse error, 3 solver non-convergence.

mod config;
mod report;

use clap::Parser;
use config::{resolve, RunConfig, SolveArgs};
use lsfc_core::{
    lowest_eigenpairs, reference_values, strategy_by_name, EigenRequest, HamiltonianOperator,
    SolverError,
};
use report::{render, CheckLine, SolveRow};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lsfc",
    version,
    about = "Lowest eigenvalues of coupled anharmonic oscillators by sine-basis collocation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand)]
enum Command {
    /// Solve a model on one or more grids and report the lowest levels
    Solve(SolveArgs),
}

enum Failure {
    /// Bad flags, files, or model setup.
    Config(String),
    /// The optimizer or eigensolver gave up.
    Solver(String),
}

impl Failure {
    fn exit(self) -> ExitCode {
        match self {
            Failure::Config(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Failure::Solver(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(3)
            }
        }
    }
}

fn classify(err: SolverError) -> Failure {
    match err {
        SolverError::NotConverged { .. } | SolverError::OptimizationFailed { .. } => {
            Failure::Solver(err.to_string())
        }
        other => Failure::Config(other.to_string()),
    }
}

fn main() -> ExitCode {
    if let Err(msg) = apply_thread_cap() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Solve(args) => match run_solve(&args) {
            Ok(code) => code,
            Err(failure) => failure.exit(),
        },
    }
}

/// LSFC_THREADS caps the global worker pool; unset leaves the default.
fn apply_thread_cap() -> Result<(), String> {
    let Ok(raw) = std::env::var("LSFC_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("LSFC_THREADS must be a positive integer, got '{raw}'"))?;
    if threads == 0 {
        return Err("LSFC_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("cannot size the thread pool: {e}"))
}

fn run_solve(args: &SolveArgs) -> Result<ExitCode, Failure> {
    let cfg = resolve(args).map_err(Failure::Config)?;
    let minimizer = strategy_by_name(&cfg.strategy).map_err(classify)?;

    let mut rows = Vec::with_capacity(cfg.grid_sizes.len());
    for &n in &cfg.grid_sizes {
        let params = minimizer.optimize(&cfg.potential, n).map_err(classify)?;
        let op = HamiltonianOperator::build(&cfg.potential, &params, n).map_err(classify)?;
        let result = lowest_eigenpairs(&op, &EigenRequest::new(cfg.k)).map_err(classify)?;
        rows.push(SolveRow {
            n,
            grid: format!("{}^{}", n - 1, cfg.dims),
            params,
            energies: result.eigenvalues,
            residuals: result.residual_norms,
            iterations: result.iterations,
        });
    }

    let checks = build_checks(&cfg, &rows);
    print!("{}", render(&cfg, &rows, &checks));
    if cfg.check && checks.iter().any(|c| !c.ok) {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

/// Pair computed energies with frozen reference rows for the same model,
/// grid label, level, coupling, and (where the table distinguishes it)
/// optimization strategy.
fn build_checks(cfg: &RunConfig, rows: &[SolveRow]) -> Vec<CheckLine> {
    if !cfg.check {
        return Vec::new();
    }
    let mut checks = Vec::new();
    for row in rows {
        for r in reference_values(&cfg.model_label) {
            if r.grid != row.grid || r.level >= row.energies.len() {
                continue;
            }
            let coupling_matches = match (r.coupling, cfg.coupling) {
                (None, None) => true,
                (Some(a), Some(b)) => (a - b).abs() <= 1e-12 * a.abs().max(1.0),
                _ => false,
            };
            let strategy_matches = match r.strategy {
                None => true,
                Some(s) => s == cfg.strategy,
            };
            if !coupling_matches || !strategy_matches {
                continue;
            }
            let energy = row.energies[r.level];
            let abs_error = (energy - r.value).abs();
            checks.push(CheckLine {
                grid: row.grid.clone(),
                level: r.level,
                energy,
                reference: r.value,
                abs_error,
                ok: abs_error <= cfg.tolerance,
                source: r.source,
            });
        }
    }
    checks
}
