mod error;
mod report;
mod task;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qnav::gate::{enumerate_branches, principal_branch, solve_gate};
use qnav::navigator::{canonicalize, optimize, sweep, DEFAULT_GRID_POINTS};
use qnav::subspace::{detect_and_reduce, solve_embedded};
use serde::Serialize;

use crate::error::CliError;
use crate::report::{first_passage_check, gate_report, state_report, sweep_csv, Document};
use crate::task::{Mode, TaskFile};

/// Time-optimal constant Hamiltonians for state and gate transport.
#[derive(Parser)]
#[command(name = "qnav", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal Hamiltonian carrying psi_initial to psi_final.
    SolveState {
        task: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
        #[command(flatten)]
        oracle: OracleFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Voyage time over the axis angle as CSV.
    Sweep {
        task: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form Hamiltonian realising u_final from u_initial.
    SolveGate {
        task: PathBuf,
        /// Also tabulate every branch with offsets up to this size.
        #[arg(long)]
        max_branch: Option<u32>,
        #[command(flatten)]
        oracle: OracleFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a result document against its task.
    Verify { result: PathBuf, task: PathBuf },
}

#[derive(Args)]
struct SolverFlags {
    /// Optimizer grid points (overrides the task file).
    #[arg(long)]
    grid: Option<usize>,
    /// Optimizer tolerance in phi (overrides the task file).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct OracleFlags {
    /// Cross-check with direct time evolution.
    #[arg(long, overrides_with = "no_oracle")]
    oracle: bool,
    #[arg(long, overrides_with = "oracle")]
    no_oracle: bool,
}

impl OracleFlags {
    fn resolve(&self, task: &TaskFile) -> bool {
        if self.oracle {
            true
        } else if self.no_oracle {
            false
        } else {
            task.oracle
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    let res = match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| CliError::Invalid(format!("cannot write output: {e}")))
}

fn emit_json<T: Serialize>(doc: &Document<T>, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc).expect("result documents serialize");
    text.push('\n');
    emit(&text, out)
}

fn solve_state(path: &Path, solver: &SolverFlags, oracle: &OracleFlags, out: Option<&Path>) -> Result<(), CliError> {
    let file = TaskFile::load(path)?;
    let task = file.navigation_task()?;
    let grid = solver.grid.unwrap_or(file.optimizer.grid_points);
    let tol = solver.tol.unwrap_or(file.optimizer.tol);
    let (sol, invariance) = match file.mode {
        Mode::Subspace => {
            let red = detect_and_reduce(&task)?;
            (solve_embedded(&task, grid, tol)?, Some(red.invariance_residual))
        }
        _ => (optimize(&task, grid, tol)?, None),
    };
    let passage = if oracle.resolve(&file) {
        Some(first_passage_check(
            &sol.h_total,
            &task.psi_initial,
            &task.psi_final,
            sol.tau_star,
        )?)
    } else {
        None
    };
    emit_json(&Document::new(state_report(file.mode, &sol, invariance, passage)), out)
}

fn run_sweep(path: &Path, points: usize, out: Option<&Path>) -> Result<(), CliError> {
    let file = TaskFile::load(path)?;
    let task = file.navigation_task()?;
    let qubit = match file.mode {
        Mode::Subspace => detect_and_reduce(&task)?.reduced,
        _ => task,
    };
    let canon = canonicalize(&qubit)?;
    emit(&sweep_csv(&sweep(&canon.task, points)?), out)
}

fn solve_gate_cmd(
    path: &Path,
    max_branch: Option<u32>,
    oracle: &OracleFlags,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let file = TaskFile::load(path)?;
    let task = file.gate_task()?;
    let k = max_branch.unwrap_or(file.max_branch);
    let report = if k > 0 {
        let table = enumerate_branches(&task, k)?;
        gate_report(&task, &table[0], Some(&table), oracle.resolve(&file))?
    } else {
        let sol = solve_gate(&task, &principal_branch(&task)?)?;
        gate_report(&task, &sol, None, oracle.resolve(&file))?
    };
    emit_json(&Document::new(report), out)
}

fn run_verify(result: &Path, task: &Path) -> Result<(), CliError> {
    let file = TaskFile::load(task)?;
    let text = std::fs::read_to_string(result)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", result.display())))?;
    let checks = verify::verify(&text, &file)?;
    print!("{}", verify::table(&checks));
    let failed = checks.iter().filter(|c| !c.pass()).count();
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::SolveState {
            task,
            solver,
            oracle,
            out,
        } => solve_state(task, solver, oracle, out.as_deref()),
        Command::Sweep { task, points, out } => run_sweep(task, *points, out.as_deref()),
        Command::SolveGate {
            task,
            max_branch,
            oracle,
            out,
        } => solve_gate_cmd(task, *max_branch, oracle, out.as_deref()),
        Command::Verify { result, task } => run_verify(result, task),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
