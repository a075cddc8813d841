//! Result documents. Everything under `result` is a pure function of the
//! inputs; `metadata` holds the tool version only.

use qnav::gate::{GateSolution, GateTask};
use qnav::linalg::{HermitianOperator, StateVector};
use qnav::navigator::{NavigationSolution, SweepRecord};
use qnav::oracle::{first_passage, gate_residual, PassageResult, TimeGrid};
use qnav::Result;
use serde::{Deserialize, Serialize};

use crate::task::{from_rows, Matrix, Mode};

// Oracle samples per recurrence period of the total Hamiltonian.
const ORACLE_SAMPLES: usize = 8192;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document<T> {
    pub result: T,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
}

impl<T> Document<T> {
    pub fn new(result: T) -> Self {
        Self {
            result,
            metadata: Metadata {
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PassageReport {
    pub t_first: f64,
    pub peak_fidelity: f64,
    pub reached: bool,
    /// `|t_first − tau_star|`.
    pub time_difference: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateReport {
    pub mode: Mode,
    pub theta: f64,
    pub phi_star: f64,
    pub omega_star: f64,
    pub tau_star: f64,
    pub calm: bool,
    pub h_total: Matrix,
    pub h_control: Matrix,
    pub fidelity: f64,
    pub constraint_residual: f64,
    pub control_trace: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariance_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<PassageReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchRow {
    pub branch: Vec<i64>,
    pub t: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateReport {
    pub mode: Mode,
    pub t: f64,
    pub branch: Vec<i64>,
    pub global_phase: f64,
    pub h_total: Matrix,
    pub h_control: Matrix,
    pub gate_residual: f64,
    pub constraint_residual: f64,
    pub control_trace: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_gate_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_table: Option<Vec<BranchRow>>,
}

pub fn matrix(h: &HermitianOperator) -> Matrix {
    from_rows(h.rows())
}

/// Grid reaching a quarter period past `horizon`.
pub fn passage_grid(h: &HermitianOperator, horizon: f64) -> TimeGrid {
    let one = TimeGrid::spectral(h, ORACLE_SAMPLES, 1.0);
    TimeGrid {
        t_max: horizon + 0.25 * one.t_max,
        dt: one.dt,
    }
}

pub fn first_passage_check(
    h: &HermitianOperator,
    psi_i: &StateVector,
    psi_f: &StateVector,
    tau: f64,
) -> Result<PassageResult> {
    first_passage(h, psi_i, psi_f, passage_grid(h, tau))
}

pub fn state_report(
    mode: Mode,
    sol: &NavigationSolution,
    invariance_residual: Option<f64>,
    oracle: Option<PassageResult>,
) -> StateReport {
    StateReport {
        mode,
        theta: sol.theta,
        phi_star: sol.phi_star,
        omega_star: sol.omega_star,
        tau_star: sol.tau_star,
        calm: sol.calm,
        h_total: matrix(&sol.h_total),
        h_control: matrix(&sol.h_control),
        fidelity: sol.fidelity_check,
        constraint_residual: sol.constraint_residual,
        control_trace: sol.h_control.trace(),
        invariance_residual,
        oracle: oracle.map(|p| PassageReport {
            t_first: p.t_first,
            peak_fidelity: p.peak_fidelity,
            reached: p.reached,
            time_difference: (p.t_first - sol.tau_star).abs(),
        }),
    }
}

pub fn gate_report(
    task: &GateTask,
    sol: &GateSolution,
    table: Option<&[GateSolution]>,
    oracle: bool,
) -> Result<GateReport> {
    let oracle_gate_residual = if oracle {
        Some(gate_residual(
            &sol.h_total,
            &task.u_initial,
            &task.u_final,
            sol.t,
            sol.global_phase,
        )?)
    } else {
        None
    };
    Ok(GateReport {
        mode: Mode::Gate,
        t: sol.t,
        branch: sol.branch.clone(),
        global_phase: sol.global_phase,
        h_total: matrix(&sol.h_total),
        h_control: matrix(&sol.h_control),
        gate_residual: sol.gate_residual,
        constraint_residual: sol.constraint_residual,
        control_trace: sol.h_control.trace(),
        oracle_gate_residual,
        branch_table: table.map(|rows| {
            rows.iter()
                .map(|s| BranchRow {
                    branch: s.branch.clone(),
                    t: s.t,
                })
                .collect()
        }),
    })
}

/// `phi,omega,rho,alpha,tau` with 17 significant digits and LF endings.
pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from("phi,omega,rho,alpha,tau\n");
    for r in records {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.phi, r.omega, r.rho, r.alpha, r.tau
        ));
    }
    out
}
