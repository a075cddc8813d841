//! Independent re-check of a result document against its task file.

use std::fmt::Write as _;

use qnav::linalg::{hs_trace_product, max_abs_diff, ComplexMatrix, HermitianOperator, HERMITIAN_TOL};
use qnav::oracle::{fidelity_at, gate_residual};

use crate::error::CliError;
use crate::report::{Document, GateReport, StateReport};
use crate::task::{parse_matrix, Matrix, Mode, TaskFile};

pub const CONSISTENCY_TOL: f64 = 1e-9;
pub const NORM_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-10;
pub const REACH_TOL: f64 = 1e-9;

pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tol: f64,
}

impl Check {
    fn new(name: &'static str, value: f64, tol: f64) -> Self {
        Self { name, value, tol }
    }

    pub fn pass(&self) -> bool {
        self.value.is_finite() && self.value <= self.tol
    }
}

pub fn table(checks: &[Check]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<30} {:>12} {:>10}  status", "check", "value", "tol");
    for c in checks {
        let _ = writeln!(
            out,
            "{:<30} {:>12.3e} {:>10.0e}  {}",
            c.name,
            c.value,
            c.tol,
            if c.pass() { "PASS" } else { "FAIL" }
        );
    }
    out
}

fn hermitian(m: &Matrix, what: &str) -> Result<(ComplexMatrix, f64), CliError> {
    let m = parse_matrix(m, what)?;
    let dev = max_abs_diff(m.as_matrix(), m.adjoint().as_matrix());
    Ok((m, dev))
}

fn operator(m: ComplexMatrix) -> Result<HermitianOperator, CliError> {
    // symmetrize; the deviation is reported as its own check
    let sym = (m.as_matrix() + m.adjoint().as_matrix()) * qnav::linalg::C64::new(0.5, 0.0);
    Ok(HermitianOperator::from_matrix(sym)?)
}

struct Controls {
    total: HermitianOperator,
    checks: Vec<Check>,
}

fn control_checks(h0: &HermitianOperator, total: &Matrix, control: &Matrix) -> Result<Controls, CliError> {
    let (total, dev_total) = hermitian(total, "h_total")?;
    let (control, dev_control) = hermitian(control, "h_control")?;
    if total.dim() != h0.dim() || control.dim() != h0.dim() {
        return Err(CliError::Invalid(format!(
            "result matrices do not match the task dimension {}",
            h0.dim()
        )));
    }
    let total = operator(total)?;
    let control = operator(control)?;
    let implied = total.sub(h0)?;
    Ok(Controls {
        checks: vec![
            Check::new("h_total hermitian", dev_total, HERMITIAN_TOL),
            Check::new("h_control hermitian", dev_control, HERMITIAN_TOL),
            Check::new(
                "h_control = h_total - h0",
                max_abs_diff(implied.as_matrix(), control.as_matrix()),
                CONSISTENCY_TOL,
            ),
            Check::new(
                "|tr(h_control^2) - 1|",
                (hs_trace_product(&control, &control)? - 1.0).abs(),
                NORM_TOL,
            ),
            Check::new("|tr(h_control)|", control.trace().abs(), TRACE_TOL),
        ],
        total,
    })
}

pub fn verify(result_text: &str, task: &TaskFile) -> Result<Vec<Check>, CliError> {
    let bad = |e: serde_json::Error| CliError::Invalid(format!("result document: {e}"));
    match task.mode {
        Mode::State | Mode::Subspace => {
            let doc: Document<StateReport> = serde_json::from_str(result_text).map_err(bad)?;
            let nav = task.navigation_task()?;
            let r = doc.result;
            let mut c = control_checks(&nav.h0, &r.h_total, &r.h_control)?;
            let fidelity = fidelity_at(&c.total, &nav.psi_initial, &nav.psi_final, r.tau_star)?;
            c.checks
                .push(Check::new("1 - fidelity at tau_star", 1.0 - fidelity, REACH_TOL));
            Ok(c.checks)
        }
        Mode::Gate => {
            let doc: Document<GateReport> = serde_json::from_str(result_text).map_err(bad)?;
            let gate = task.gate_task()?;
            let r = doc.result;
            let mut c = control_checks(&gate.h0, &r.h_total, &r.h_control)?;
            let residual = gate_residual(&c.total, &gate.u_initial, &gate.u_final, r.t, r.global_phase)?;
            c.checks.push(Check::new("gate residual at t", residual, REACH_TOL));
            Ok(c.checks)
        }
    }
}
