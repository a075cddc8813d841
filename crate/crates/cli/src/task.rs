//! Task files: JSON documents describing a state, gate or subspace problem.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::Vector3;
use qnav::bloch::{canonical_pair, DEGENERATE_THETA};
use qnav::gate::GateTask;
use qnav::linalg::{pauli_compose, ComplexMatrix, HermitianOperator, StateVector, C64};
use qnav::navigator::{NavigationTask, DEFAULT_GRID_POINTS, DEFAULT_TOL};
use qnav::NavError;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Complex numbers travel as `[re, im]`.
pub type Complex = [f64; 2];
/// Row-major nested arrays.
pub type Matrix = Vec<Vec<Complex>>;

/// Axes this close to unit length are renormalized instead of rejected.
const AXIS_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    State,
    Gate,
    Subspace,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindInput {
    pub epsilon: Option<f64>,
    pub axis: Option<[f64; 3]>,
    pub matrix: Option<Matrix>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerSettings {
    pub grid_points: usize,
    pub tol: f64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskFile {
    pub mode: Mode,
    /// Bloch angle between the states; shorthand for the canonical pair.
    pub theta: Option<f64>,
    pub psi_initial: Option<Vec<Complex>>,
    pub psi_final: Option<Vec<Complex>>,
    pub u_initial: Option<Matrix>,
    pub u_final: Option<Matrix>,
    pub wind: WindInput,
    #[serde(default)]
    pub optimizer: OptimizerSettings,
    #[serde(default = "enabled")]
    pub oracle: bool,
    #[serde(default)]
    pub max_branch: u32,
}

fn enabled() -> bool {
    true
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn complex(z: &Complex) -> C64 {
    C64::new(z[0], z[1])
}

pub fn to_rows(m: &Matrix) -> Vec<Vec<C64>> {
    m.iter().map(|row| row.iter().map(complex).collect()).collect()
}

pub fn from_rows(rows: Vec<Vec<C64>>) -> Matrix {
    rows.into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn parse_matrix(m: &Matrix, what: &str) -> Result<ComplexMatrix, CliError> {
    ComplexMatrix::from_rows(&to_rows(m)).map_err(|e| invalid(format!("{what}: {e}")))
}

fn parse_state(v: &[Complex], what: &str) -> Result<StateVector, CliError> {
    StateVector::normalized(v.iter().map(complex).collect()).map_err(|e| invalid(format!("{what}: {e}")))
}

impl TaskFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
    }

    /// Background Hamiltonian of dimension `dim`.
    pub fn background(&self, dim: usize) -> Result<HermitianOperator, CliError> {
        let w = &self.wind;
        match (w.epsilon, w.axis, &w.matrix) {
            (Some(eps), Some(axis), None) => {
                if dim != 2 {
                    return Err(invalid(format!(
                        "wind given as (epsilon, axis) needs a qubit task, dimension is {dim}"
                    )));
                }
                if !(eps.is_finite() && eps >= 0.0) {
                    return Err(invalid(format!("wind epsilon must be finite and >= 0, got {eps}")));
                }
                if eps >= 1.0 {
                    return Err(NavError::WindTooStrong { epsilon: eps }.into());
                }
                let axis = Vector3::from(axis);
                let norm = axis.norm();
                if !norm.is_finite() || (norm - 1.0).abs() > AXIS_SLACK {
                    return Err(invalid(format!("wind axis must be a unit vector, |axis| = {norm}")));
                }
                Ok(pauli_compose(0.0, &(axis * ((0.5 * eps).sqrt() / norm))))
            }
            (None, None, Some(m)) => {
                let h = HermitianOperator::new(parse_matrix(m, "wind matrix")?)
                    .map_err(|e| invalid(format!("wind matrix: {e}")))?;
                if h.dim() != dim {
                    return Err(invalid(format!(
                        "wind matrix has dimension {}, task has {dim}",
                        h.dim()
                    )));
                }
                Ok(h)
            }
            _ => Err(invalid("wind needs exactly one of {epsilon, axis} or {matrix}")),
        }
    }

    fn states(&self) -> Result<(StateVector, StateVector), CliError> {
        match (self.theta, &self.psi_initial, &self.psi_final) {
            (Some(theta), None, None) => {
                if !(theta.is_finite() && (0.0..=PI).contains(&theta)) {
                    return Err(invalid(format!("theta must lie in [0, pi], got {theta}")));
                }
                if theta <= DEGENERATE_THETA {
                    return Err(NavError::DegenerateTask { theta }.into());
                }
                Ok(canonical_pair(theta))
            }
            (None, Some(a), Some(b)) => {
                let a = parse_state(a, "psi_initial")?;
                let b = parse_state(b, "psi_final")?;
                if a.dim() != b.dim() {
                    return Err(invalid(format!(
                        "psi_initial has {} amplitudes, psi_final has {}",
                        a.dim(),
                        b.dim()
                    )));
                }
                Ok((a, b))
            }
            _ => Err(invalid("give either theta or both psi_initial and psi_final")),
        }
    }

    /// State transport task; `mode: state` is restricted to qubits.
    pub fn navigation_task(&self) -> Result<NavigationTask, CliError> {
        if self.mode == Mode::Gate {
            return Err(invalid("task is a gate task"));
        }
        if self.u_initial.is_some() || self.u_final.is_some() {
            return Err(invalid("state tasks take no unitaries"));
        }
        let (a, b) = self.states()?;
        if self.mode == Mode::State && a.dim() != 2 {
            return Err(invalid(format!(
                "state mode needs a qubit, got dimension {}; use subspace mode",
                a.dim()
            )));
        }
        let h0 = self.background(a.dim())?;
        Ok(NavigationTask::new(a, b, h0)?)
    }

    pub fn gate_task(&self) -> Result<GateTask, CliError> {
        if self.mode != Mode::Gate {
            return Err(invalid("task is not a gate task"));
        }
        if self.theta.is_some() || self.psi_initial.is_some() || self.psi_final.is_some() {
            return Err(invalid("gate tasks take no states"));
        }
        let (Some(ui), Some(uf)) = (&self.u_initial, &self.u_final) else {
            return Err(invalid("gate tasks need u_initial and u_final"));
        };
        let ui = parse_matrix(ui, "u_initial")?;
        let uf = parse_matrix(uf, "u_final")?;
        if ui.dim() != uf.dim() {
            return Err(invalid(format!(
                "u_initial has dimension {}, u_final has {}",
                ui.dim(),
                uf.dim()
            )));
        }
        let h0 = self.background(ui.dim())?;
        Ok(GateTask::new(ui, uf, h0)?)
    }
}
