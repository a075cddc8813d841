//! Gate transport with a time-independent Hamiltonian.
//!
//! Once the branch of the logarithm is fixed, `e^{−iHT} U_I = U_F` pins the
//! generator `X = i ln(U_F U_I†)` up to the factor `T`, and the
//! full-throttle condition `tr((X/T − H0)²) = 1` is a quadratic in `1/T`
//! whose positive root is the voyage time. There is nothing left to
//! optimize except the choice of branch.

use std::f64::consts::PI;

use crate::error::{NavError, Result};
use crate::linalg::{eigenphases, hs_trace_product, ComplexMatrix, Eigenphases, HermitianOperator, UNITARY_TOL};
use crate::oracle::gate_residual;

/// Below this `tr(X²)` the relative gate is treated as the identity.
const NOOP_TOL: f64 = 1e-18;
const TRACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GateTask {
    pub u_initial: ComplexMatrix,
    pub u_final: ComplexMatrix,
    pub h0: HermitianOperator,
}

impl GateTask {
    pub fn new(u_initial: ComplexMatrix, u_final: ComplexMatrix, h0: HermitianOperator) -> Result<Self> {
        let n = u_initial.dim();
        if u_final.dim() != n {
            return Err(NavError::DimensionMismatch(n, u_final.dim()));
        }
        if h0.dim() != n {
            return Err(NavError::DimensionMismatch(n, h0.dim()));
        }
        for u in [&u_initial, &u_final] {
            let deviation = u.unitarity_deviation();
            if deviation > UNITARY_TOL {
                return Err(NavError::NotUnitary { deviation });
            }
        }
        let (_, traceless) = h0.split_trace();
        let epsilon = hs_trace_product(&traceless, &traceless)?;
        if epsilon >= 1.0 {
            return Err(NavError::WindTooStrong { epsilon });
        }
        Ok(Self { u_initial, u_final, h0 })
    }

    pub fn dim(&self) -> usize {
        self.u_initial.dim()
    }

    /// `U_F U_I†` rescaled to unit determinant, and the phase `δ/n` removed
    /// from it (so `U_F U_I† = e^{iδ/n}·result`).
    pub fn relative_gate(&self) -> Result<(ComplexMatrix, f64)> {
        let w = self.u_final.mul(&self.u_initial.adjoint())?;
        let shift = w.determinant().arg() / self.dim() as f64;
        Ok((w.scale(num_complex::Complex64::from_polar(1.0, -shift)), shift))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateSolution {
    /// Voyage time.
    pub t: f64,
    pub h_total: HermitianOperator,
    pub h_control: HermitianOperator,
    pub branch: Vec<i64>,
    /// Traceless generator with `e^{−iX} = U_F U_I†` up to global phase.
    pub x: HermitianOperator,
    /// `γ` with `U_F = e^{iγ} e^{−i H_total T} U_I`.
    pub global_phase: f64,
    pub gate_residual: f64,
    /// `tr(h_control²) − 1`.
    pub constraint_residual: f64,
}

/// Positive root `T` of `tr((X/T − H0)²) = 1`, given
/// `tr(H0 X)`, `tr(H0²)` and `tr(X²)`.
pub fn voyage_time(tr_h0_x: f64, tr_h0_sq: f64, tr_x_sq: f64) -> f64 {
    let disc = (tr_h0_x * tr_h0_x + (1.0 - tr_h0_sq) * tr_x_sq).sqrt();
    if tr_h0_x >= 0.0 {
        tr_x_sq / (disc + tr_h0_x)
    } else {
        // 1/T = (disc + b)/c = (1 − a)/(disc − b), free of cancellation
        (disc - tr_h0_x) / (1.0 - tr_h0_sq)
    }
}

struct Prepared<'a> {
    task: &'a GateTask,
    spectrum: Eigenphases,
    su_phase: f64,
    trace_shift: f64,
    wind: HermitianOperator,
    wind_sq: f64,
}

impl<'a> Prepared<'a> {
    fn new(task: &'a GateTask) -> Result<Self> {
        let (w, su_phase) = task.relative_gate()?;
        let spectrum = eigenphases(&w)?;
        let (trace_shift, wind) = task.h0.split_trace();
        let wind_sq = hs_trace_product(&wind, &wind)?;
        Ok(Self {
            task,
            spectrum,
            su_phase,
            trace_shift,
            wind,
            wind_sq,
        })
    }

    // Σ offsets that keeps the generator traceless.
    fn required_offset_sum(&self) -> i64 {
        -(self.spectrum.principal_sum() / (2.0 * PI)).round() as i64
    }

    fn solve(&self, branch: &[i64]) -> Result<GateSolution> {
        let x = self.spectrum.generator(branch)?;
        let trace = x.trace();
        if trace.abs() > TRACE_TOL {
            return Err(NavError::BranchNotTraceless {
                branch: branch.to_vec(),
                trace,
            });
        }
        let (_, x) = x.split_trace();
        let tr_x_sq = hs_trace_product(&x, &x)?;
        if tr_x_sq <= NOOP_TOL {
            return Err(NavError::NoOpGate);
        }
        let tr_h0_x = hs_trace_product(&self.wind, &x)?;
        let t = voyage_time(tr_h0_x, self.wind_sq, tr_x_sq);

        let n = self.task.dim();
        let h_total = x
            .scale(1.0 / t)
            .add(&HermitianOperator::identity(n).scale(self.trace_shift))?;
        let h_control = h_total.sub(&self.task.h0)?;
        let constraint_residual = hs_trace_product(&h_control, &h_control)? - 1.0;
        let global_phase = self.su_phase + self.trace_shift * t;
        let residual = gate_residual(&h_total, &self.task.u_initial, &self.task.u_final, t, global_phase)?;
        Ok(GateSolution {
            t,
            h_total,
            h_control,
            branch: branch.to_vec(),
            x,
            global_phase,
            gate_residual: residual,
            constraint_residual,
        })
    }
}

/// Closed-form solution on the given logarithm branch.
pub fn solve_gate(task: &GateTask, branch: &[i64]) -> Result<GateSolution> {
    Prepared::new(task)?.solve(branch)
}

/// Principal branch, with the smallest correction needed for tracelessness
/// when the principal phases of the unit-determinant gate do not sum to 0
/// (e.g. `−I` in SU(2)).
pub fn principal_branch(task: &GateTask) -> Result<Vec<i64>> {
    let prep = Prepared::new(task)?;
    let n = task.dim();
    let need = prep.required_offset_sum();
    let mut branch = vec![0; n];
    // Lowest phases are raised, highest lowered; phases are sorted descending.
    if need > 0 {
        for k in 0..need as usize {
            branch[n - 1 - k % n] += 1;
        }
    } else {
        for k in 0..(-need) as usize {
            branch[k % n] -= 1;
        }
    }
    Ok(branch)
}

/// Solutions for every traceless branch with offsets in
/// `[−max_offset, max_offset]`, sorted by `T`, ties broken by the
/// lexicographically smaller branch. No-op branches are skipped.
///
/// Every vector in `[−k, k]^n` is visited, so keep `n` and `k` small.
pub fn enumerate_branches(task: &GateTask, max_offset: u32) -> Result<Vec<GateSolution>> {
    let prep = Prepared::new(task)?;
    let n = task.dim();
    let need = prep.required_offset_sum();
    let k = max_offset as i64;
    let mut out = Vec::new();
    let mut branch = vec![-k; n];
    let mut noop = false;
    loop {
        if branch.iter().sum::<i64>() == need {
            match prep.solve(&branch) {
                Ok(sol) => out.push(sol),
                Err(NavError::NoOpGate) => noop = true,
                Err(e) => return Err(e),
            }
        }
        // odometer increment
        let mut i = n;
        loop {
            if i == 0 {
                // times equal to 1e-12 count as ties
                out.sort_by_key(|s| ((s.t * 1e12).round() as i128, s.branch.clone()));
                if out.is_empty() {
                    return Err(if noop {
                        NavError::NoOpGate
                    } else {
                        NavError::BranchNotTraceless {
                            branch: vec![0; n],
                            trace: 2.0 * PI * need as f64,
                        }
                    });
                }
                return Ok(out);
            }
            i -= 1;
            if branch[i] < k {
                branch[i] += 1;
                break;
            }
            branch[i] = -k;
        }
    }
}

/// Branch with the smallest voyage time among offsets up to `max_offset`.
pub fn solve_gate_min_branch(task: &GateTask, max_offset: u32) -> Result<GateSolution> {
    Ok(enumerate_branches(task, max_offset)?.swap_remove(0))
}
