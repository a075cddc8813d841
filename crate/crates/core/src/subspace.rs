//! Reduction of an n-level transport task to the qubit problem when the
//! background Hamiltonian leaves `span{ψ_I, ψ_F}` invariant.

use nalgebra::{DMatrix, DVector};

use crate::error::{NavError, Result};
use crate::linalg::{expm_unitary, hs_trace_product, HermitianOperator, StateVector, C64};
use crate::navigator::{optimize, NavigationSolution, NavigationTask};

/// Largest leakage `‖H0 e_k − P H0 e_k‖` accepted as invariant.
pub const INVARIANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceReduction {
    /// Orthonormal basis `e₁, e₂` of the state plane, as the columns of an
    /// `n × 2` matrix.
    pub basis: DMatrix<C64>,
    /// Traceless 2×2 block of `h0` in that basis.
    pub h0_block: HermitianOperator,
    /// Half the trace of the block.
    pub h0_trace_part: f64,
    pub invariance_residual: f64,
    /// The qubit task in block coordinates.
    pub reduced: NavigationTask,
}

pub fn detect_and_reduce(task: &NavigationTask) -> Result<SubspaceReduction> {
    let n = task.dim();
    let (basis, psi_i, psi_f) = if n == 2 {
        (
            DMatrix::identity(2, 2),
            task.psi_initial.clone(),
            task.psi_final.clone(),
        )
    } else {
        let e1 = task.psi_initial.amplitudes().clone();
        let target = task.psi_final.amplitudes();
        let perp = target - &e1 * e1.dotc(target);
        let norm = perp.norm();
        if norm < 1e-12 {
            return Err(NavError::DegenerateTask {
                theta: 2.0 * norm.asin(),
            });
        }
        let e2 = perp / C64::new(norm, 0.0);
        let coords = vec![e1.dotc(target), e2.dotc(target)];
        let basis = DMatrix::from_columns(&[e1, e2]);
        (
            basis,
            StateVector::from_real(&[1.0, 0.0])?,
            StateVector::normalized(coords)?,
        )
    };

    let h0 = task.h0.as_matrix();
    let image = h0 * &basis;
    let projected = &basis * (basis.adjoint() * &image);
    let invariance_residual = (0..2)
        .map(|k| (image.column(k) - projected.column(k)).norm())
        .fold(0.0, f64::max);
    if invariance_residual > INVARIANCE_TOL {
        return Err(NavError::NotInvariant {
            residual: invariance_residual,
        });
    }

    let block = HermitianOperator::hermitize(basis.adjoint() * &image);
    let (h0_trace_part, h0_block) = block.split_trace();
    let reduced = NavigationTask::new(psi_i, psi_f, h0_block.clone())?;
    Ok(SubspaceReduction {
        basis,
        h0_block,
        h0_trace_part,
        invariance_residual,
        reduced,
    })
}

/// Solves the qubit problem on the invariant block and embeds it: the block
/// carries the optimal total Hamiltonian, the complement keeps `h0`, so the
/// control is supported on the block alone.
pub fn solve_embedded(task: &NavigationTask, grid_points: usize, tol: f64) -> Result<NavigationSolution> {
    let red = detect_and_reduce(task)?;
    if task.dim() == 2 {
        // identity embedding
        return optimize(task, grid_points, tol);
    }
    let block_sol = optimize(&red.reduced, grid_points, tol)?;

    let n = task.dim();
    let e = &red.basis;
    let h0 = task.h0.as_matrix();
    let complement = DMatrix::<C64>::identity(n, n) - e * e.adjoint();
    let on_block = block_sol
        .h_total
        .add(&HermitianOperator::identity(2).scale(red.h0_trace_part))?;
    let total = e * on_block.as_matrix() * e.adjoint() + &complement * h0 * &complement;
    let h_total = HermitianOperator::hermitize(total);
    let h_control = h_total.sub(&task.h0)?;
    let constraint_residual = hs_trace_product(&h_control, &h_control)? - 1.0;

    let evolved: DVector<C64> = expm_unitary(&h_total, block_sol.tau_star).apply(&task.psi_initial)?;
    let fidelity_check = task.psi_final.amplitudes().dotc(&evolved).norm_sqr();

    Ok(NavigationSolution {
        h_total,
        h_control,
        fidelity_check,
        constraint_residual,
        trace_part: red.h0_trace_part,
        ..block_sol
    })
}
