mod common;

use std::f64::consts::PI;

use qnav::gate::*;
use qnav::linalg::{expm_unitary, hs_trace_product, sigma_z, ComplexMatrix, StateVector, C64};
use qnav::navigator::{optimize, NavigationTask, DEFAULT_GRID_POINTS, DEFAULT_TOL};
use qnav::oracle::gate_residual;
use rand::Rng;

fn first_column(u: &ComplexMatrix) -> StateVector {
    StateVector::new(u.as_matrix().column(0).iter().copied().collect::<Vec<_>>()).unwrap()
}

#[test]
fn random_su2_gates_are_reached() {
    let mut rng = common::rng(7);
    for _ in 0..100 {
        let u_i = common::random_su2(&mut rng);
        let u_f = common::random_su2(&mut rng);
        let h0 = common::random_qubit_background(&mut rng, 0.0, 0.95);
        let task = GateTask::new(u_i.clone(), u_f.clone(), h0).unwrap();
        let sol = solve_gate(&task, &principal_branch(&task).unwrap()).unwrap();
        let check = gate_residual(&sol.h_total, &u_i, &u_f, sol.t, sol.global_phase).unwrap();
        assert!(check <= 1e-9, "residual {check}");
        assert!(sol.constraint_residual.abs() <= 1e-9);
        assert!(sol.h_control.trace().abs() <= 1e-10);
    }
}

#[test]
fn three_level_gates_are_reached() {
    let mut rng = common::rng(8);
    for _ in 0..20 {
        let u_i = common::random_unitary(&mut rng, 3);
        let u_f = common::random_unitary(&mut rng, 3);
        let h0 = common::random_hermitian(&mut rng, 3, 0.15);
        let task = GateTask::new(u_i.clone(), u_f.clone(), h0).unwrap();
        let sol = solve_gate_min_branch(&task, 1).unwrap();
        assert!(gate_residual(&sol.h_total, &u_i, &u_f, sol.t, sol.global_phase).unwrap() <= 1e-9);
        assert!(sol.constraint_residual.abs() <= 1e-9);
        let principal = solve_gate(&task, &principal_branch(&task).unwrap()).unwrap();
        assert!(sol.t <= principal.t + 1e-12);
    }
}

#[test]
fn z_tailwind_family() {
    let mut rng = common::rng(9);
    for _ in 0..50 {
        let eps: f64 = rng.gen_range(0.01..0.99);
        let beta: f64 = rng.gen_range(0.05..3.0);
        let h0 = sigma_z().scale((eps / 2.0).sqrt());
        let task = GateTask::new(ComplexMatrix::identity(2), expm_unitary(&sigma_z(), beta), h0).unwrap();
        let sol = solve_gate(&task, &[0, 0]).unwrap();
        assert!((sol.t - 2f64.sqrt() * beta / (1.0 + eps.sqrt())).abs() <= 1e-10);
    }
}

#[test]
fn gate_time_bounds_state_time() {
    let mut rng = common::rng(10);
    for _ in 0..30 {
        let u_i = common::random_su2(&mut rng);
        let u_f = common::random_su2(&mut rng);
        let h0 = common::random_qubit_background(&mut rng, 0.05, 0.9);
        let gate = GateTask::new(u_i.clone(), u_f.clone(), h0.clone()).unwrap();
        let g = solve_gate_min_branch(&gate, 1).unwrap();
        let state = NavigationTask::new(first_column(&u_i), first_column(&u_f), h0).unwrap();
        let s = optimize(&state, DEFAULT_GRID_POINTS, DEFAULT_TOL).unwrap();
        assert!(s.tau_star <= g.t + 1e-8, "state {} gate {}", s.tau_star, g.t);
    }
}

#[test]
fn global_phase_of_target_is_absorbed() {
    let mut rng = common::rng(12);
    let u_i = common::random_su2(&mut rng);
    let u_f = common::random_su2(&mut rng);
    let h0 = common::random_qubit_background(&mut rng, 0.1, 0.5);
    let base = solve_gate(&GateTask::new(u_i.clone(), u_f.clone(), h0.clone()).unwrap(), &[0, 0]).unwrap();
    for phase in [0.3, -1.2, PI] {
        let shifted = u_f.scale(C64::from_polar(1.0, phase));
        let task = GateTask::new(u_i.clone(), shifted.clone(), h0.clone()).unwrap();
        let sol = solve_gate(&task, &principal_branch(&task).unwrap()).unwrap();
        assert!(gate_residual(&sol.h_total, &u_i, &shifted, sol.t, sol.global_phase).unwrap() <= 1e-9);
        if phase != PI {
            assert!((sol.t - base.t).abs() < 1e-10);
        }
    }
}

#[test]
fn control_norm_identity() {
    let mut rng = common::rng(13);
    let task = GateTask::new(
        common::random_su2(&mut rng),
        common::random_su2(&mut rng),
        common::random_qubit_background(&mut rng, 0.2, 0.8),
    )
    .unwrap();
    let sol = solve_gate(&task, &[0, 0]).unwrap();
    let h1 = sol.x.scale(1.0 / sol.t).sub(&task.h0.split_trace().1).unwrap();
    assert!((hs_trace_product(&h1, &h1).unwrap() - 1.0).abs() < 1e-9);
}
