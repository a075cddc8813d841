#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, Vector3};
use qnav::bloch::{canonical_pair, Wind, WindSpec};
use qnav::linalg::{expm_unitary, pauli_compose, ComplexMatrix, HermitianOperator, StateVector, C64};
use qnav::navigator::{CanonicalTask, NavigationTask};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector(rng: &mut impl Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn tilted_axis() -> Vector3<f64> {
    let (x, y) = (0.1_f64, 0.23_f64);
    Vector3::new(x, y, (1.0 - x * x - y * y).sqrt())
}

pub fn tilted_task() -> CanonicalTask {
    CanonicalTask::new(0.5 * PI, Wind::Blowing(WindSpec::new(0.9, tilted_axis()).unwrap())).unwrap()
}

pub fn random_wind(rng: &mut impl Rng, lo: f64, hi: f64) -> Wind {
    Wind::Blowing(WindSpec::new(rng.gen_range(lo..hi), unit_vector(rng)).unwrap())
}

pub fn random_canonical(rng: &mut impl Rng) -> CanonicalTask {
    let wind = random_wind(rng, 0.05, 0.95);
    CanonicalTask::new(rng.gen_range(0.1..3.0), wind).unwrap()
}

/// Canonical states as a lab-frame task whose background is `wind`.
pub fn canonical_as_task(task: &CanonicalTask) -> NavigationTask {
    let (a, b) = canonical_pair(task.theta);
    NavigationTask::new(a, b, task.wind.operator()).unwrap()
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> StateVector {
    let amps: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(amps).unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize, scale: f64) -> HermitianOperator {
    let mut m = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(scale * rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::from_matrix(m).unwrap()
}

pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    expm_unitary(&random_hermitian(rng, n, 2.0), 1.0)
}

/// Random element of SU(2).
pub fn random_su2(rng: &mut impl Rng) -> ComplexMatrix {
    let angle = rng.gen_range(0.0..PI);
    expm_unitary(&pauli_compose(0.0, &unit_vector(rng)), angle)
}

/// Qubit background with `tr(h0_traceless²) = ε` and a random trace part.
pub fn random_qubit_background(rng: &mut impl Rng, lo: f64, hi: f64) -> HermitianOperator {
    let eps: f64 = rng.gen_range(lo..hi);
    pauli_compose(rng.gen_range(-1.0..1.0), &(unit_vector(rng) * (eps / 2.0).sqrt()))
}
