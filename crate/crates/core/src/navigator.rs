//! Time-optimal state transport for a qubit under a background Hamiltonian.
//!
//! Any time-independent Hamiltonian that carries `ψ_I` to `ψ_F` rotates the
//! Bloch sphere about an axis in the plane bisecting the two Bloch points.
//! In the canonical frame that plane is the equator, so the total
//! Hamiltonian is `(ω/2)(cos φ σx + sin φ σy)`. The full-throttle condition
//! `tr((H − H0)²) = 1` fixes `ω(φ)`, the geometry fixes the rotation angle
//! `α(φ)`, and the voyage time `τ(φ) = α/ω` is minimized over the single
//! remaining angle `φ`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::Vector3;

use crate::bloch::{build_canonical_frame, transform_wind, CanonicalFrame, Wind, ANTIPODAL_MARGIN};
use crate::error::{NavError, Result};
use crate::golden::golden_section_minimize;
use crate::linalg::{expm_unitary, hs_trace_product, pauli_compose, HermitianOperator, StateVector};

pub const DEFAULT_GRID_POINTS: usize = 4096;
pub const DEFAULT_TOL: f64 = 1e-10;
/// Required `1 − fidelity` at the voyage time.
pub const FIDELITY_TOL: f64 = 1e-9;
pub const MIN_SWEEP_POINTS: usize = 16;
pub const MIN_GRID_POINTS: usize = 64;

// Number of discrete local minima of the grid scan that get refined.
const REFINED_BASINS: usize = 8;

/// One point of the `τ(φ)` curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub phi: f64,
    pub omega: f64,
    pub rho: f64,
    pub alpha: f64,
    pub tau: f64,
}

impl SweepRecord {
    /// Total Hamiltonian `(ω/2)(cos φ σx + sin φ σy)` in canonical coordinates.
    pub fn hamiltonian(&self) -> HermitianOperator {
        pauli_compose(0.0, &axis_vector(self.omega, self.phi))
    }
}

fn axis_vector(omega: f64, phi: f64) -> Vector3<f64> {
    let (s, c) = phi.sin_cos();
    Vector3::new(c, s, 0.0) * (0.5 * omega)
}

/// A state-transport problem in lab coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct NavigationTask {
    pub psi_initial: StateVector,
    pub psi_final: StateVector,
    pub h0: HermitianOperator,
}

impl NavigationTask {
    pub fn new(psi_initial: StateVector, psi_final: StateVector, h0: HermitianOperator) -> Result<Self> {
        if psi_initial.dim() != psi_final.dim() {
            return Err(NavError::DimensionMismatch(psi_initial.dim(), psi_final.dim()));
        }
        if h0.dim() != psi_initial.dim() {
            return Err(NavError::DimensionMismatch(h0.dim(), psi_initial.dim()));
        }
        // For n > 2 the bound applies to the invariant block, which the
        // subspace reduction checks.
        if h0.dim() == 2 {
            let (_, traceless) = h0.split_trace();
            let epsilon = hs_trace_product(&traceless, &traceless)?;
            if epsilon >= 1.0 {
                return Err(NavError::WindTooStrong { epsilon });
            }
        }
        Ok(Self {
            psi_initial,
            psi_final,
            h0,
        })
    }

    pub fn dim(&self) -> usize {
        self.psi_initial.dim()
    }
}

/// A qubit task reduced to the canonical frame: separation `θ` and the wind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalTask {
    pub theta: f64,
    pub wind: Wind,
}

impl CanonicalTask {
    pub fn new(theta: f64, wind: Wind) -> Result<Self> {
        if !(theta > 0.0 && theta <= PI) {
            return Err(NavError::InvalidParameter(format!(
                "theta must lie in (0, pi], got {theta}"
            )));
        }
        Ok(Self { theta, wind })
    }
}

/// Canonical form of a qubit task together with the frame and the discarded
/// trace part of `h0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Canonicalized {
    pub task: CanonicalTask,
    pub frame: CanonicalFrame,
    pub trace_part: f64,
}

pub fn canonicalize(task: &NavigationTask) -> Result<Canonicalized> {
    if task.dim() != 2 {
        return Err(NavError::Dimension {
            expected: 2,
            found: task.dim(),
        });
    }
    let frame = build_canonical_frame(&task.psi_initial, &task.psi_final)?;
    let framed = transform_wind(&frame, &task.h0)?;
    Ok(Canonicalized {
        task: CanonicalTask {
            theta: frame.theta,
            wind: framed.wind,
        },
        frame,
        trace_part: framed.trace_part,
    })
}

/// Positive root of `ω² − 2√(2ε) p ω − 2(1−ε) = 0` with
/// `p = x cos φ + y sin φ`. Without wind, `ω = √2`.
pub fn omega_of_phi(wind: &Wind, phi: f64) -> f64 {
    match wind {
        Wind::Calm => SQRT_2,
        Wind::Blowing(w) => {
            let eps = w.epsilon();
            let (s, c) = phi.sin_cos();
            let p = w.axis().x * c + w.axis().y * s;
            let b = (2.0 * eps).sqrt() * p;
            let disc = (b * b + 2.0 * (1.0 - eps)).sqrt();
            if b >= 0.0 {
                disc + b
            } else {
                // same root, without cancellation
                2.0 * (1.0 - eps) / (disc - b)
            }
        }
    }
}

/// Angle between the rotation axis and either Bloch point.
pub fn rho_of_phi(theta: f64, phi: f64) -> f64 {
    (phi.cos() * (0.5 * theta).cos()).clamp(-1.0, 1.0).acos()
}

/// `arccos[(sin²φ − tan²(θ/2)) / (sin²φ + tan²(θ/2))] ∈ [0, π]`: the
/// rotation angle up to orientation.
pub fn alpha_principal(theta: f64, phi: f64) -> f64 {
    let s2 = phi.sin().powi(2);
    let t2 = (0.5 * theta).tan().powi(2);
    ((s2 - t2) / (s2 + t2)).clamp(-1.0, 1.0).acos()
}

/// First-passage rotation angle about `(cos φ, sin φ, 0)` carrying `ψ_I` to
/// `ψ_F`, in `(0, 2π)`.
///
/// The base angle is the principal arccos above, written as
/// `2 atan2(tan(θ/2), |sin φ|)` to stay accurate near the poles of the
/// arccos. A positive rotation covers it directly when `sin φ > 0` and the
/// long way round (`2π − base`) when `sin φ < 0`.
pub fn alpha_of_phi(theta: f64, phi: f64) -> f64 {
    if theta >= PI - ANTIPODAL_MARGIN {
        return PI;
    }
    let s = phi.sin();
    if s == 0.0 {
        return PI;
    }
    let base = 2.0 * (0.5 * theta).tan().atan2(s.abs());
    if s > 0.0 {
        base
    } else {
        2.0 * PI - base
    }
}

/// Rotation angle computed from the geometry: project both Bloch points
/// onto the plane through `c = ½ cos ρ r̂` perpendicular to `r̂` and take the
/// signed angle between the projections, oriented by `r̂`.
pub fn alpha_geometric(theta: f64, phi: f64) -> f64 {
    let r_hat = axis_vector(2.0, phi);
    let (s, c) = (0.5 * theta).sin_cos();
    let psi_i = Vector3::new(0.5 * c, 0.0, 0.5 * s);
    let psi_f = Vector3::new(0.5 * c, 0.0, -0.5 * s);
    let center = r_hat * (0.5 * phi.cos() * c);
    let u = psi_i - center;
    let v = psi_f - center;
    let angle = u.cross(&v).dot(&r_hat).atan2(u.dot(&v));
    if angle <= 0.0 {
        angle + 2.0 * PI
    } else {
        angle
    }
}

/// Voyage time for the axis at angle `phi`.
pub fn tau_of_phi(task: &CanonicalTask, phi: f64) -> SweepRecord {
    let omega = omega_of_phi(&task.wind, phi);
    let alpha = alpha_of_phi(task.theta, phi);
    debug_assert!({
        let g = alpha_geometric(task.theta, phi);
        let d = (alpha - g).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d) < 1e-8
    });
    SweepRecord {
        phi,
        omega,
        rho: rho_of_phi(task.theta, phi),
        alpha,
        tau: alpha / omega,
    }
}

/// `τ(φ)` at `φ_k = 2πk/n`.
pub fn sweep(task: &CanonicalTask, n_points: usize) -> Result<Vec<SweepRecord>> {
    if n_points < MIN_SWEEP_POINTS {
        return Err(NavError::InvalidParameter(format!(
            "sweep needs at least {MIN_SWEEP_POINTS} points, got {n_points}"
        )));
    }
    Ok((0..n_points)
        .map(|k| tau_of_phi(task, grid_angle(k, n_points)))
        .collect())
}

fn grid_angle(k: usize, n: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

/// Minimizes `τ(φ)` over `[0, 2π)`.
///
/// A grid scan locates the discrete basins; each of the best few is refined
/// by golden-section search on its neighbouring cells. Brackets are split at
/// `0` and `π`, where `sin φ` changes sign and the orientation branch of
/// `α` switches, and those two angles are also evaluated directly.
pub fn optimize_canonical(task: &CanonicalTask, grid_points: usize, tol: f64) -> Result<SweepRecord> {
    if grid_points < MIN_GRID_POINTS {
        return Err(NavError::InvalidParameter(format!(
            "optimizer grid needs at least {MIN_GRID_POINTS} points, got {grid_points}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(NavError::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if task.wind == Wind::Calm {
        return Ok(tau_of_phi(task, 0.5 * PI));
    }

    let n = grid_points;
    let taus: Vec<f64> = (0..n).map(|k| tau_of_phi(task, grid_angle(k, n)).tau).collect();
    let mut basins: Vec<usize> = (0..n)
        .filter(|&k| {
            let prev = taus[(k + n - 1) % n];
            let next = taus[(k + 1) % n];
            taus[k] <= prev && taus[k] <= next
        })
        .collect();
    basins.sort_by(|&a, &b| taus[a].total_cmp(&taus[b]).then(a.cmp(&b)));
    basins.truncate(REFINED_BASINS);

    let tau_at = |phi: f64| tau_of_phi(task, phi).tau;
    let mut candidates: Vec<(f64, f64)> = vec![(0.0, tau_at(0.0)), (PI, tau_at(PI))];
    let step = 2.0 * PI / n as f64;
    for k in basins {
        let center = grid_angle(k, n);
        let (lo, hi) = (center - step, center + step);
        let mut cuts = vec![lo];
        cuts.extend([0.0, PI, 2.0 * PI].into_iter().filter(|&c| c > lo && c < hi));
        cuts.push(hi);
        for w in cuts.windows(2) {
            let (phi, tau) = golden_section_minimize(tau_at, w[0], w[1], tol);
            candidates.push((phi.rem_euclid(2.0 * PI), tau));
        }
    }
    let (phi, _) = candidates
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)))
        .expect("candidates are never empty");
    Ok(tau_of_phi(task, phi))
}

/// Optimal time-independent control for a qubit transport task.
#[derive(Debug, Clone, PartialEq)]
pub struct NavigationSolution {
    pub phi_star: f64,
    pub omega_star: f64,
    pub tau_star: f64,
    pub theta: f64,
    /// Total Hamiltonian in lab coordinates.
    pub h_total: HermitianOperator,
    /// `h_total − h0`.
    pub h_control: HermitianOperator,
    /// `|⟨ψ_F| e^{−i H τ} |ψ_I⟩|²`.
    pub fidelity_check: f64,
    /// `tr(h_control²) − 1`.
    pub constraint_residual: f64,
    /// `tr(h0)/dim`; re-added to `h_total` so the control stays traceless.
    pub trace_part: f64,
    pub calm: bool,
}

pub fn optimize(task: &NavigationTask, grid_points: usize, tol: f64) -> Result<NavigationSolution> {
    let canon = canonicalize(task)?;
    let best = optimize_canonical(&canon.task, grid_points, tol)?;
    assemble(task, &canon, &best)
}

/// Lab-frame solution for the axis angle of `record`.
pub fn assemble(task: &NavigationTask, canon: &Canonicalized, record: &SweepRecord) -> Result<NavigationSolution> {
    let r_lab = canon.frame.to_lab(&axis_vector(record.omega, record.phi));
    let h_total = pauli_compose(canon.trace_part, &r_lab);
    let h_control = h_total.sub(&task.h0)?;
    let constraint_residual = hs_trace_product(&h_control, &h_control)? - 1.0;
    let evolved = expm_unitary(&h_total, record.tau).apply(&task.psi_initial)?;
    let fidelity_check = task.psi_final.amplitudes().dotc(&evolved).norm_sqr();
    Ok(NavigationSolution {
        phi_star: record.phi,
        omega_star: record.omega,
        tau_star: record.tau,
        theta: canon.task.theta,
        h_total,
        h_control,
        fidelity_check,
        constraint_residual,
        trace_part: canon.trace_part,
        calm: canon.task.wind == Wind::Calm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{canonical_pair, WindSpec};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn tilted_wind() -> Wind {
        let (x, y) = (0.1_f64, 0.23_f64);
        Wind::Blowing(WindSpec::new(0.9, Vector3::new(x, y, (1.0 - x * x - y * y).sqrt())).unwrap())
    }

    fn z_wind(eps: f64) -> Wind {
        Wind::Blowing(WindSpec::new(eps, Vector3::z()).unwrap())
    }

    fn quadratic_residual(wind: &Wind, phi: f64, omega: f64) -> f64 {
        let Wind::Blowing(w) = wind else {
            return omega * omega - 2.0;
        };
        let p = w.axis().x * phi.cos() + w.axis().y * phi.sin();
        let eps = w.epsilon();
        omega * omega - 2.0 * (2.0 * eps).sqrt() * p * omega - 2.0 * (1.0 - eps)
    }

    #[test]
    fn omega_trivial_cases() {
        assert_eq!(omega_of_phi(&Wind::Calm, 1.0), SQRT_2);
        for phi in [0.0, 1.0, 2.5, 4.0] {
            assert_abs_diff_eq!(omega_of_phi(&z_wind(0.6), phi), (0.8f64).sqrt(), epsilon = 1e-15);
        }
        let phi = 0.44 * PI;
        let w = tilted_wind();
        let omega = omega_of_phi(&w, phi);
        assert!(omega > 0.0);
        assert!(quadratic_residual(&w, phi, omega).abs() < 1e-12);
    }

    #[test]
    fn rho_trivial_cases() {
        assert_abs_diff_eq!(rho_of_phi(1.3, PI / 2.0), PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho_of_phi(1.3, 0.0), 0.65, epsilon = 1e-15);
        for phi in [0.0, 0.7, 3.0, 5.0] {
            assert_abs_diff_eq!(rho_of_phi(PI, phi), PI / 2.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn alpha_trivial_cases() {
        assert_abs_diff_eq!(alpha_of_phi(PI / 2.0, PI / 2.0), PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(alpha_of_phi(PI / 2.0, 1.5 * PI), 1.5 * PI, epsilon = 1e-15);
        for theta in [0.2, 1.0, 2.5] {
            // sin(PI) is 1.2e-16 in floating point, not zero
            assert_abs_diff_eq!(alpha_of_phi(theta, PI), PI, epsilon = 1e-14);
            assert_eq!(alpha_of_phi(theta, 0.0), PI);
        }
        assert_eq!(alpha_of_phi(PI, 0.3), PI);
        assert_eq!(alpha_of_phi(PI - 1e-10, 4.0), PI);
    }

    #[test]
    fn alpha_branches_against_principal_arccos() {
        for theta in [0.3, 1.0, PI / 2.0, 2.8] {
            for k in 1..100 {
                let phi = 2.0 * PI * k as f64 / 100.0 + 1e-3;
                let a = alpha_principal(theta, phi);
                let expected = if phi.sin() > 0.0 { a } else { 2.0 * PI - a };
                assert_abs_diff_eq!(alpha_of_phi(theta, phi), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn orientation_matches_geometry_on_random_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100_000 {
            let theta = rng.gen_range(1e-6..PI - 1e-6);
            let phi = rng.gen_range(0.0..2.0 * PI);
            let d = (alpha_of_phi(theta, phi) - alpha_geometric(theta, phi)).abs();
            assert!(d < 1e-10, "theta {theta} phi {phi} diff {d}");
        }
    }

    #[test]
    fn tau_trivial_cases() {
        let theta = 1.1;
        let rec = tau_of_phi(&CanonicalTask::new(theta, z_wind(0.5)).unwrap(), PI / 2.0);
        assert_abs_diff_eq!(rec.tau, theta / (2.0f64 * 0.5).sqrt(), epsilon = 1e-15);
        let rec = tau_of_phi(&CanonicalTask::new(theta, Wind::Calm).unwrap(), PI / 2.0);
        assert_abs_diff_eq!(rec.tau, theta / SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn sweep_layout() {
        let task = CanonicalTask::new(PI / 2.0, tilted_wind()).unwrap();
        assert!(sweep(&task, 15).is_err());
        let recs = sweep(&task, 16).unwrap();
        assert_eq!(recs.len(), 16);
        assert!(recs.windows(2).all(|w| w[0].phi < w[1].phi));
        assert_eq!(recs[4].phi, PI / 2.0);
        for r in &recs {
            assert!((r.omega * r.tau - r.alpha).abs() < 1e-10);
            assert!(quadratic_residual(&task.wind, r.phi, r.omega).abs() < 1e-10);
        }
    }

    #[test]
    fn z_wind_sweep_minimum_at_quarter_turn() {
        let task = CanonicalTask::new(1.0, z_wind(0.4)).unwrap();
        let recs = sweep(&task, 64).unwrap();
        let best = recs.iter().min_by(|a, b| a.tau.total_cmp(&b.tau)).unwrap();
        assert_eq!(best.phi, PI / 2.0);
        let first = recs[0].omega;
        assert!(recs.iter().all(|r| (r.omega - first).abs() < 1e-15));
    }

    #[test]
    fn tilted_wind_optimum_near_044_pi() {
        let task = CanonicalTask::new(PI / 2.0, tilted_wind()).unwrap();
        let best = optimize_canonical(&task, DEFAULT_GRID_POINTS, DEFAULT_TOL).unwrap();
        assert!((best.phi / PI - 0.44).abs() <= 0.01, "phi* = {} pi", best.phi / PI);
    }

    #[test]
    fn z_wind_optimum_is_geodesic() {
        let theta = 0.9;
        let eps = 0.7;
        let task = CanonicalTask::new(theta, z_wind(eps)).unwrap();
        let best = optimize_canonical(&task, 256, 1e-10).unwrap();
        assert!((best.phi - PI / 2.0).abs() < 1e-6);
        assert_abs_diff_eq!(best.tau, theta / (2.0 * (1.0 - eps)).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn tailwind_beats_calm() {
        let theta = PI / 2.0;
        let tail = CanonicalTask::new(theta, Wind::Blowing(WindSpec::new(0.3, Vector3::y()).unwrap())).unwrap();
        let best = optimize_canonical(&tail, 1024, 1e-10).unwrap();
        let calm = optimize_canonical(&CanonicalTask::new(theta, Wind::Calm).unwrap(), 1024, 1e-10).unwrap();
        assert_abs_diff_eq!(calm.tau, (PI / 2.0) / SQRT_2, epsilon = 1e-15);
        assert!(best.tau < calm.tau);
    }

    #[test]
    fn antipodal_optimum_faces_the_wind() {
        let axis = Vector3::new(-0.6, 0.48, 0.64);
        let task = CanonicalTask::new(PI, Wind::Blowing(WindSpec::new(0.5, axis).unwrap())).unwrap();
        let best = optimize_canonical(&task, 512, 1e-12).unwrap();
        let expected = axis.y.atan2(axis.x).rem_euclid(2.0 * PI);
        assert!((best.phi - expected).abs() < 1e-6);
        assert_abs_diff_eq!(best.alpha, PI, epsilon = 0.0);
    }

    #[test]
    fn optimizer_argument_checks() {
        let task = CanonicalTask::new(1.0, Wind::Calm).unwrap();
        assert!(optimize_canonical(&task, 63, 1e-10).is_err());
        assert!(optimize_canonical(&task, 64, 0.0).is_err());
        assert!(CanonicalTask::new(0.0, Wind::Calm).is_err());
        assert!(CanonicalTask::new(3.5, Wind::Calm).is_err());
    }

    #[test]
    fn degenerate_task_is_refused() {
        let (a, _) = canonical_pair(1.0);
        let task = NavigationTask::new(a.clone(), a.with_phase(0.2), HermitianOperator::zero(2)).unwrap();
        assert!(matches!(
            optimize(&task, 256, 1e-10),
            Err(NavError::DegenerateTask { .. })
        ));
    }

    #[test]
    fn strong_wind_is_refused() {
        let (a, b) = canonical_pair(1.0);
        let h0 = pauli_compose(0.0, &Vector3::new(0.5, 0.5, 0.0));
        assert!(matches!(
            NavigationTask::new(a, b, h0),
            Err(NavError::WindTooStrong { .. })
        ));
    }

    #[test]
    fn lab_solution_with_trace_shift() {
        let (a, b) = canonical_pair(1.2);
        let h0 = pauli_compose(0.4, &Vector3::new(0.2, -0.1, 0.3));
        let task = NavigationTask::new(a, b, h0).unwrap();
        let sol = optimize(&task, 1024, 1e-10).unwrap();
        assert!(sol.constraint_residual.abs() < 1e-9);
        assert!(sol.h_control.trace().abs() < 1e-10);
        assert!(sol.fidelity_check >= 1.0 - FIDELITY_TOL);
        assert_abs_diff_eq!(sol.trace_part, 0.4, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn constraint_and_reachability_for_all_axes(
            eps in 0.01f64..0.99,
            ax in prop::array::uniform3(-1.0f64..1.0),
            theta in 0.05f64..3.1,
            phi in 0.0f64..(2.0 * PI),
        ) {
            let axis = Vector3::from(ax);
            prop_assume!(axis.norm() > 1e-2);
            let wind = Wind::Blowing(WindSpec::new(eps, axis.normalize()).unwrap());
            let task = CanonicalTask::new(theta, wind).unwrap();
            let rec = tau_of_phi(&task, phi);
            let h1 = rec.hamiltonian().sub(&wind.operator()).unwrap();
            prop_assert!((hs_trace_product(&h1, &h1).unwrap() - 1.0).abs() < 1e-9);
            prop_assert!((rec.omega * rec.tau - rec.alpha).abs() < 1e-10);

            let (a, b) = canonical_pair(theta);
            let evolved = expm_unitary(&rec.hamiltonian(), rec.tau).apply(&a).unwrap();
            let fid = b.amplitudes().dotc(&evolved).norm_sqr();
            prop_assert!(fid >= 1.0 - FIDELITY_TOL);
        }
    }
}
