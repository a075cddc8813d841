//! Brute-force verification by direct time evolution.
//!
//! Nothing here uses the trigonometric construction of the navigator: the
//! fidelity `|⟨ψ_F|e^{−iht}|ψ_I⟩|²` is evaluated from the spectrum of `h`
//! on a time grid, and the first peak that reaches the target is refined by
//! golden-section search.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{NavError, Result};
use crate::golden::golden_section_minimize;
use crate::linalg::{max_abs_diff, ComplexMatrix, HermitianOperator, StateVector, C64};

/// Grid samples above `1 − BRACKET_TOL` open a candidate peak.
pub const BRACKET_TOL: f64 = 1e-6;
/// A refined peak counts as reaching the target above `1 − CONFIRM_TOL`.
pub const CONFIRM_TOL: f64 = 1e-9;
/// Width of the final golden-section bracket in time.
pub const TIME_RESOLUTION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassageResult {
    pub t_first: f64,
    pub peak_fidelity: f64,
    pub reached: bool,
}

/// Sampling grid `t = 0, dt, …, t_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_max: f64,
    pub dt: f64,
}

impl TimeGrid {
    /// Heuristic grid for a qubit with background strength `epsilon`:
    /// time scale `π/√(2(1+√ε))`, `dt` a thousandth of it, `t_max` fifty
    /// times it.
    pub fn for_wind(epsilon: f64) -> Self {
        let scale = PI / (2.0 * (1.0 + epsilon.max(0.0).sqrt())).sqrt();
        Self {
            t_max: 50.0 * scale,
            dt: 1e-3 * scale,
        }
    }

    /// Grid derived from the spectral spread of `h`: `periods` recurrence
    /// periods `2π/(λ_max − λ_min)`, each sampled `per_period` times.
    pub fn spectral(h: &HermitianOperator, per_period: usize, periods: f64) -> Self {
        let ev = h.eigenvalues();
        let spread = ev[ev.len() - 1] - ev[0];
        let period = if spread > 0.0 { 2.0 * PI / spread } else { 1.0 };
        Self {
            t_max: periods * period,
            dt: period / per_period.max(1) as f64,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) || !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(NavError::InvalidParameter(format!(
                "time grid needs dt > 0 and t_max > 0, got dt = {}, t_max = {}",
                self.dt, self.t_max
            )));
        }
        Ok(())
    }

    fn len(&self) -> usize {
        if self.dt > self.t_max {
            1
        } else {
            (self.t_max / self.dt * (1.0 + 1e-12)).floor() as usize + 1
        }
    }

    fn at(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }
}

// e^{-iht}ψ_I = V diag(e^{-iλt}) V†ψ_I.
struct Propagator {
    values: Vec<f64>,
    vectors: DMatrix<C64>,
    coeffs: DVector<C64>,
}

impl Propagator {
    fn new(h: &HermitianOperator, psi: &StateVector) -> Result<Self> {
        if h.dim() != psi.dim() {
            return Err(NavError::DimensionMismatch(h.dim(), psi.dim()));
        }
        let (values, vectors) = h.eigh();
        let coeffs = vectors.adjoint() * psi.amplitudes();
        Ok(Self {
            values,
            vectors,
            coeffs,
        })
    }

    fn state_at(&self, t: f64) -> DVector<C64> {
        let rotated = DVector::from_iterator(
            self.values.len(),
            self.values
                .iter()
                .zip(self.coeffs.iter())
                .map(|(&l, &c)| c * C64::from_polar(1.0, -l * t)),
        );
        &self.vectors * rotated
    }
}

struct Overlap<'a> {
    prop: Propagator,
    target: &'a StateVector,
}

impl Overlap<'_> {
    fn fidelity(&self, t: f64) -> f64 {
        self.target
            .amplitudes()
            .dotc(&self.prop.state_at(t))
            .norm_sqr()
            .min(1.0)
    }

    // 1 − fidelity as the squared norm of the component orthogonal to the
    // target, which keeps full relative precision near a perfect hit.
    fn infidelity(&self, t: f64) -> f64 {
        let psi = self.prop.state_at(t);
        let target = self.target.amplitudes();
        let along = target.dotc(&psi);
        (psi - target * along).norm_squared()
    }
}

fn overlap<'a>(h: &HermitianOperator, psi_i: &StateVector, psi_f: &'a StateVector) -> Result<Overlap<'a>> {
    if psi_i.dim() != psi_f.dim() {
        return Err(NavError::DimensionMismatch(psi_i.dim(), psi_f.dim()));
    }
    Ok(Overlap {
        prop: Propagator::new(h, psi_i)?,
        target: psi_f,
    })
}

/// `|⟨ψ_F|e^{−iht}|ψ_I⟩|²` at a single time.
pub fn fidelity_at(h: &HermitianOperator, psi_i: &StateVector, psi_f: &StateVector, t: f64) -> Result<f64> {
    Ok(overlap(h, psi_i, psi_f)?.fidelity(t))
}

/// Sampled fidelity on `grid`.
pub fn fidelity_curve(
    h: &HermitianOperator,
    psi_i: &StateVector,
    psi_f: &StateVector,
    grid: TimeGrid,
) -> Result<Vec<(f64, f64)>> {
    grid.check()?;
    let ov = overlap(h, psi_i, psi_f)?;
    Ok((0..grid.len())
        .map(|k| {
            let t = grid.at(k);
            (t, ov.fidelity(t))
        })
        .collect())
}

/// First time on `[0, t_max]` at which `e^{−iht}ψ_I` hits `ψ_F`.
///
/// Scans the grid for the first sample above `1 − BRACKET_TOL`, climbs to
/// the discrete peak, and refines inside the neighbouring cells. A refined
/// peak below `1 − CONFIRM_TOL` is discarded and the scan resumes after it.
pub fn first_passage(
    h: &HermitianOperator,
    psi_i: &StateVector,
    psi_f: &StateVector,
    grid: TimeGrid,
) -> Result<PassageResult> {
    grid.check()?;
    let ov = overlap(h, psi_i, psi_f)?;
    let n = grid.len();
    let samples: Vec<f64> = (0..n).map(|k| ov.fidelity(grid.at(k))).collect();

    let mut best = PassageResult {
        t_first: 0.0,
        peak_fidelity: samples[0],
        reached: false,
    };
    let mut k = 0;
    while k < n {
        if samples[k] <= 1.0 - BRACKET_TOL {
            k += 1;
            continue;
        }
        let mut peak = k;
        while peak + 1 < n && samples[peak + 1] >= samples[peak] {
            peak += 1;
        }
        let lo = grid.at(peak.saturating_sub(1));
        let hi = grid.at(peak + 1);
        let (t, miss) = golden_section_minimize(|t| ov.infidelity(t), lo, hi, TIME_RESOLUTION);
        let fidelity = ov.fidelity(t);
        if miss <= CONFIRM_TOL {
            return Ok(PassageResult {
                t_first: t,
                peak_fidelity: fidelity,
                reached: true,
            });
        }
        if fidelity > best.peak_fidelity {
            best = PassageResult {
                t_first: t,
                peak_fidelity: fidelity,
                reached: false,
            };
        }
        k = peak + 1;
        while k < n && samples[k] > 1.0 - BRACKET_TOL {
            k += 1;
        }
    }
    if let Some((k, &f)) = samples.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) {
        if f > best.peak_fidelity {
            best = PassageResult {
                t_first: grid.at(k),
                peak_fidelity: f,
                reached: false,
            };
        }
    }
    Ok(best)
}

/// `‖e^{iγ} e^{−iht} U_I − U_F‖_max`, evaluated through the spectrum of `h`.
pub fn gate_residual(
    h: &HermitianOperator,
    u_initial: &ComplexMatrix,
    u_final: &ComplexMatrix,
    t: f64,
    global_phase: f64,
) -> Result<f64> {
    if h.dim() != u_initial.dim() || h.dim() != u_final.dim() {
        return Err(NavError::DimensionMismatch(h.dim(), u_initial.dim()));
    }
    let (values, v) = h.eigh();
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&l| C64::from_polar(1.0, global_phase - l * t)),
    ));
    let evolved = &v * phases * v.adjoint() * u_initial.as_matrix();
    Ok(max_abs_diff(&evolved, u_final.as_matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::canonical_pair;
    use crate::linalg::{pauli_compose, sigma_y};
    use approx::assert_abs_diff_eq;
    use nalgebra::Vector3;

    #[test]
    fn geodesic_first_passage() {
        let (a, b) = canonical_pair(PI / 2.0);
        let h = sigma_y().scale(1.0 / 2f64.sqrt());
        let r = first_passage(&h, &a, &b, TimeGrid { t_max: 10.0, dt: 1e-3 }).unwrap();
        assert!(r.reached);
        assert_abs_diff_eq!(r.t_first, (PI / 2.0) / 2f64.sqrt(), epsilon = 1e-8);
        assert!(r.peak_fidelity >= 1.0 - CONFIRM_TOL);
    }

    #[test]
    fn tilted_axis_never_arrives() {
        let (a, b) = canonical_pair(PI / 2.0);
        let h = pauli_compose(0.0, &(Vector3::new(0.0, 1.0, 1.0).normalize() * 0.7));
        let r = first_passage(&h, &a, &b, TimeGrid { t_max: 100.0, dt: 1e-3 }).unwrap();
        assert!(!r.reached);
        assert!(r.peak_fidelity < 1.0 - CONFIRM_TOL);
    }

    #[test]
    fn curve_endpoints() {
        let (a, b) = canonical_pair(PI / 2.0);
        let h = sigma_y();
        let single = fidelity_curve(&h, &a, &b, TimeGrid { t_max: 0.5, dt: 1.0 }).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].0, 0.0);
        assert_abs_diff_eq!(single[0].1, 0.5, epsilon = 1e-15);
        let curve = fidelity_curve(&h, &a, &b, TimeGrid { t_max: 4.0, dt: 0.01 }).unwrap();
        assert_eq!(curve.len(), 401);
        assert!(curve.iter().all(|&(_, f)| f <= 1.0));
    }

    #[test]
    fn grid_validation() {
        let (a, b) = canonical_pair(1.0);
        let bad = TimeGrid { t_max: 1.0, dt: 0.0 };
        assert!(first_passage(&sigma_y(), &a, &b, bad).is_err());
        assert!(fidelity_curve(&sigma_y(), &a, &b, TimeGrid { t_max: -1.0, dt: 0.1 }).is_err());
    }

    #[test]
    fn refinement_is_stable_under_halving_dt() {
        let (a, b) = canonical_pair(1.3);
        let h = pauli_compose(0.0, &Vector3::new(0.3, 0.5, 0.0));
        let coarse = first_passage(&h, &a, &b, TimeGrid { t_max: 20.0, dt: 2e-3 }).unwrap();
        let fine = first_passage(&h, &a, &b, TimeGrid { t_max: 20.0, dt: 1e-3 }).unwrap();
        assert!(coarse.reached && fine.reached);
        assert!((coarse.t_first - fine.t_first).abs() < 1e-3);
    }

    #[test]
    fn peak_recurs_after_one_period() {
        let (a, b) = canonical_pair(2.0);
        let h = pauli_compose(0.0, &Vector3::new(-0.4, 0.25, 0.0));
        let r = first_passage(&h, &a, &b, TimeGrid::spectral(&h, 2000, 1.05)).unwrap();
        assert!(r.reached);
        let ev = h.eigenvalues();
        let period = 2.0 * PI / (ev[1] - ev[0]);
        assert!(fidelity_at(&h, &a, &b, r.t_first + period).unwrap() >= 1.0 - CONFIRM_TOL);
        let shifted = first_passage(
            &h,
            &a,
            &b,
            TimeGrid {
                t_max: 3.0 * period,
                dt: 1e-3,
            },
        )
        .unwrap();
        assert!((shifted.t_first - r.t_first).abs() < 1e-6);
    }

    #[test]
    fn default_grid_scale() {
        let g = TimeGrid::for_wind(0.0);
        assert_abs_diff_eq!(g.dt, 1e-3 * PI / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(g.t_max, 50.0 * PI / 2f64.sqrt(), epsilon = 1e-12);
    }
}
