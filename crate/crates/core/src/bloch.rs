//! Bloch-sphere geometry (radius ½) and the canonical frame in which the
//! initial and target states sit on the xz-plane, symmetric about the
//! equator.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::error::{NavError, Result};
use crate::linalg::{pauli_compose, pauli_decompose, HermitianOperator, StateVector};

/// Below this separation the transport task is trivial.
pub const DEGENERATE_THETA: f64 = 1e-9;
/// Within this distance of π the states are treated as antipodal.
pub const ANTIPODAL_MARGIN: f64 = 1e-9;
/// Pauli-vector length under which the background is treated as absent.
pub const CALM_THRESHOLD: f64 = 1e-15;

/// Bloch vector of a pure qubit state, length ½.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub Vector3<f64>);

impl BlochVector {
    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }
}

/// `½(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`. Insensitive to the global phase of `psi`.
pub fn state_to_bloch(psi: &StateVector) -> Result<BlochVector> {
    if psi.dim() != 2 {
        return Err(NavError::Dimension {
            expected: 2,
            found: psi.dim(),
        });
    }
    let a = psi.amplitudes()[0];
    let b = psi.amplitudes()[1];
    let cross = a.conj() * b;
    Ok(BlochVector(Vector3::new(
        cross.re,
        cross.im,
        0.5 * (a.norm_sqr() - b.norm_sqr()),
    )))
}

/// `θ = 2 arccos |⟨ψ_I|ψ_F⟩|`, evaluated through `atan2` so that it stays
/// accurate near 0 and π.
pub fn angular_separation(psi_i: &StateVector, psi_f: &StateVector) -> Result<f64> {
    if psi_i.dim() != psi_f.dim() {
        return Err(NavError::DimensionMismatch(psi_i.dim(), psi_f.dim()));
    }
    let overlap = psi_i.inner(psi_f);
    let perp = psi_f.amplitudes() - psi_i.amplitudes() * overlap;
    Ok(2.0 * perp.norm().atan2(overlap.norm()))
}

/// Proper rotation taking lab Bloch coordinates to canonical ones, where
/// `ψ_I ↦ ½(cos θ/2, 0, sin θ/2)` and `ψ_F ↦ ½(cos θ/2, 0, −sin θ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalFrame {
    pub rotation: Matrix3<f64>,
    pub theta: f64,
    /// Set when the states are antipodal and the x-axis was picked by the
    /// least-aligned-coordinate-axis rule.
    pub antipodal: bool,
}

impl CanonicalFrame {
    pub fn identity(theta: f64) -> Self {
        Self {
            rotation: Matrix3::identity(),
            theta,
            antipodal: false,
        }
    }

    pub fn to_canonical(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * v
    }

    pub fn to_lab(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation.transpose() * v
    }

    /// Canonical Bloch vectors of the initial and target states.
    pub fn canonical_states(&self) -> (Vector3<f64>, Vector3<f64>) {
        let (s, c) = (0.5 * self.theta).sin_cos();
        (
            Vector3::new(0.5 * c, 0.0, 0.5 * s),
            Vector3::new(0.5 * c, 0.0, -0.5 * s),
        )
    }
}

/// The state pair `(cos ¼(π∓θ), sin ¼(π∓θ))`, already in canonical position.
pub fn canonical_pair(theta: f64) -> (StateVector, StateVector) {
    let a = 0.25 * (PI - theta);
    let b = 0.25 * (PI + theta);
    (
        StateVector::from_real(&[a.cos(), a.sin()]).expect("unit vector"),
        StateVector::from_real(&[b.cos(), b.sin()]).expect("unit vector"),
    )
}

pub fn build_canonical_frame(psi_i: &StateVector, psi_f: &StateVector) -> Result<CanonicalFrame> {
    let theta = angular_separation(psi_i, psi_f)?;
    if theta < DEGENERATE_THETA {
        return Err(NavError::DegenerateTask { theta });
    }
    let bi = state_to_bloch(psi_i)?.0;
    let bf = state_to_bloch(psi_f)?.0;

    let (x_axis, z_axis, theta, antipodal) = if theta > PI - ANTIPODAL_MARGIN {
        let z = bi.normalize();
        (orthogonal_unit(&z), z, PI, true)
    } else {
        ((bi + bf).normalize(), (bi - bf).normalize(), theta, false)
    };
    let y_axis = z_axis.cross(&x_axis);
    let rotation = Matrix3::from_rows(&[x_axis.transpose(), y_axis.transpose(), z_axis.transpose()]);
    Ok(CanonicalFrame {
        rotation,
        theta,
        antipodal,
    })
}

// Coordinate axis least aligned with `v`, Gram-Schmidt-corrected; ties go
// to the lowest index.
fn orthogonal_unit(v: &Vector3<f64>) -> Vector3<f64> {
    let k = (0..3).min_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap_or(0);
    let mut e = Vector3::zeros();
    e[k] = 1.0;
    (e - v * v.dot(&e)).normalize()
}

/// Background Hamiltonian `√(ε/2)(x σx + y σy + z σz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindSpec {
    epsilon: f64,
    axis: Vector3<f64>,
}

impl WindSpec {
    pub fn new(epsilon: f64, axis: Vector3<f64>) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(NavError::InvalidParameter(format!(
                "wind strength must be positive, got {epsilon}"
            )));
        }
        if epsilon >= 1.0 {
            return Err(NavError::WindTooStrong { epsilon });
        }
        if (axis.norm_squared() - 1.0).abs() > 1e-12 {
            return Err(NavError::InvalidParameter(format!(
                "wind axis must be a unit vector, |axis|^2 = {}",
                axis.norm_squared()
            )));
        }
        Ok(Self { epsilon, axis })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn axis(&self) -> &Vector3<f64> {
        &self.axis
    }

    pub fn pauli_vector(&self) -> Vector3<f64> {
        self.axis * (0.5 * self.epsilon).sqrt()
    }

    pub fn operator(&self) -> HermitianOperator {
        pauli_compose(0.0, &self.pauli_vector())
    }
}

/// Background in canonical coordinates; `Calm` when it vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wind {
    Calm,
    Blowing(WindSpec),
}

impl Wind {
    pub fn epsilon(&self) -> f64 {
        match self {
            Wind::Calm => 0.0,
            Wind::Blowing(w) => w.epsilon,
        }
    }

    pub fn operator(&self) -> HermitianOperator {
        match self {
            Wind::Calm => HermitianOperator::zero(2),
            Wind::Blowing(w) => w.operator(),
        }
    }
}

/// Result of [`transform_wind`]: the traceless wind in canonical
/// coordinates, plus `tr(h0)/2`, which only contributes a global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramedWind {
    pub wind: Wind,
    pub trace_part: f64,
}

pub fn transform_wind(frame: &CanonicalFrame, h0: &HermitianOperator) -> Result<FramedWind> {
    let (trace_part, a) = pauli_decompose(h0)?;
    let len = a.norm();
    if len <= CALM_THRESHOLD {
        return Ok(FramedWind {
            wind: Wind::Calm,
            trace_part,
        });
    }
    let epsilon = 2.0 * len * len;
    if epsilon >= 1.0 {
        return Err(NavError::WindTooStrong { epsilon });
    }
    let axis = frame.to_canonical(&(a / len)).normalize();
    Ok(FramedWind {
        wind: Wind::Blowing(WindSpec { epsilon, axis }),
        trace_part,
    })
}
