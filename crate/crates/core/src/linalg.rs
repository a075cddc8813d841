//! Small dense complex linear algebra: Pauli expansion, Hilbert–Schmidt
//! traces, and exponential/logarithm of Hermitian generators via
//! eigendecomposition.
//!
//! Everything here is sized for qubits and few-level systems (n up to ~8).
//! Matrices are immutable once built.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen, Vector3};
use num_complex::Complex64;

use crate::error::{NavError, Result};

pub type C64 = Complex64;

/// Largest anti-Hermitian part accepted (and then averaged away) when
/// building a [`HermitianOperator`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Largest `‖U†U − I‖_max` accepted for a unitary input.
pub const UNITARY_TOL: f64 = 1e-10;
/// Largest `|‖ψ‖ − 1|` accepted for a state.
pub const NORM_TOL: f64 = 1e-12;

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Dense square complex matrix with `dim >= 2` and finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(NavError::DimensionMismatch(m.nrows(), m.ncols()));
        }
        if m.nrows() < 2 {
            return Err(NavError::Dimension {
                expected: 2,
                found: m.nrows(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(NavError::NonFinite);
        }
        Ok(Self(m))
    }

    /// Builds from row-major rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(NavError::DimensionMismatch(n, bad.len()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self(&self.0 * &other.0))
    }

    pub fn scale(&self, z: C64) -> Self {
        Self(&self.0 * z)
    }

    pub fn apply(&self, psi: &StateVector) -> Result<DVector<C64>> {
        check_dims(self.dim(), psi.dim())?;
        Ok(&self.0 * psi.amplitudes())
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim();
        max_abs_diff(&(self.0.adjoint() * &self.0), &DMatrix::identity(n, n))
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_deviation() <= UNITARY_TOL
    }

    pub fn determinant(&self) -> C64 {
        self.0.clone().determinant()
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| self.0.row(i).iter().copied().collect())
            .collect()
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        Err(NavError::DimensionMismatch(a, b))
    } else {
        Ok(())
    }
}

/// Hermitian operator, stored exactly Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    /// Accepts `m` if `‖M − M†‖_max ≤ 1e-12` and stores `(M + M†)/2`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let adj = m.0.adjoint();
        let deviation = max_abs_diff(&m.0, &adj);
        if deviation > HERMITIAN_TOL {
            return Err(NavError::NotHermitian { deviation });
        }
        Ok(Self::hermitize(m.0))
    }

    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        Self::new(ComplexMatrix::new(m)?)
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        Self::new(ComplexMatrix::from_rows(rows)?)
    }

    // Callers guarantee the input is Hermitian up to roundoff.
    pub(crate) fn hermitize(m: DMatrix<C64>) -> Self {
        let adj = m.adjoint();
        Self(ComplexMatrix((m + adj) * c(0.5, 0.0)))
    }

    pub fn zero(dim: usize) -> Self {
        Self(ComplexMatrix(DMatrix::zeros(dim, dim)))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0 .0
    }

    pub fn trace(&self) -> f64 {
        self.as_matrix().trace().re
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::hermitize(self.as_matrix() + other.as_matrix()))
    }

    pub fn sub(&self, other: &HermitianOperator) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::hermitize(self.as_matrix() - other.as_matrix()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::hermitize(self.as_matrix() * c(s, 0.0))
    }

    /// Splits into `(tr/n, traceless part)`.
    pub fn split_trace(&self) -> (f64, HermitianOperator) {
        let n = self.dim();
        let shift = self.trace() / n as f64;
        let traceless = Self::hermitize(self.as_matrix() - DMatrix::<C64>::identity(n, n) * c(shift, 0.0));
        (shift, traceless)
    }

    /// Ascending eigenvalues with matching orthonormal eigenvector columns.
    pub fn eigh(&self) -> (Vec<f64>, DMatrix<C64>) {
        let eig = SymmetricEigen::new(self.as_matrix().clone());
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |i, j| eig.eigenvectors[(i, order[j])]);
        (values, vectors)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigh().0
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.0.rows()
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(DVector<C64>);

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let v = DVector::from_vec(amplitudes);
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(NavError::NonFinite);
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(NavError::NotNormalized { norm });
        }
        Ok(Self(v))
    }

    /// Rescales to unit norm; rejects the zero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(NavError::NotNormalized { norm });
        }
        Ok(Self(v / c(norm, 0.0)))
    }

    pub fn from_real(re: &[f64]) -> Result<Self> {
        Self::new(re.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.0
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn with_phase(&self, gamma: f64) -> Self {
        Self(&self.0 * C64::from_polar(1.0, gamma))
    }
}

pub fn sigma_x() -> HermitianOperator {
    pauli_compose(0.0, &Vector3::new(1.0, 0.0, 0.0))
}

pub fn sigma_y() -> HermitianOperator {
    pauli_compose(0.0, &Vector3::new(0.0, 1.0, 0.0))
}

pub fn sigma_z() -> HermitianOperator {
    pauli_compose(0.0, &Vector3::new(0.0, 0.0, 1.0))
}

/// `a0·I + a·σ` as a 2×2 Hermitian operator.
pub fn pauli_compose(a0: f64, a: &Vector3<f64>) -> HermitianOperator {
    let m = DMatrix::from_row_slice(2, 2, &[c(a0 + a.z, 0.0), c(a.x, -a.y), c(a.x, a.y), c(a0 - a.z, 0.0)]);
    HermitianOperator(ComplexMatrix(m))
}

/// Inverse of [`pauli_compose`].
pub fn pauli_decompose(h: &HermitianOperator) -> Result<(f64, Vector3<f64>)> {
    if h.dim() != 2 {
        return Err(NavError::Dimension {
            expected: 2,
            found: h.dim(),
        });
    }
    let m = h.as_matrix();
    let a0 = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
    let az = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
    let off = m[(1, 0)];
    Ok((a0, Vector3::new(off.re, off.im, az)))
}

/// `Re tr(a·b)`.
pub fn hs_trace_product(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let (ma, mb) = (a.as_matrix(), b.as_matrix());
    let n = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += ma[(i, j)] * mb[(j, i)];
        }
    }
    debug_assert!(acc.im.abs() <= 1e-12 * (1.0 + ma.norm() * mb.norm()));
    Ok(acc.re)
}

/// `e^{-iht}`. Closed form for qubits, eigendecomposition otherwise.
pub fn expm_unitary(h: &HermitianOperator, t: f64) -> ComplexMatrix {
    if h.dim() == 2 {
        expm_unitary_qubit(h, t)
    } else {
        expm_unitary_eigen(h, t)
    }
}

/// `e^{-iht} = V diag(e^{-iλt}) V†`, any dimension.
pub fn expm_unitary_eigen(h: &HermitianOperator, t: f64) -> ComplexMatrix {
    let (values, v) = h.eigh();
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&l| C64::from_polar(1.0, -l * t)),
    ));
    ComplexMatrix(&v * phases * v.adjoint())
}

/// `e^{-i a0 t}(cos(|r|t) I − i sin(|r|t) r̂·σ)` for `h = a0 I + r·σ`.
pub fn expm_unitary_qubit(h: &HermitianOperator, t: f64) -> ComplexMatrix {
    let (a0, r) = pauli_decompose(h).expect("qubit operator");
    let len = r.norm();
    let phase = C64::from_polar(1.0, -a0 * t);
    let (cos, sin) = ((len * t).cos(), (len * t).sin());
    let n = if len > 0.0 { r / len } else { Vector3::zeros() };
    let rot = pauli_compose(0.0, &n).as_matrix() * (-I * sin);
    let m = (DMatrix::<C64>::identity(2, 2) * c(cos, 0.0) + rot) * phase;
    ComplexMatrix(m)
}

/// Spectral data of a unitary: `u = V diag(e^{-i x_k}) V†` with
/// principal phases `x_k ∈ (−π, π]`, sorted descending.
#[derive(Debug, Clone)]
pub struct Eigenphases {
    pub phases: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl Eigenphases {
    /// Generator `X` with `e^{-iX} = u`, phase `k` shifted by `2π·offsets[k]`.
    pub fn generator(&self, offsets: &[i64]) -> Result<HermitianOperator> {
        let n = self.phases.len();
        if offsets.len() != n {
            return Err(NavError::Dimension {
                expected: n,
                found: offsets.len(),
            });
        }
        let diag = DVector::from_iterator(
            n,
            self.phases
                .iter()
                .zip(offsets)
                .map(|(&x, &k)| c(x + 2.0 * PI * k as f64, 0.0)),
        );
        let v = &self.vectors;
        Ok(HermitianOperator::hermitize(
            v * DMatrix::from_diagonal(&diag) * v.adjoint(),
        ))
    }

    /// Sum of the principal phases; a multiple of 2π when `det u = 1`.
    pub fn principal_sum(&self) -> f64 {
        self.phases.iter().sum()
    }
}

/// Common eigenbasis of a unitary via a generic Hermitian combination of its
/// real and imaginary parts (the two commute for normal matrices).
pub fn eigenphases(u: &ComplexMatrix) -> Result<Eigenphases> {
    let deviation = u.unitarity_deviation();
    if deviation > UNITARY_TOL {
        return Err(NavError::NotUnitary { deviation });
    }
    let n = u.dim();
    let m = u.as_matrix();
    let adj = m.adjoint();
    let re_part = (m + &adj) * c(0.5, 0.0);
    let im_part = (m - &adj) * c(0.0, -0.5);
    // Irrational mixing weights; a later weight catches accidental
    // collisions of distinct eigenvalues under the first.
    for weight in [
        0.618_033_988_749_894_9,
        std::f64::consts::SQRT_2,
        -0.367_879_441_171_442_3,
    ] {
        let k = HermitianOperator::hermitize(&re_part + &im_part * c(weight, 0.0));
        let (_, v) = k.eigh();
        let lambdas: Vec<C64> = (0..n)
            .map(|j| {
                let col = v.column(j);
                let z = col.dotc(&(m * col));
                z / z.norm()
            })
            .collect();
        let recon = &v * DMatrix::from_diagonal(&DVector::from_vec(lambdas.clone())) * v.adjoint();
        if max_abs_diff(&recon, m) > UNITARY_TOL {
            continue;
        }
        let mut pairs: Vec<(f64, usize)> = lambdas
            .iter()
            .enumerate()
            .map(|(j, l)| (principal_phase(-l.arg()), j))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let vectors = DMatrix::from_fn(n, n, |i, j| v[(i, pairs[j].1)]);
        return Ok(Eigenphases {
            phases: pairs.iter().map(|p| p.0).collect(),
            vectors,
        });
    }
    Err(NavError::NotUnitary { deviation })
}

/// Maps an angle into `(−π, π]`.
pub fn principal_phase(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// `X` with `u = e^{-iX}`; see [`Eigenphases::generator`] for the branch.
pub fn logm_unitary(u: &ComplexMatrix, branch_offsets: &[i64]) -> Result<HermitianOperator> {
    eigenphases(u)?.generator(branch_offsets)
}
