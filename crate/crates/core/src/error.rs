use thiserror::Error;

pub type Result<T> = std::result::Result<T, NavError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NavError {
    #[error("dimension error: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("initial and target states coincide (theta = {theta:e}); any control reaches the target at tau = 0")]
    DegenerateTask { theta: f64 },

    #[error("background Hamiltonian too strong: tr(H0^2) = {epsilon} >= 1")]
    WindTooStrong { epsilon: f64 },

    #[error("target gate equals the initial gate on this branch; tr(X^2) = 0")]
    NoOpGate,

    #[error("background Hamiltonian does not leave the state subspace invariant (residual {residual:e})")]
    NotInvariant { residual: f64 },

    #[error("branch {branch:?} does not give a traceless generator (trace {trace:e})")]
    BranchNotTraceless { branch: Vec<i64>, trace: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
