use std::fmt;

use qnav::NavError;

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Solver(NavError),
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Solver(NavError::WindTooStrong { .. }) => 3,
            CliError::Solver(NavError::DegenerateTask { .. }) => 4,
            CliError::Solver(NavError::NoOpGate) => 5,
            CliError::Solver(_) => 2,
        }
    }
}

impl From<NavError> for CliError {
    fn from(e: NavError) -> Self {
        CliError::Solver(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(msg) => write!(f, "invalid input: {msg}"),
            CliError::Solver(NavError::DegenerateTask { theta }) => write!(
                f,
                "degenerate task: states coincide (theta = {theta:e}), voyage time is 0"
            ),
            CliError::Solver(NavError::NoOpGate) => write!(
                f,
                "no-op gate: the target equals the initial gate up to phase on this branch; try --max-branch 1"
            ),
            CliError::Solver(e) => write!(f, "{e}"),
            CliError::VerifyFailed(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}
