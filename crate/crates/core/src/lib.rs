//! Time-optimal time-independent Hamiltonians for quantum state and gate
//! transport under an uncontrollable background Hamiltonian.
//!
//! The control budget is the full-throttle condition `tr(H1²) = 1` on the
//! control `H1 = H − H0`, with `tr(H0²) < 1`. For a qubit the optimal total
//! Hamiltonian is found by a one-parameter search over rotation axes
//! ([`navigator`]); gates have a closed form ([`gate`]); n-level tasks whose
//! background preserves the state plane reduce to the qubit case
//! ([`subspace`]). [`oracle`] checks all of it by direct time evolution.

pub mod bloch;
pub mod error;
pub mod gate;
pub mod golden;
pub mod linalg;
pub mod navigator;
pub mod oracle;
pub mod subspace;

pub use error::{NavError, Result};
