//! Hamiltonians that copy the basis states of a control qubit onto `n` copy
//! qubits, their propagators, and checkers for the resulting gates.
//!
//! Units: hbar = 1, so energies are measured in units of `1 / dt`.

pub mod cli;
pub mod error;
pub mod evolution;
pub mod operator;
pub mod pauli;
pub mod selftest;
pub mod synthesis;
pub mod verify;

pub use error::{Error, Result};
pub use operator::{frobenius_distance, hermitian_eig, propagator, BasisState, Ket, Operator};
