//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by certilab operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two operands that must share a Hilbert space dimension do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A scalar or structural argument is outside its admissible range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A qubit index does not address a qubit of the system.
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    /// A matrix required to be Hermitian deviates beyond tolerance.
    #[error("matrix is not Hermitian: max |M - M^dag| element = {0:.3e}")]
    NotHermitian(f64),

    /// A state vector violates its invariants.
    #[error("invalid state vector: {0}")]
    InvalidState(String),

    /// A density matrix violates its invariants.
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// A computation was requested beyond the configured qubit cap.
    #[error("qubit cap exceeded: requested N = {requested}, cap = {cap}")]
    CapExceeded { requested: usize, cap: usize },

    /// An operation requiring a unique ground state met a degenerate one.
    #[error("ground space is {0}-fold degenerate; a unique ground state is required")]
    DegenerateGroundSpace(usize),

    /// A spectral gap is too small for the requested bound to apply.
    #[error("spectral gap {gap:.3e} is below the threshold {threshold:.3e}")]
    GapBelowThreshold { gap: f64, threshold: f64 },

    /// Malformed serialized input (scenario files, Hamiltonian lists).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
