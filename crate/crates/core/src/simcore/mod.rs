//! State-vector and density-matrix simulation, Z-string read-outs, partial
//! traces, Uhlmann fidelity and the exact-evolution oracle.

use thiserror::Error;

use crate::cosmology::CosmologyError;
use crate::paulicompile::CompileError;

mod density;
mod fidelity;
mod observables;
mod oracle;
mod state;
mod unitary;

pub use density::DensityMatrix;
pub use fidelity::{
    fidelity, fidelity_first_order, partial_trace, partial_trace_mode, Mode, StateRef,
};
pub use observables::{
    expectation, expectation_from_probabilities, particle_number,
    particle_number_from_expectations, particle_number_observables, particle_number_terms,
    sample_expectations, BasisProbabilities, ObservableString,
};
pub use oracle::{
    evolve_exact, exact_oracle_state, interaction_matrix, theoretical_reduced_state, VACUUM,
};
pub use unitary::{circuit_unitary, pauli_matrix};
pub use state::{
    init_state, qubit_mask, run_circuit, single_qubit_matrix, Mat2, StateVector, PAULI_X,
    PAULI_Y, PAULI_Z,
};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("state not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("malformed bitstring {0:?}")]
    Bitstring(String),
    #[error("invalid density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("bad observable: {0}")]
    Observable(String),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error(transparent)]
    Cosmology(#[from] CosmologyError),
    #[error(transparent)]
    Compile(#[from] CompileError),
}
