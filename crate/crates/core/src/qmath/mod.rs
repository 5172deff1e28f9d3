//! Complex linear algebra and multi-qubit state plumbing: matrices, a
//! Hermitian eigensolver, states, partial traces, seeded Haar sampling, and
//! JSON interchange.

pub mod json;
pub mod matrix;
pub mod random;
pub mod state;

pub use json::{state_from_json, DensityMatrixJson, LoadedState, PureStateJson};
pub use matrix::{
    dagger, expi_herm, herm_eigs, hermiticity_error, identity, kron, kron_vec, max_abs_diff,
    pauli_x, pauli_y, pauli_z, psd_sqrt, unitarity_error, CMat, CVec, EIG_CLAMP_TOL, HERM_TOL,
};
pub use random::{derive_seed, haar_random_pure, haar_unitary, random_mixed, MAX_SAMPLED_QUBITS};
pub use state::{partial_trace, purify, DensityMatrix, PureState, QubitCut};
