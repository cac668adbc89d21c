//! Dense complex linear algebra: matrices, Hermitian spectra, commutators,
//! Kronecker products and spectral exponentials.

mod eigen;
mod matrix;

pub(crate) use eigen::{cluster_sorted, hermitize};
pub use eigen::{
    commutes, fix_phase, hermitian_eigen, simultaneous_eigenbasis, spectral_exp, unitary_exp,
    EigenSystem, SimultaneousEigenbasis, CLUSTER_RTOL, MAX_SWEEPS,
};
pub use matrix::{anticommutator, commutator, inner, kron, vec_norm, ComplexMatrix, I, ONE, ZERO};
