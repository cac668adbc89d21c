//! Algebra-level objects: generator sets, structure constants, Jacobi and
//! d-symbol checks, and the catalog of compact simple algebra families.

mod algebra;
mod generators;
mod structure;

pub use algebra::{algebra_catalog, AlgebraId, AlgebraInfo, Family};
pub use generators::{
    su_fundamental, trace_product, verify_generator_set, Check, GeneratorSet, VerificationReport,
    CLOSURE_TOL, HERMITICITY_TOL, ORTHONORMALITY_TOL, TRACELESS_TOL,
};
pub use structure::{
    d_symbols, jacobi_residual, structure_constants, DSymbols, StructureConstants, Tensor3,
};
