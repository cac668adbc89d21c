//! Representations: construction, Casimirs, weights and decomposition into irreps.

mod casimir;
mod catalog;
mod construct;
mod decompose;

pub use casimir::{
    cartan_weights, casimir_scalar, cubic_casimir, d_symbols_for, quadratic_casimir,
    rep_equivalent, scalar_deviation, weight_multisets_match, weights,
};
pub use catalog::{build_irrep_catalog, IrrepCatalog, IrrepLabel};
pub use construct::{adjoint_of, adjoint_rep, conjugate_rep, su2_spin_irrep, tensor_rep};
pub use decompose::{
    decompose, invariant_blocks, label_blocks, match_label, BlockSplit, DecompositionPart,
    DecompositionResult, InvariantBlock, PartSummary, BLOCK_RESIDUAL_TOL, DECOMPOSE_SEED,
    LABEL_RTOL, NULL_SPACE_RTOL,
};
