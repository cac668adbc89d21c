//! Questions as generators of compact Lie algebra representations.
//!
//! The crate is layered bottom-up:
//!
//! * [`kernel`]: dense complex matrices, Hermitian eigensolver, spectral exponential.
//! * [`lie`]: generator sets, structure constants, Jacobi and d-symbol checks,
//!   and the catalog of compact simple algebra families.
//! * [`reps`]: irreps, conjugates, adjoints, tensor products, Casimirs, weights
//!   and commutant-based decomposition into irreducibles.
//! * [`inference`]: Born-rule outcome distributions, Lüders updates, joint
//!   commuting questions, unitary evolution and seeded sequential simulation.
//! * [`scenario`]: named option sets, scenario documents and sessions.

pub mod error;
pub mod inference;
pub mod kernel;
pub mod lie;
pub mod reps;
pub mod scenario;

pub use error::{Error, Result};
pub use kernel::ComplexMatrix;
