//! Questions as observables: Born probabilities, collapse on answering,
//! joint answers of commuting questions, evolution and seeded simulation.

mod measure;
mod observable;
mod simulate;
mod state;

pub use measure::{
    ask, evolve, expectation, joint_peek, peek, JointDistribution, JointOutcome, Outcome,
    OutcomeDistribution,
};
pub use observable::{
    compose_question, normalize_coefficients, Observable, QuestionSummary, COEFFICIENT_NORM_TOL,
};
pub use simulate::{
    simulate_sequence, simulate_sequence_serial, trial_rng, FrequencyEntry, FrequencyTable,
};
pub use state::{StateVector, NORM_TOL};

/// Probabilities below this are reported as zero and never sampled.
pub const PROBABILITY_FLOOR: f64 = 1e-14;
