//! Named questions over a representation, initial states, and sessions that
//! thread a state through asks and evolutions.

mod builtin;
mod document;
mod model;
mod session;

pub use builtin::{builtin_document, builtin_scenario, BUILTIN_SCENARIOS};
pub use document::{InitialSpec, RepresentationKind, RepresentationSpec, ScenarioDocument};
pub use model::{
    load_scenario, load_scenario_json, resolve_question, OptionInfo, QuestionRef, Scenario,
    ScenarioInfo,
};
pub use session::{
    generate_seed, new_session, AskOutcome, Event, EventKind, Session, SessionSnapshot,
    StateSummary, REPLAY_TOL,
};
