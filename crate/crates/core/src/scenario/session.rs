use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::document::ScenarioDocument;
use super::model::{load_scenario, resolve_question, QuestionRef, Scenario};
use crate::error::{Error, Result};
use crate::inference::{
    evolve, expectation, joint_peek, peek, trial_rng, JointDistribution, OutcomeDistribution,
    StateVector,
};

/// Replayed amplitudes must match the stored ones this closely.
pub const REPLAY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EventKind {
    Ask {
        question: QuestionRef,
        coefficients: Vec<f64>,
        outcome: f64,
        /// Uniform variate that selected the outcome.
        draw: f64,
    },
    Evolve {
        question: QuestionRef,
        coefficients: Vec<f64>,
        theta: f64,
    },
    Reset,
}

/// One history entry. The ask draw comes from stream `step` of the session seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub step: u64,
    #[serde(flatten)]
    pub kind: EventKind,
    pub seed: u64,
    /// Wall-clock milliseconds since the Unix epoch; not part of replay.
    pub timestamp_ms: u64,
}

impl Event {
    /// The event with its timestamp zeroed, for reproducibility comparisons.
    pub fn without_timestamp(&self) -> Event {
        Event {
            timestamp_ms: 0,
            ..self.clone()
        }
    }
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// The persisted form of a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionSnapshot {
    pub scenario: ScenarioDocument,
    pub amplitudes: Vec<Complex64>,
    pub history: Vec<Event>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateSummary {
    pub amplitudes: Vec<Complex64>,
    /// `|ψ_i|²` per basis direction.
    pub probabilities: Vec<f64>,
    /// `⟨ψ|q|ψ⟩` for every named question.
    pub expectations: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AskOutcome {
    pub outcome: f64,
    pub distribution_before: OutcomeDistribution,
    pub event: Event,
}

/// A scenario, a current state and the events that produced it.
#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    scenario: Arc<Scenario>,
    seed: u64,
    state: StateVector,
    history: Vec<Event>,
}

/// Fresh seed for callers that do not supply one.
pub fn generate_seed() -> u64 {
    rand::rng().random()
}

pub fn new_session(scenario: Arc<Scenario>, id: impl Into<String>, seed: u64) -> Session {
    Session {
        id: id.into(),
        state: scenario.initial_state().clone(),
        scenario,
        seed,
        history: Vec::new(),
    }
}

impl Session {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn scenario(&self) -> &Arc<Scenario> {
        &self.scenario
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn history(&self) -> &[Event] {
        &self.history
    }

    fn next_step(&self) -> u64 {
        self.history.len() as u64
    }

    pub fn peek(&self, question: &QuestionRef) -> Result<OutcomeDistribution> {
        peek(&self.state, &resolve_question(&self.scenario, question)?)
    }

    pub fn joint_peek(&self, questions: &[QuestionRef]) -> Result<JointDistribution> {
        let qs = questions
            .iter()
            .map(|q| resolve_question(&self.scenario, q))
            .collect::<Result<Vec<_>>>()?;
        joint_peek(&self.state, &qs.iter().collect::<Vec<_>>())
    }

    pub fn apply_ask(&mut self, question: &QuestionRef) -> Result<AskOutcome> {
        let q = resolve_question(&self.scenario, question)?;
        let step = self.next_step();
        let distribution_before = peek(&self.state, &q)?;
        let draw: f64 = trial_rng(self.seed, step).random();
        let k = distribution_before.index_for(draw);
        let chosen = &distribution_before.outcomes[k];
        let post = chosen
            .post_state
            .clone()
            .ok_or_else(|| Error::BadParameter("state has no support on any answer".into()))?;
        let event = Event {
            step,
            kind: EventKind::Ask {
                question: question.clone(),
                coefficients: q.coefficients().to_vec(),
                outcome: chosen.eigenvalue,
                draw,
            },
            seed: self.seed,
            timestamp_ms: now_ms(),
        };
        let outcome = chosen.eigenvalue;
        self.state = post;
        self.history.push(event.clone());
        Ok(AskOutcome {
            outcome,
            distribution_before,
            event,
        })
    }

    pub fn apply_evolve(&mut self, question: &QuestionRef, theta: f64) -> Result<Event> {
        if !theta.is_finite() {
            return Err(Error::validation("theta", "must be finite"));
        }
        let q = resolve_question(&self.scenario, question)?;
        self.state = evolve(&self.state, &q, theta)?;
        let event = Event {
            step: self.next_step(),
            kind: EventKind::Evolve {
                question: question.clone(),
                coefficients: q.coefficients().to_vec(),
                theta,
            },
            seed: self.seed,
            timestamp_ms: now_ms(),
        };
        self.history.push(event.clone());
        Ok(event)
    }

    pub fn reset(&mut self) -> Event {
        self.state = self.scenario.initial_state().clone();
        let event = Event {
            step: self.next_step(),
            kind: EventKind::Reset,
            seed: self.seed,
            timestamp_ms: now_ms(),
        };
        self.history.push(event.clone());
        event
    }

    pub fn state_summary(&self) -> StateSummary {
        let expectations = self
            .scenario
            .question_names()
            .iter()
            .filter_map(|name| {
                let q = self.scenario.question(name)?;
                Some((name.clone(), expectation(&self.state, q).ok()?))
            })
            .collect();
        StateSummary {
            amplitudes: self.state.amplitudes().to_vec(),
            probabilities: self
                .state
                .amplitudes()
                .iter()
                .map(|a| a.norm_sqr())
                .collect(),
            expectations,
        }
    }

    pub fn snapshot(&self) -> SessionSnapshot {
        SessionSnapshot {
            scenario: self.scenario.document().clone(),
            amplitudes: self.state.amplitudes().to_vec(),
            history: self.history.clone(),
            seed: self.seed,
        }
    }

    /// Rebuilds a session by replaying its history, checking every recorded
    /// answer and the final amplitudes.
    pub fn restore(id: impl Into<String>, snapshot: &SessionSnapshot) -> Result<Session> {
        let scenario = Arc::new(load_scenario(snapshot.scenario.clone())?);
        let mut session = new_session(scenario, id, snapshot.seed);
        session.replay(&snapshot.history)?;
        let stored = StateVector::new(snapshot.amplitudes.clone())
            .map_err(|e| Error::validation("amplitudes", e.to_string()))?;
        let diff = session
            .state
            .amplitudes()
            .iter()
            .zip(stored.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if stored.dim() != session.state.dim() || diff > REPLAY_TOL {
            return Err(Error::validation(
                "amplitudes",
                format!("replayed state differs from the stored one by {diff:.3e}"),
            ));
        }
        session.history = snapshot.history.clone();
        Ok(session)
    }

    fn replay(&mut self, history: &[Event]) -> Result<()> {
        for (i, event) in history.iter().enumerate() {
            let path = format!("history[{i}]");
            if event.step != i as u64 || event.seed != self.seed {
                return Err(Error::validation(
                    path,
                    "step or seed does not match its position",
                ));
            }
            match &event.kind {
                EventKind::Ask {
                    question, outcome, ..
                } => {
                    let got = self.apply_ask(question)?;
                    if (got.outcome - outcome).abs() > REPLAY_TOL {
                        return Err(Error::validation(
                            path,
                            format!(
                                "replay answered {} where {outcome} was recorded",
                                got.outcome
                            ),
                        ));
                    }
                }
                EventKind::Evolve {
                    question, theta, ..
                } => {
                    self.apply_evolve(question, *theta)?;
                }
                EventKind::Reset => {
                    self.reset();
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin_scenario;

    fn child() -> Arc<Scenario> {
        Arc::new(builtin_scenario("child-su2").unwrap())
    }

    #[test]
    fn steps_and_streams() {
        let mut s = new_session(child(), "a", 5);
        s.apply_ask(&"cola".into()).unwrap();
        s.apply_evolve(&"water".into(), 0.3).unwrap();
        s.reset();
        let steps: Vec<u64> = s.history().iter().map(|e| e.step).collect();
        assert_eq!(steps, [0, 1, 2]);
        assert_eq!(s.state(), s.scenario().initial_state());
    }

    #[test]
    fn ask_draw_comes_from_the_step_stream() {
        let mut s = new_session(child(), "a", 77);
        let out = s.apply_ask(&"water".into()).unwrap();
        let EventKind::Ask { draw, .. } = out.event.kind else {
            panic!()
        };
        assert_eq!(draw, trial_rng(77, 0).random::<f64>());
    }

    #[test]
    fn unknown_questions() {
        let mut s = new_session(child(), "a", 1);
        assert!(matches!(
            s.apply_ask(&"tea".into()),
            Err(Error::UnknownName(_))
        ));
        assert!(s.history().is_empty());
        assert!(matches!(
            s.apply_evolve(&QuestionRef::Coefficients(vec![1.0, 1.0, 0.0]), 1.0),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn restore_rejects_tampered_history() {
        let mut s = new_session(child(), "a", 3);
        s.apply_ask(&"cola".into()).unwrap();
        let mut snap = s.snapshot();
        if let EventKind::Ask { outcome, .. } = &mut snap.history[0].kind {
            *outcome = -*outcome;
        }
        assert!(matches!(
            Session::restore("b", &snap),
            Err(Error::Validation { .. })
        ));
    }
}
