//! Operations shared by the command line and the HTTP service. Both front
//! ends call these and serialize the returned documents unchanged.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use entwine_core::inference::{
    simulate_sequence, FrequencyTable, JointDistribution, OutcomeDistribution,
};
use entwine_core::lie::{
    jacobi_residual, structure_constants, verify_generator_set, AlgebraId, GeneratorSet,
    VerificationReport,
};
use entwine_core::reps::{
    build_irrep_catalog, invariant_blocks, label_blocks, tensor_rep, IrrepCatalog, PartSummary,
};
use entwine_core::scenario::{
    builtin_scenario, load_scenario, Event, QuestionRef, Scenario, ScenarioDocument, ScenarioInfo,
    Session, StateSummary, BUILTIN_SCENARIOS,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{ApiError, ErrorCode};

/// Largest representation `decompose` accepts. The commutant solve grows
/// quickly with dimension; 81 covers `8 ⊗ 8` and `27 ⊗ 3`.
pub const MAX_DECOMPOSE_DIM: usize = 81;

/// Jacobi residual bound used by `verify`, scaled by `max(1, max|f|)²`.
pub const JACOBI_TOL: f64 = 1e-12;

/// Parses JSON into `T`, reporting the failing field path as a schema error.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &[u8]) -> Result<T, ApiError> {
    let de = &mut serde_json::Deserializer::from_slice(text);
    serde_path_to_error::deserialize(de).map_err(ApiError::schema)
}

fn prefixed(err: ApiError, prefix: &str) -> ApiError {
    let path = match err.path.as_deref() {
        None | Some("") | Some(".") => prefix.to_string(),
        Some(p) => format!("{prefix}.{p}"),
    };
    err.at(path)
}

/// A scenario given either as a built-in name or as an inline document.
pub fn scenario_from_value(value: &Value) -> Result<Scenario, ApiError> {
    match value {
        Value::String(name) => Ok(builtin_scenario(name)?),
        Value::Object(_) => {
            let doc: ScenarioDocument = serde_path_to_error::deserialize(value)
                .map_err(|e| prefixed(ApiError::schema(e), "scenario"))?;
            load_scenario(doc).map_err(|e| prefixed(e.into(), "scenario"))
        }
        _ => Err(
            ApiError::new(ErrorCode::Schema, "expected a scenario name or document").at("scenario"),
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioListing {
    pub name: String,
    pub description: Option<String>,
    pub algebra: String,
    pub d_r: usize,
    pub questions: Vec<String>,
}

pub fn list_scenarios() -> Result<Vec<ScenarioListing>, ApiError> {
    BUILTIN_SCENARIOS
        .iter()
        .map(|name| {
            let s = builtin_scenario(name)?;
            Ok(ScenarioListing {
                name: s.name().to_string(),
                description: s.document().description.clone(),
                algebra: s.algebra().to_string(),
                d_r: s.representation().d_r(),
                questions: s.question_names().to_vec(),
            })
        })
        .collect()
}

/// Full view of a session: metadata, current state and history.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionView {
    pub id: String,
    pub seed: u64,
    pub info: ScenarioInfo,
    pub state: StateSummary,
    pub history: Vec<Event>,
}

pub fn session_view(session: &Session) -> SessionView {
    SessionView {
        id: session.id().to_string(),
        seed: session.seed(),
        info: session.scenario().info(),
        state: session.state_summary(),
        history: session.history().to_vec(),
    }
}

/// `{question}` for a single peek or `{questions}` for a joint one.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeekRequest {
    pub question: Option<QuestionRef>,
    pub questions: Option<Vec<QuestionRef>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum PeekResponse {
    Single {
        question: QuestionRef,
        distribution: OutcomeDistribution,
    },
    Joint {
        questions: Vec<QuestionRef>,
        distribution: JointDistribution,
    },
}

pub fn peek(session: &Session, req: PeekRequest) -> Result<PeekResponse, ApiError> {
    match (req.question, req.questions) {
        (Some(question), None) => Ok(PeekResponse::Single {
            distribution: session.peek(&question)?,
            question,
        }),
        (None, Some(questions)) => Ok(PeekResponse::Joint {
            distribution: session.joint_peek(&questions)?,
            questions,
        }),
        _ => Err(ApiError::validation(
            "question",
            "give exactly one of `question` or `questions`",
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AskRequest {
    pub question: QuestionRef,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AskResponse {
    pub outcome: f64,
    pub distribution_before: OutcomeDistribution,
    pub state_summary: StateSummary,
    pub event: Event,
}

pub fn ask(session: &mut Session, question: &QuestionRef) -> Result<AskResponse, ApiError> {
    let out = session.apply_ask(question)?;
    Ok(AskResponse {
        outcome: out.outcome,
        distribution_before: out.distribution_before,
        state_summary: session.state_summary(),
        event: out.event,
    })
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveRequest {
    pub question: QuestionRef,
    pub theta: f64,
}

/// Response to evolve and reset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MutationResponse {
    pub state_summary: StateSummary,
    pub event: Event,
}

pub fn evolve(
    session: &mut Session,
    question: &QuestionRef,
    theta: f64,
) -> Result<MutationResponse, ApiError> {
    let event = session.apply_evolve(question, theta)?;
    Ok(MutationResponse {
        state_summary: session.state_summary(),
        event,
    })
}

pub fn reset(session: &mut Session) -> MutationResponse {
    let event = session.reset();
    MutationResponse {
        state_summary: session.state_summary(),
        event,
    }
}

pub fn simulate(
    scenario: &Scenario,
    chain: &[QuestionRef],
    trials: u64,
    seed: u64,
) -> Result<FrequencyTable, ApiError> {
    let qs = chain
        .iter()
        .map(|q| entwine_core::scenario::resolve_question(scenario, q))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = simulate_sequence(scenario.initial_state(), &qs, trials, seed)?;
    table.chain = chain.iter().map(ToString::to_string).collect();
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyResponse {
    pub report: VerificationReport,
    /// Absent when structure constants could not be extracted.
    pub jacobi_residual: Option<f64>,
    pub jacobi_tolerance: f64,
    pub passed: bool,
}

pub fn verify(set: &GeneratorSet) -> VerifyResponse {
    let report = verify_generator_set(set);
    let f = structure_constants(set).ok();
    let scale = f.as_ref().map_or(1.0, |f| f.tensor().max_abs().max(1.0));
    let jacobi_tolerance = JACOBI_TOL * scale * scale;
    let jacobi = f.as_ref().map(jacobi_residual);
    let passed = report.passed() && jacobi.is_some_and(|r| r <= jacobi_tolerance);
    VerifyResponse {
        report,
        jacobi_residual: jacobi,
        jacobi_tolerance,
        passed,
    }
}

/// A factor given by catalog name (`"8"`, `"3bar"`) or bare dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorRef {
    Dim(usize),
    Name(String),
}

impl FactorRef {
    fn name(&self) -> String {
        match self {
            FactorRef::Dim(d) => d.to_string(),
            FactorRef::Name(n) => n.trim().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeRequest {
    pub algebra: String,
    pub factors: Vec<FactorRef>,
    #[serde(default)]
    pub with_isometries: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposeResponse {
    pub algebra: String,
    pub factors: Vec<String>,
    pub d_r: usize,
    /// Irrep names joined with `⊕`.
    pub decomposition: String,
    pub parts: Vec<PartSummary>,
    pub commutant_dim: usize,
    pub residual: f64,
}

/// Irrep catalogs per algebra, grown on demand and shared between requests.
#[derive(Debug, Default)]
pub struct Catalogs {
    cache: Mutex<HashMap<AlgebraId, Arc<IrrepCatalog>>>,
}

impl Catalogs {
    pub fn new() -> Self {
        Self::default()
    }

    /// A catalog for `algebra` covering at least every irrep up to `min_dim`.
    pub fn covering(
        &self,
        algebra: &AlgebraId,
        min_dim: usize,
    ) -> Result<Arc<IrrepCatalog>, ApiError> {
        let mut cache = self
            .cache
            .lock()
            .map_err(|_| ApiError::internal("catalog cache poisoned"))?;
        if let Some(c) = cache.get(algebra).filter(|c| c.max_dim() >= min_dim) {
            return Ok(c.clone());
        }
        // Small catalogs are cheap; building a little ahead avoids rebuilds.
        let target = min_dim
            .max(cache.get(algebra).map_or(0, |c| c.max_dim()))
            .max(10);
        let built = Arc::new(build_irrep_catalog(algebra, target)?);
        cache.insert(algebra.clone(), built.clone());
        Ok(built)
    }
}

/// Leading decimal digits of an irrep name, i.e. its dimension.
fn name_dim(name: &str) -> Option<usize> {
    let digits: String = name.chars().take_while(char::is_ascii_digit).collect();
    digits.parse().ok()
}

pub fn decompose(
    catalogs: &Catalogs,
    req: &DecomposeRequest,
) -> Result<DecomposeResponse, ApiError> {
    let algebra: AlgebraId = req
        .algebra
        .parse()
        .map_err(|e: entwine_core::Error| ApiError::from(e).at("algebra"))?;
    if req.factors.is_empty() {
        return Err(ApiError::validation("factors", "need at least one factor"));
    }
    let names: Vec<String> = req.factors.iter().map(FactorRef::name).collect();
    let mut dims = Vec::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        let d = name_dim(name).filter(|&d| d > 0).ok_or_else(|| {
            ApiError::validation(
                format!("factors[{i}]"),
                format!("`{name}` is not an irrep name"),
            )
        })?;
        dims.push(d);
    }
    let total = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .unwrap_or(usize::MAX);
    if total > MAX_DECOMPOSE_DIM {
        return Err(ApiError::validation(
            "factors",
            format!("product dimension {total} exceeds the limit of {MAX_DECOMPOSE_DIM}"),
        ));
    }

    let factor_catalog = catalogs.covering(&algebra, dims.iter().copied().max().unwrap_or(1))?;
    let mut rep: Option<GeneratorSet> = None;
    for (i, name) in names.iter().enumerate() {
        let irrep = factor_catalog.representative(name).ok_or_else(|| {
            ApiError::new(
                ErrorCode::UnknownName,
                format!("no {algebra} irrep named `{name}`"),
            )
            .at(format!("factors[{i}]"))
        })?;
        rep = Some(match rep {
            None => irrep.clone(),
            Some(r) => tensor_rep(&r, irrep)?,
        });
    }
    let rep = rep.expect("factors are non-empty");

    let split = invariant_blocks(&rep)?;
    let catalog = catalogs.covering(&algebra, split.max_dim())?;
    let result = label_blocks(split, &catalog.labels())?;
    Ok(DecomposeResponse {
        algebra: algebra.to_string(),
        factors: names,
        d_r: rep.d_r(),
        decomposition: result.to_string(),
        parts: result.summary(req.with_isometries),
        commutant_dim: result.commutant_dim,
        residual: result.residual,
    })
}
