//! JSON-over-HTTP session service.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, Method};
use axum::routing::{get, post};
use axum::{Json, Router};
use entwine_core::scenario::{builtin_scenario, generate_seed, Event, ScenarioInfo};
use serde::Deserialize;
use serde_json::Value;
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::error::ApiError;
use crate::service::{self, AskRequest, Catalogs, DecomposeRequest, EvolveRequest, PeekRequest};
use crate::store::SessionStore;

#[derive(Debug, Clone, Default)]
pub struct AppState {
    pub store: Arc<SessionStore>,
    pub catalogs: Arc<Catalogs>,
}

impl AppState {
    pub fn new(store: SessionStore) -> Self {
        Self {
            store: Arc::new(store),
            catalogs: Arc::new(Catalogs::new()),
        }
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/scenarios", get(list_scenarios))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/peek", post(peek))
        .route("/sessions/{id}/ask", post(ask))
        .route("/sessions/{id}/evolve", post(evolve))
        .route("/sessions/{id}/reset", post(reset))
        .route("/sessions/{id}/history", get(history))
        .route("/algebra/{scenario}/info", get(algebra_info))
        .route("/decompose", post(decompose))
        .with_state(state)
}

/// CORS for the listed origins; `*` allows any.
pub fn cors(origins: &[String]) -> Result<CorsLayer, ApiError> {
    let layer = CorsLayer::new()
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([axum::http::header::CONTENT_TYPE]);
    if origins.iter().any(|o| o == "*") {
        return Ok(layer.allow_origin(AllowOrigin::any()));
    }
    let values = origins
        .iter()
        .map(|o| {
            HeaderValue::from_str(o)
                .map_err(|_| ApiError::validation("allow-origin", format!("bad origin `{o}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(layer.allow_origin(values))
}

fn body<T: for<'de> Deserialize<'de>>(bytes: &Bytes) -> Result<T, ApiError> {
    service::parse_json(if bytes.is_empty() { b"{}" } else { bytes })
}

async fn list_scenarios() -> ApiResult<Vec<service::ScenarioListing>> {
    Ok(Json(service::list_scenarios()?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateSession {
    scenario: Value,
    seed: Option<u64>,
}

async fn create_session(
    State(app): State<AppState>,
    bytes: Bytes,
) -> ApiResult<service::SessionView> {
    let req: CreateSession = body(&bytes)?;
    let scenario = Arc::new(service::scenario_from_value(&req.scenario)?);
    let session = app
        .store
        .create(scenario, req.seed.unwrap_or_else(generate_seed))?;
    let guard = session
        .lock()
        .map_err(|_| ApiError::internal("session lock poisoned"))?;
    Ok(Json(service::session_view(&guard)))
}

async fn get_session(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<service::SessionView> {
    Ok(Json(
        app.store
            .with_session(&id, |s| Ok(service::session_view(s)))?,
    ))
}

async fn peek(
    State(app): State<AppState>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<service::PeekResponse> {
    let session = app.store.get(&id)?;
    let req: PeekRequest = body(&bytes)?;
    let guard = session
        .lock()
        .map_err(|_| ApiError::internal("session lock poisoned"))?;
    Ok(Json(service::peek(&guard, req)?))
}

async fn ask(
    State(app): State<AppState>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<service::AskResponse> {
    let session = app.store.get(&id)?;
    let req: AskRequest = body(&bytes)?;
    let mut guard = session
        .lock()
        .map_err(|_| ApiError::internal("session lock poisoned"))?;
    Ok(Json(service::ask(&mut guard, &req.question)?))
}

async fn evolve(
    State(app): State<AppState>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<service::MutationResponse> {
    let session = app.store.get(&id)?;
    let req: EvolveRequest = body(&bytes)?;
    let mut guard = session
        .lock()
        .map_err(|_| ApiError::internal("session lock poisoned"))?;
    Ok(Json(service::evolve(&mut guard, &req.question, req.theta)?))
}

async fn reset(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<service::MutationResponse> {
    Ok(Json(
        app.store.with_session(&id, |s| Ok(service::reset(s)))?,
    ))
}

async fn history(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Vec<Event>> {
    Ok(Json(
        app.store.with_session(&id, |s| Ok(s.history().to_vec()))?,
    ))
}

async fn algebra_info(Path(scenario): Path<String>) -> ApiResult<ScenarioInfo> {
    Ok(Json(builtin_scenario(&scenario)?.info()))
}

async fn decompose(
    State(app): State<AppState>,
    bytes: Bytes,
) -> ApiResult<service::DecomposeResponse> {
    let req: DecomposeRequest = body(&bytes)?;
    let catalogs = app.catalogs.clone();
    let out = tokio::task::spawn_blocking(move || service::decompose(&catalogs, &req))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))??;
    Ok(Json(out))
}
