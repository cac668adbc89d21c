use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use entwine::http::{router, AppState};
use entwine::store::SessionStore;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(AppState::new(SessionStore::new()))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

async fn create(app: &Router, scenario: Value, seed: u64) -> String {
    let (status, body) = call(
        app,
        "POST",
        "/sessions",
        Some(json!({"scenario": scenario, "seed": seed})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    body["id"].as_str().unwrap().to_string()
}

fn probability_of(dist: &Value, eigenvalue: f64) -> f64 {
    dist["outcomes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|o| (o["eigenvalue"].as_f64().unwrap() - eigenvalue).abs() <= 1e-9)
        .map(|o| o["probability"].as_f64().unwrap())
        .sum()
}

#[tokio::test]
async fn lists_builtin_scenarios() {
    let (status, body) = call(&app(), "GET", "/scenarios", None).await;
    assert_eq!(status, StatusCode::OK);
    let names: Vec<&str> = body
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"child-su2") && names.contains(&"adult-su3"));
}

#[tokio::test]
async fn repeated_ask_gives_the_same_answer() {
    let app = app();
    for seed in 0..8 {
        let id = create(&app, json!("child-su2"), seed).await;
        let uri = format!("/sessions/{id}/ask");
        let (_, first) = call(&app, "POST", &uri, Some(json!({"question": "water"}))).await;
        let (status, second) = call(&app, "POST", &uri, Some(json!({"question": "water"}))).await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(first["outcome"], second["outcome"]);
        let p = probability_of(
            &second["distribution_before"],
            second["outcome"].as_f64().unwrap(),
        );
        assert!((p - 1.0).abs() <= 1e-12);
        assert!(second["state_summary"]["amplitudes"].is_array());
    }
}

#[tokio::test]
async fn peek_after_certainty_is_even() {
    let app = app();
    // The uniform state is already the +1/2 eigenstate of cola.
    let id = create(&app, json!("child-su2"), 3).await;
    let (_, asked) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/ask"),
        Some(json!({"question": "cola"})),
    )
    .await;
    assert!((asked["outcome"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
    let (status, body) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/peek"),
        Some(json!({"question": "water"})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let outcomes = body["distribution"]["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 2);
    for o in outcomes {
        assert!((o["probability"].as_f64().unwrap() - 0.5).abs() <= 1e-10);
    }
    // Peeking does not add to the history.
    let (_, history) = call(&app, "GET", &format!("/sessions/{id}/history"), None).await;
    assert_eq!(history.as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn ask_distribution_matches_the_preceding_peek() {
    let app = app();
    let id = create(&app, json!("adult-su3"), 11).await;
    call(
        &app,
        "POST",
        &format!("/sessions/{id}/evolve"),
        Some(json!({"question": "tea", "theta": 0.9})),
    )
    .await;
    let (_, peeked) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/peek"),
        Some(json!({"question": "champagne"})),
    )
    .await;
    let (_, asked) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/ask"),
        Some(json!({"question": "champagne"})),
    )
    .await;
    assert_eq!(peeked["distribution"], asked["distribution_before"]);
}

#[tokio::test]
async fn error_codes_and_statuses() {
    let app = app();
    let (status, body) = call(&app, "GET", "/sessions/nonexistent", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "UNKNOWN_SESSION");

    let id = create(&app, json!("adult-su3"), 1).await;
    let peek = format!("/sessions/{id}/peek");
    let (status, body) = call(
        &app,
        "POST",
        &peek,
        Some(json!({"questions": ["wine", "whisky"]})),
    )
    .await;
    assert_eq!(
        (status, body["code"].as_str()),
        (StatusCode::CONFLICT, Some("NON_COMMUTING"))
    );

    let (status, body) = call(
        &app,
        "POST",
        &peek,
        Some(json!({"questions": ["beer", "water"]})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        body["distribution"]["outcomes"].as_array().unwrap().len(),
        3
    );

    let (status, body) = call(&app, "POST", &peek, Some(json!({"question": "juice"}))).await;
    assert_eq!(
        (status, body["code"].as_str()),
        (StatusCode::BAD_REQUEST, Some("UNKNOWN_NAME"))
    );

    let (status, body) = call(&app, "POST", &peek, Some(json!({"question": [1.0, 0.0]}))).await;
    assert_eq!(
        (status, body["code"].as_str()),
        (StatusCode::BAD_REQUEST, Some("VALIDATION"))
    );

    let (status, body) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/evolve"),
        Some(json!({"question": "wine", "theta": "x"})),
    )
    .await;
    assert_eq!(
        (status, body["code"].as_str()),
        (StatusCode::BAD_REQUEST, Some("SCHEMA"))
    );
    assert_eq!(body["path"], "theta");

    let (status, body) = call(&app, "POST", "/sessions", Some(json!({"scenario": "nope"}))).await;
    assert_eq!(
        (status, body["code"].as_str()),
        (StatusCode::BAD_REQUEST, Some("UNKNOWN_NAME"))
    );

    let bad_doc = json!({"name": "x", "algebra": "su3", "representation": {}, "derived": {"odd": [1.0, 0.0]}});
    let (status, body) = call(
        &app,
        "POST",
        "/sessions",
        Some(json!({"scenario": bad_doc})),
    )
    .await;
    assert_eq!(
        (status, body["code"].as_str()),
        (StatusCode::BAD_REQUEST, Some("VALIDATION"))
    );
    assert_eq!(body["path"], "scenario.derived.odd");
}

#[tokio::test]
async fn inline_scenarios_and_generated_seeds() {
    let app = app();
    let doc = json!({"name": "mine", "algebra": "su2", "representation": {"kind": "spin", "d_r": 3},
                     "options": {"up": 2}, "initial": {"kind": "eigenstate", "question": "up", "rank": 2}});
    let (status, body) = call(&app, "POST", "/sessions", Some(json!({"scenario": doc}))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert!(body["seed"].is_u64());
    assert_eq!(body["info"]["d_r"], 3);
    let id = body["id"].as_str().unwrap();
    let (_, asked) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/ask"),
        Some(json!({"question": "up"})),
    )
    .await;
    assert!((asked["outcome"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(asked["event"]["seed"], body["seed"]);
}

#[tokio::test]
async fn mutations_are_recorded() {
    let app = app();
    let id = create(&app, json!("child-su2"), 5).await;
    call(
        &app,
        "POST",
        &format!("/sessions/{id}/ask"),
        Some(json!({"question": "water"})),
    )
    .await;
    call(
        &app,
        "POST",
        &format!("/sessions/{id}/evolve"),
        Some(json!({"question": "cola", "theta": 1.0})),
    )
    .await;
    let (status, _) = call(&app, "POST", &format!("/sessions/{id}/reset"), None).await;
    assert_eq!(status, StatusCode::OK);
    let (_, view) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    let kinds: Vec<&str> = view["history"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["ask", "evolve", "reset"]);
    let steps: Vec<u64> = view["history"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["step"].as_u64().unwrap())
        .collect();
    assert_eq!(steps, [0, 1, 2]);
}

#[tokio::test]
async fn algebra_info_and_decompose() {
    let app = app();
    let (status, info) = call(&app, "GET", "/algebra/adult-su3/info", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        (
            info["rank"].as_u64(),
            info["d"].as_u64(),
            info["d_r"].as_u64()
        ),
        (Some(2), Some(8), Some(3))
    );
    assert!((info["c2"].as_f64().unwrap() - 4.0 / 3.0).abs() <= 1e-12);
    let (status, _) = call(&app, "GET", "/algebra/nope/info", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, out) = call(
        &app,
        "POST",
        "/decompose",
        Some(json!({"algebra": "su3", "factors": ["3", "3"]})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{out}");
    assert_eq!(out["decomposition"], "6 ⊕ 3bar");
    let (_, out) = call(
        &app,
        "POST",
        "/decompose",
        Some(json!({"algebra": "su2", "factors": [2, 3], "with_isometries": true})),
    )
    .await;
    assert_eq!(out["decomposition"], "4 ⊕ 2");
    assert_eq!(out["parts"][0]["isometries"][0]["rows"], 6);
    let (status, out) = call(
        &app,
        "POST",
        "/decompose",
        Some(json!({"algebra": "su3", "factors": ["27", "27"]})),
    )
    .await;
    assert_eq!(
        (status, out["code"].as_str()),
        (StatusCode::BAD_REQUEST, Some("VALIDATION"))
    );
}

#[tokio::test]
async fn restarted_store_continues_identically() {
    let app_a = app();
    let id = create(&app_a, json!("adult-su3"), 2024).await;
    for q in ["wine", "champagne"] {
        call(
            &app_a,
            "POST",
            &format!("/sessions/{id}/ask"),
            Some(json!({"question": q})),
        )
        .await;
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("store.json");
    // A second store runs the same script, then is saved and reloaded.
    let state = AppState::new(SessionStore::new());
    let app_b = router(state.clone());
    let id_b = create(&app_b, json!("adult-su3"), 2024).await;
    for q in ["wine", "champagne"] {
        call(
            &app_b,
            "POST",
            &format!("/sessions/{id_b}/ask"),
            Some(json!({"question": q})),
        )
        .await;
    }
    state.store.save(&path).unwrap();
    let app_c = router(AppState::new(SessionStore::load(&path).unwrap()));

    for q in ["beer", "lager", "water"] {
        let (_, a) = call(
            &app_a,
            "POST",
            &format!("/sessions/{id}/ask"),
            Some(json!({"question": q})),
        )
        .await;
        let (_, c) = call(
            &app_c,
            "POST",
            &format!("/sessions/{id_b}/ask"),
            Some(json!({"question": q})),
        )
        .await;
        assert_eq!(a["outcome"], c["outcome"]);
        assert_eq!(a["distribution_before"], c["distribution_before"]);
        assert_eq!(
            a["state_summary"]["amplitudes"],
            c["state_summary"]["amplitudes"]
        );
    }
}
