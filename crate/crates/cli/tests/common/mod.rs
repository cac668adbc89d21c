//! Runs one question script through the CLI binary and through the HTTP
//! router so the two paths can be compared.
#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

use axum::body::Body;
use axum::http::Request;
use entwine::http::{router, AppState};
use entwine::store::SessionStore;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

#[derive(Debug, Clone, Copy)]
pub enum Step {
    Ask(&'static str),
    Evolve(&'static str, f64),
}

/// History with timestamps removed, and final amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub history: Vec<Value>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl Trace {
    /// Equal histories and bit-identical amplitudes.
    pub fn identical(&self, other: &Trace) -> bool {
        self.history == other.history
            && self.amplitudes.len() == other.amplitudes.len()
            && self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .all(|(a, b)| a[0].to_bits() == b[0].to_bits() && a[1].to_bits() == b[1].to_bits())
    }
}

fn strip(history: &Value) -> Vec<Value> {
    history
        .as_array()
        .expect("history is an array")
        .iter()
        .map(|e| {
            let mut e = e.clone();
            e.as_object_mut().unwrap().remove("timestamp_ms");
            e
        })
        .collect()
}

fn amplitudes(v: &Value) -> Vec<[f64; 2]> {
    v.as_array()
        .expect("amplitudes are an array")
        .iter()
        .map(|z| [z[0].as_f64().unwrap(), z[1].as_f64().unwrap()])
        .collect()
}

pub fn entwine(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_entwine"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn run_cli(dir: &Path, scenario: &str, seed: u64, steps: &[Step]) -> Trace {
    let snap = dir.join(format!("{scenario}-{seed}.json"));
    let _ = std::fs::remove_file(&snap);
    let seed = seed.to_string();
    let snap_s = snap.to_str().unwrap();
    let base = [
        "--scenario",
        scenario,
        "--seed",
        &seed,
        "--snapshot",
        snap_s,
        "--format",
        "structured",
    ];
    for step in steps {
        let mut args: Vec<String> = base.iter().map(|s| s.to_string()).collect();
        match *step {
            Step::Ask(q) => args.extend(["ask".into(), q.into()]),
            Step::Evolve(q, theta) => args.extend([
                "evolve".into(),
                q.into(),
                "--theta".into(),
                format!("{theta:?}"),
            ]),
        }
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = entwine(&refs);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let snapshot: Value = serde_json::from_slice(&std::fs::read(&snap).unwrap()).unwrap();
    Trace {
        history: strip(&snapshot["history"]),
        amplitudes: amplitudes(&snapshot["amplitudes"]),
    }
}

async fn call(app: &axum::Router, method: &str, uri: &str, body: Option<Value>) -> Value {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    assert!(resp.status().is_success(), "{uri}: {}", resp.status());
    serde_json::from_slice(&resp.into_body().collect().await.unwrap().to_bytes()).unwrap()
}

pub fn run_http(scenario: &str, seed: u64, steps: &[Step]) -> Trace {
    let rt = tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .unwrap();
    rt.block_on(async {
        let app = router(AppState::new(SessionStore::new()));
        let created = call(
            &app,
            "POST",
            "/sessions",
            Some(json!({"scenario": scenario, "seed": seed})),
        )
        .await;
        let id = created["id"].as_str().unwrap().to_string();
        for step in steps {
            match *step {
                Step::Ask(q) => {
                    call(
                        &app,
                        "POST",
                        &format!("/sessions/{id}/ask"),
                        Some(json!({"question": q})),
                    )
                    .await
                }
                Step::Evolve(q, theta) => {
                    call(
                        &app,
                        "POST",
                        &format!("/sessions/{id}/evolve"),
                        Some(json!({"question": q, "theta": theta})),
                    )
                    .await
                }
            };
        }
        let view = call(&app, "GET", &format!("/sessions/{id}"), None).await;
        Trace {
            history: strip(&view["history"]),
            amplitudes: amplitudes(&view["state"]["amplitudes"]),
        }
    })
}

pub const SCRIPT: [Step; 7] = [
    Step::Ask("cola"),
    Step::Evolve("apple-juice", 0.7),
    Step::Ask("water"),
    Step::Evolve("water", -1.3),
    Step::Ask("apple-juice"),
    Step::Ask("cola"),
    Step::Ask("water"),
];
