use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use revpi::causality::CausalityGraph;
use revpi::{Action, CauseSet, Key};
use revpi_cli::api::router;
use revpi_cli::state::TransitionView;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, v)
}

async fn create(app: &Router, source: &str, semantics: &str) -> String {
    let (status, v) = call(app, "POST", "/sessions", Some(json!({ "source": source, "semantics": semantics }))).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v["id"].as_str().unwrap().to_owned()
}

async fn transitions(app: &Router, id: &str, dir: &str) -> Vec<TransitionView> {
    let (status, v) = call(app, "GET", &format!("/sessions/{id}/transitions?dir={dir}"), None).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    serde_json::from_value(v).unwrap()
}

async fn step_on(app: &Router, id: &str, subject: &str) -> Key {
    let t = transitions(app, id, "fwd")
        .await
        .into_iter()
        .find(|t| t.label.action.subject().is_some_and(|s| &**s == subject))
        .unwrap_or_else(|| panic!("no step on {subject}"));
    let (status, v) = call(app, "POST", &format!("/sessions/{id}/step"), Some(json!({ "transition_id": t.id }))).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    t.label.key
}

const EXTRUDERS: &str = "new a.(b<a> | c<a> | a(z))";

#[tokio::test]
async fn rpi_input_is_offered_once_per_extruder() {
    let app = router(Arc::default());
    let id = create(&app, EXTRUDERS, "rpi").await;
    let i = step_on(&app, &id, "b").await;
    let h = step_on(&app, &id, "c").await;
    let mut causes: Vec<CauseSet> = transitions(&app, &id, "fwd")
        .await
        .into_iter()
        .filter(|t| matches!(t.label.action, Action::In { .. }))
        .map(|t| t.label.cause)
        .collect();
    causes.sort();
    assert_eq!(causes, [CauseSet::singleton(i), CauseSet::singleton(h)]);

    let (_, replay) = call(&app, "GET", &format!("/sessions/{id}/replay"), None).await;
    assert_eq!(replay["ok"], true);
}

#[tokio::test]
async fn stale_transition_is_a_conflict() {
    let app = router(Arc::default());
    let id = create(&app, "b<a>.0 | b(x).x<c>", "rpi").await;
    let first = transitions(&app, &id, "fwd").await;
    let uri = format!("/sessions/{id}/step");
    let (status, _) = call(&app, "POST", &uri, Some(json!({ "transition_id": first[2].id }))).await;
    assert_eq!(status, StatusCode::OK);
    let (status, v) = call(&app, "POST", &uri, Some(json!({ "transition_id": first[0].id }))).await;
    assert_eq!(status, StatusCode::CONFLICT, "{v}");
}

#[tokio::test]
async fn bs_extruder_object_causes_later_uses() {
    let app = router(Arc::default());
    let id = create(&app, EXTRUDERS, "bs").await;
    step_on(&app, &id, "b").await;
    step_on(&app, &id, "c").await;
    step_on(&app, &id, "a").await;
    let (status, v) = call(&app, "GET", &format!("/sessions/{id}/causality"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["edges"], json!([
        { "from": 0, "to": 1, "kind": "object" },
        { "from": 0, "to": 2, "kind": "object" },
    ]));
    let g: CausalityGraph = serde_json::from_value(v).unwrap();
    assert_eq!(g.nodes.len(), 3);
}

#[tokio::test]
async fn backward_tau_restores_the_initial_term() {
    let app = router(Arc::default());
    let source = "b<a>.0 | b(x).x<c>";
    let id = create(&app, source, "cvy").await;
    let (_, initial) = call(&app, "GET", &format!("/sessions/{id}/state"), None).await;
    step_on(&app, &id, "b").await;
    let back = transitions(&app, &id, "bwd").await;
    assert_eq!(back.len(), 1);
    let uri = format!("/sessions/{id}/step");
    let (status, _) = call(&app, "POST", &uri, Some(json!({ "transition_id": back[0].id }))).await;
    assert_eq!(status, StatusCode::OK);
    let (_, now) = call(&app, "GET", &format!("/sessions/{id}/state"), None).await;
    assert_eq!(now["state"], initial["state"]);
    let (_, trace) = call(&app, "GET", &format!("/sessions/{id}/trace"), None).await;
    assert_eq!(trace.as_array().unwrap().len(), 2);
    assert_eq!(trace[1]["transition"]["dir"], "bwd");
}

#[tokio::test]
async fn error_statuses() {
    let app = router(Arc::default());
    let (status, v) = call(&app, "POST", "/sessions", Some(json!({ "source": "b<a.", "semantics": "rpi" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(v["error"].as_str().unwrap().contains("column 4"), "{v}");
    let (status, _) = call(&app, "GET", "/sessions/nope/state", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let id = create(&app, "0", "bs").await;
    let (status, _) = call(&app, "GET", &format!("/sessions/{id}/transitions?dir=up"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "DELETE", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, _) = call(&app, "GET", &format!("/sessions/{id}/trace"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}
