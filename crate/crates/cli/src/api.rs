//! HTTP session service.
//!
//! | method | path | body / query | reply |
//! |---|---|---|---|
//! | POST | `/sessions` | `{source, semantics}` | `{id, state, text}` |
//! | GET | `/sessions/:id/state` | | `{id, semantics, state, text, next_key}` |
//! | GET | `/sessions/:id/transitions` | `?dir=fwd\|bwd` | `[TransitionView]` |
//! | POST | `/sessions/:id/step` | `{transition_id}` | `{transition, structural_causes, state, text}` |
//! | GET | `/sessions/:id/trace` | | `[AnnotatedTransition]` |
//! | GET | `/sessions/:id/causality` | | `CausalityGraph` |
//! | GET | `/sessions/:id/replay` | | `{ok}` |
//! | DELETE | `/sessions/:id` | | 204 |
//!
//! Errors are `{error}` with status 400 (bad source), 404 (unknown session)
//! or 409 (transition no longer enabled).

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::{Path, Query, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use revpi::{Direction, RProcess, SemanticsKind};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::trace::TraceLayer;

use crate::session::{Session, StepError};

type Shared = Arc<tokio::sync::Mutex<Session>>;

/// Session map. The outer lock is held only to look sessions up; each
/// session has its own async lock so requests on one session are serialized
/// while different sessions proceed independently.
#[derive(Default)]
pub struct Store {
    sessions: Mutex<HashMap<String, Shared>>,
    counter: AtomicU64,
}

impl Store {
    fn get(&self, id: &str) -> Result<Shared, ApiError> {
        self.sessions
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::NotFound(id.to_owned()))
    }
}

#[derive(Debug)]
pub enum ApiError {
    BadRequest(String),
    NotFound(String),
    Conflict(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, msg) = match self {
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
            ApiError::NotFound(id) => (StatusCode::NOT_FOUND, format!("unknown session {id}")),
            ApiError::Conflict(m) => (StatusCode::CONFLICT, m),
        };
        (status, Json(json!({ "error": msg }))).into_response()
    }
}

fn state_json(s: &Session) -> Value {
    json!({
        "id": s.id,
        "semantics": s.semantics,
        "state": s.current,
        "text": s.current.to_string(),
        "next_key": s.next_key,
    })
}

#[derive(Deserialize)]
struct CreateRequest {
    source: String,
    semantics: SemanticsKind,
}

async fn create(State(store): State<Arc<Store>>, Json(req): Json<CreateRequest>) -> Result<Response, ApiError> {
    let n = store.counter.fetch_add(1, Ordering::Relaxed) + 1;
    let id = format!("s{n}");
    let session = Session::new(id.clone(), &req.source, req.semantics).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let body = state_json(&session);
    tracing::info!(session = %id, semantics = %req.semantics, "created");
    store.sessions.lock().unwrap().insert(id, Arc::new(tokio::sync::Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn state(State(store): State<Arc<Store>>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let s = store.get(&id)?;
    let s = s.lock().await;
    Ok(Json(state_json(&s)))
}

#[derive(Deserialize)]
struct DirQuery {
    dir: Option<String>,
}

async fn transitions(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    Query(q): Query<DirQuery>,
) -> Result<Json<Value>, ApiError> {
    let dir = match q.dir.as_deref() {
        None | Some("") | Some("all") => None,
        Some("fwd") => Some(Direction::Forward),
        Some("bwd") => Some(Direction::Backward),
        Some(other) => return Err(ApiError::BadRequest(format!("dir must be fwd or bwd, not {other:?}"))),
    };
    let s = store.get(&id)?;
    let s = s.lock().await;
    Ok(Json(json!(s.transitions(dir))))
}

#[derive(Deserialize)]
struct StepRequest {
    transition_id: String,
}

async fn step(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    Json(req): Json<StepRequest>,
) -> Result<Json<Value>, ApiError> {
    let s = store.get(&id)?;
    let mut s = s.lock().await;
    let a = s.step(&req.transition_id).map_err(|e| match e {
        StepError::NotEnabled(_) => ApiError::Conflict(e.to_string()),
        StepError::OutOfRange { .. } => ApiError::BadRequest(e.to_string()),
    })?;
    let mut body = json!(a);
    let target: &RProcess = &a.transition.target;
    body["text"] = json!(target.to_string());
    body["state"] = json!(target);
    tracing::debug!(session = %id, label = %a.transition.label, "step");
    Ok(Json(body))
}

async fn trace(State(store): State<Arc<Store>>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let s = store.get(&id)?;
    let s = s.lock().await;
    Ok(Json(json!(s.trace)))
}

async fn causality(State(store): State<Arc<Store>>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let s = store.get(&id)?;
    let s = s.lock().await;
    Ok(Json(json!(s.causality())))
}

async fn replay(State(store): State<Arc<Store>>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let s = store.get(&id)?;
    let s = s.lock().await;
    Ok(Json(json!({ "ok": s.replays() })))
}

async fn delete(State(store): State<Arc<Store>>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    store
        .sessions
        .lock()
        .unwrap()
        .remove(&id)
        .map(|_| StatusCode::NO_CONTENT)
        .ok_or(ApiError::NotFound(id))
}

/// Origins served from this machine, any port.
fn local_origin(origin: &HeaderValue) -> bool {
    let Ok(o) = origin.to_str() else { return false };
    let host = o.strip_prefix("http://").or_else(|| o.strip_prefix("https://")).unwrap_or("");
    let host = host.rsplit_once(':').map_or(host, |(h, port)| {
        if port.chars().all(|c| c.is_ascii_digit()) {
            h
        } else {
            host
        }
    });
    matches!(host, "localhost" | "127.0.0.1" | "[::1]")
}

pub fn router(store: Arc<Store>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(AllowOrigin::predicate(|o, _| local_origin(o)))
        .allow_methods(tower_http::cors::Any)
        .allow_headers(tower_http::cors::Any);
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", axum::routing::delete(delete))
        .route("/sessions/{id}/state", get(state))
        .route("/sessions/{id}/transitions", get(transitions))
        .route("/sessions/{id}/step", post(step))
        .route("/sessions/{id}/trace", get(trace))
        .route("/sessions/{id}/causality", get(causality))
        .route("/sessions/{id}/replay", get(replay))
        .layer(cors)
        .layer(TraceLayer::new_for_http())
        .with_state(store)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_origins() {
        for (o, ok) in [
            ("http://localhost:5173", true),
            ("http://127.0.0.1", true),
            ("http://[::1]:8080", true),
            ("http://example.com", false),
            ("http://localhost.example.com:80", false),
        ] {
            assert_eq!(local_origin(&HeaderValue::from_static(o)), ok, "{o}");
        }
    }
}
