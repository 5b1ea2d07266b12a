//! HTTP + JSON server for live games against the exact engine.
//!
//! | method | path                      | body / query                         |
//! |--------|---------------------------|--------------------------------------|
//! | POST   | `/games`                  | `{graph, first_role, human_role}`    |
//! | GET    | `/games/{id}`             |                                      |
//! | POST   | `/games/{id}/moves`       | `{vertex, sign}`                     |
//! | POST   | `/games/{id}/engine-move` |                                      |
//! | GET    | `/games/{id}/hint`        |                                      |
//! | GET    | `/solve`                  | `?graph=K5&first=P[&budget=14]`      |
//! | GET    | `/health`                 |                                      |
//!
//! Errors are `{"error": {"code", "message"}}` with the codes listed on
//! [`ApiError`].

pub mod error;
pub mod session;
pub mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use signgame_core::solver::FamilySolveError;
use signgame_core::{solve_family, FamilySpec, Move, Role, Sign, SolveError};

pub use error::ApiError;
pub use session::{HintView, MoveRecord, Session, StateView};
pub use store::SessionStore;

/// Largest board the engine plays exactly.
pub const DEFAULT_BUDGET: usize = 14;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub budget: usize,
    pub persist: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            budget: DEFAULT_BUDGET,
            persist: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct CreateGame {
    pub graph: String,
    pub first_role: Role,
    pub human_role: Role,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct PostMove {
    #[serde(alias = "v")]
    pub vertex: usize,
    pub sign: Sign,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SolveQuery {
    pub graph: String,
    pub first: Role,
    pub budget: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveView {
    pub graph: String,
    pub first_role: Role,
    #[serde(flatten)]
    pub result: signgame_core::solver::FamilySolve,
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::internal(e.to_string()))?
}

fn parse_spec(text: &str) -> Result<FamilySpec, ApiError> {
    text.parse::<FamilySpec>()
        .map_err(|e| ApiError::bad_spec(e.to_string()))
}

fn lookup(store: &SessionStore, id: &str) -> Result<store::SharedSession, ApiError> {
    store.get(id).ok_or_else(|| ApiError::unknown_game(id))
}

fn persist(store: &SessionStore, id: &str, record: &MoveRecord) -> Result<(), ApiError> {
    store
        .record_move(id, record.by, record.mv)
        .map_err(|e| ApiError::internal(format!("persisting move: {e}")))
}

async fn create_game(
    State(store): State<Arc<SessionStore>>,
    body: Result<Json<CreateGame>, JsonRejection>,
) -> Result<(StatusCode, Json<StateView>), ApiError> {
    let Json(req) = body.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let spec = parse_spec(&req.graph)?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let mut session = Session::new(id, spec, req.first_role, req.human_role, store.budget())?;
    let view = blocking(move || {
        if session.engine_to_move() {
            session.engine_move()?;
        }
        let view = session.view();
        store
            .insert(session)
            .map_err(|e| ApiError::internal(format!("persisting game: {e}")))?;
        Ok(view)
    })
    .await?;
    tracing::info!(id = %view.id, spec = %view.spec, "game created");
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_game(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> Result<Json<StateView>, ApiError> {
    let session = lookup(&store, &id)?;
    let view = session.lock().expect("session lock").view();
    Ok(Json(view))
}

async fn post_move(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: Result<Json<PostMove>, JsonRejection>,
) -> Result<Json<StateView>, ApiError> {
    let session = lookup(&store, &id)?;
    let Json(req) = body.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let view = blocking(move || {
        let mut s = session.lock().expect("session lock");
        let record = s.human_move(Move::new(req.vertex, req.sign))?;
        persist(&store, &id, &record)?;
        Ok(s.view())
    })
    .await?;
    Ok(Json(view))
}

async fn engine_move(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> Result<Json<StateView>, ApiError> {
    let session = lookup(&store, &id)?;
    let view = blocking(move || {
        let mut s = session.lock().expect("session lock");
        let record = s.engine_move()?;
        persist(&store, &id, &record)?;
        Ok(s.view())
    })
    .await?;
    Ok(Json(view))
}

async fn hint(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> Result<Json<HintView>, ApiError> {
    let session = lookup(&store, &id)?;
    let hint = blocking(move || session.lock().expect("session lock").hint()).await?;
    Ok(Json(hint))
}

async fn solve(
    State(store): State<Arc<SessionStore>>,
    query: Result<Query<SolveQuery>, QueryRejection>,
) -> Result<Json<SolveView>, ApiError> {
    let Query(q) = query.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let spec = parse_spec(&q.graph)?;
    let budget = q.budget.unwrap_or(store.budget()).min(store.budget());
    let result = blocking(move || {
        solve_family(&spec, q.first, budget)
            .map(|result| SolveView {
                graph: spec.to_string(),
                first_role: q.first,
                result,
            })
            .map_err(|e| match e {
                FamilySolveError::Spec(e) => ApiError::bad_spec(e.to_string()),
                FamilySolveError::Solve(
                    e @ (SolveError::BudgetExceeded { .. } | SolveError::StateLimit { .. }),
                ) => ApiError::too_large(e.to_string()),
                FamilySolveError::Solve(e) => ApiError::internal(e.to_string()),
            })
    })
    .await?;
    Ok(Json(result))
}

async fn health(State(store): State<Arc<SessionStore>>) -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok", "games": store.len() }))
}

/// The full API over `store`, with permissive CORS for the browser client.
pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/moves", post(post_move))
        .route("/games/{id}/engine-move", post(engine_move))
        .route("/games/{id}/hint", get(hint))
        .route("/solve", get(solve))
        .route("/health", get(health))
        .layer(CorsLayer::permissive())
        .with_state(store)
}

pub fn open_store(config: &ServiceConfig) -> std::io::Result<SessionStore> {
    match &config.persist {
        Some(dir) => SessionStore::persistent(dir, config.budget),
        None => Ok(SessionStore::in_memory(config.budget)),
    }
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let store = Arc::new(open_store(&config)?);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(store)).await
}
