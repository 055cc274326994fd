//! HTTP JSON API for playing hexagonal sliding puzzles: sessions, moves,
//! solvability verdicts, hints and board analyses.

pub mod session;

use std::net::SocketAddr;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use dashmap::DashMap;
use hexslide_core::puzzlegraph::shortest_path;
use hexslide_core::report::{analyze, AnalysisError};
use hexslide_core::{
    parse_cell_list, BoardSpec, Budget, Cell, Configuration, Decision, GraphError, Shape,
    SlideMove, Solver, SolverOptions,
};
use parking_lot::Mutex;
use serde::Deserialize;
use serde_json::json;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

use session::{
    scramble, GameSession, HintMemo, ScrambleError, ScrambleInfo, ScramblePolicy, SessionSnapshot,
};

pub const DEFAULT_HINT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// State budget for solvability fallbacks and analyses.
    pub budget: Budget,
    /// State budget for one hint search.
    pub hint_budget: Budget,
    /// Directory for one JSON snapshot per session.
    pub snapshot_dir: Option<PathBuf>,
    /// Allowed CORS origin; any origin when unset.
    pub cors_origin: Option<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            budget: Budget::from_env(),
            hint_budget: Budget(DEFAULT_HINT_BUDGET),
            snapshot_dir: None,
            cors_origin: None,
        }
    }
}

struct Inner {
    config: ServiceConfig,
    sessions: DashMap<String, Arc<Mutex<GameSession>>>,
    solver: Solver,
    /// Rules only, used where a quick answer is wanted.
    strict: Solver,
}

#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    /// Creates the state, restoring any snapshots found in the snapshot
    /// directory.
    pub fn new(config: ServiceConfig) -> anyhow::Result<AppState> {
        let options = SolverOptions {
            budget: config.budget,
            ..SolverOptions::default()
        };
        let inner = Inner {
            solver: Solver::new(options),
            strict: Solver::new(SolverOptions {
                bfs_fallback: false,
                ..options
            }),
            sessions: DashMap::new(),
            config,
        };
        if let Some(dir) = &inner.config.snapshot_dir {
            std::fs::create_dir_all(dir)?;
            for entry in std::fs::read_dir(dir)? {
                let path = entry?.path();
                if path.extension().is_some_and(|e| e == "json") {
                    match load_snapshot(&path) {
                        Some(s) => {
                            inner.sessions.insert(s.id.clone(), Arc::new(Mutex::new(s)));
                        }
                        None => {
                            tracing::warn!(path = %path.display(), "skipping unreadable or inconsistent snapshot")
                        }
                    }
                }
            }
        }
        Ok(AppState(Arc::new(inner)))
    }

    pub fn session_count(&self) -> usize {
        self.0.sessions.len()
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<GameSession>>, ApiError> {
        self.0
            .sessions
            .get(id)
            .map(|s| s.clone())
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no game {id}")))
    }

    fn persist(&self, s: &GameSession) {
        if let Some(dir) = &self.0.config.snapshot_dir {
            if let Err(e) = write_snapshot(dir, &s.snapshot()) {
                tracing::warn!(id = %s.id, error = %e, "failed to write snapshot");
            }
        }
    }
}

fn load_snapshot(path: &FsPath) -> Option<GameSession> {
    let bytes = std::fs::read(path).ok()?;
    GameSession::from_snapshot(serde_json::from_slice::<SessionSnapshot>(&bytes).ok()?)
}

fn write_snapshot(dir: &FsPath, s: &SessionSnapshot) -> std::io::Result<()> {
    let tmp = dir.join(format!("{}.json.tmp", s.id));
    std::fs::write(&tmp, serde_json::to_vec_pretty(s)?)?;
    std::fs::rename(tmp, dir.join(format!("{}.json", s.id)))
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn bad_request(message: impl ToString) -> Self {
        Self::new(StatusCode::BAD_REQUEST, message.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> T + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))
}

#[derive(Debug, Deserialize)]
struct CreateGame {
    board: Shape,
    holes: usize,
    #[serde(default)]
    scramble: ScramblePolicy,
}

async fn create_game(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateGame = serde_json::from_slice(&body).map_err(ApiError::bad_request)?;
    let board = Arc::new(BoardSpec::build(req.board).map_err(ApiError::bad_request)?);
    let target = Configuration::default_start(board, req.holes).map_err(ApiError::bad_request)?;
    let info = ScrambleInfo {
        mode: req.scramble.mode,
        steps: req.scramble.steps,
        seed: req.scramble.seed.unwrap_or_else(rand::random),
    };
    let st = state.clone();
    let t = target.clone();
    let start =
        blocking(move || scramble(&t, info.mode, info.steps, info.seed, &st.0.strict)).await?;
    let start = match start {
        Ok(s) => s,
        Err(ScrambleError::Isolated) => {
            return Err(ApiError::bad_request(format!(
                "every configuration with {} holes is isolated",
                req.holes
            )))
        }
        Err(ScrambleError::Unsupported(msg)) => {
            return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, msg))
        }
    };
    let session = GameSession::new(
        uuid::Uuid::new_v4().simple().to_string(),
        start,
        target,
        info,
    );
    state.persist(&session);
    let view = session.view();
    state
        .0
        .sessions
        .insert(session.id.clone(), Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn get_game(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let s = state.session(&id)?;
    let view = s.lock().view();
    Ok(Json(view).into_response())
}

#[derive(Debug, Deserialize)]
struct MoveRequest {
    from: Cell,
    to: Cell,
}

async fn post_move(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let s = state.session(&id)?;
    let req: MoveRequest = serde_json::from_slice(&body).map_err(ApiError::bad_request)?;
    let mut session = s.lock();
    if session.apply(req.from, req.to).is_none() {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            format!("no legal slide from {} to {}", req.from, req.to),
        ));
    }
    state.persist(&session);
    Ok(Json(session.view()).into_response())
}

async fn solvability(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let s = state.session(&id)?;
    let (current, target) = {
        let g = s.lock();
        (g.current.clone(), g.target.clone())
    };
    let verdict = blocking(move || state.0.solver.decide(&current, &target))
        .await?
        .map_err(ApiError::bad_request)?;
    Ok(Json(verdict).into_response())
}

fn hint_body(
    hint: Option<SlideMove>,
    reason: Option<&str>,
    distance: Option<usize>,
) -> Json<serde_json::Value> {
    Json(json!({ "hint": hint, "reason": reason, "distance": distance }))
}

enum HintOutcome {
    Path(Vec<SlideMove>),
    Unsolvable,
    Budget,
}

async fn hint(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let s = state.session(&id)?;
    let (current, target) = {
        let g = s.lock();
        if g.solved() {
            return Ok(hint_body(None, Some("solved"), Some(0)).into_response());
        }
        if let Some(m) = g
            .hint_memo
            .as_ref()
            .filter(|m| m.from == g.current && !m.path.is_empty())
        {
            return Ok(hint_body(Some(m.path[0]), None, Some(m.path.len())).into_response());
        }
        (g.current.clone(), g.target.clone())
    };
    let st = state.clone();
    let (c, t) = (current.clone(), target.clone());
    let outcome = blocking(move || {
        let verdict =
            st.0.strict
                .decide(&c, &t)
                .expect("session configurations match");
        if verdict.decision == Decision::Unsolvable {
            return HintOutcome::Unsolvable;
        }
        match shortest_path(&c, &t, st.0.config.hint_budget) {
            Ok(Some(path)) => HintOutcome::Path(path),
            Ok(None) => HintOutcome::Unsolvable,
            Err(_) => HintOutcome::Budget,
        }
    })
    .await?;
    Ok(match outcome {
        HintOutcome::Path(path) => {
            let body = hint_body(path.first().copied(), None, Some(path.len()));
            let mut g = s.lock();
            if g.current == current {
                g.hint_memo = Some(HintMemo {
                    from: current,
                    path,
                });
            }
            body.into_response()
        }
        HintOutcome::Unsolvable => hint_body(None, Some("unsolvable"), None).into_response(),
        HintOutcome::Budget => (
            StatusCode::SERVICE_UNAVAILABLE,
            hint_body(None, Some("budget"), None),
        )
            .into_response(),
    })
}

#[derive(Debug, Deserialize)]
struct AnalysisQuery {
    shape: String,
    m: Option<u32>,
    m1: Option<u32>,
    m2: Option<u32>,
    /// Explicit boards: `q,r;q,r;...`.
    cells: Option<String>,
    holes: usize,
    budget: Option<u64>,
}

async fn analysis(
    State(state): State<AppState>,
    query: Result<Query<AnalysisQuery>, QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(q) = query.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let cells = q
        .cells
        .as_deref()
        .map(parse_cell_list)
        .transpose()
        .map_err(ApiError::bad_request)?;
    let shape =
        Shape::from_parts(&q.shape, q.m, q.m1, q.m2, cells).map_err(ApiError::bad_request)?;
    let board = Arc::new(BoardSpec::build(shape).map_err(ApiError::bad_request)?);
    let budget = q.budget.map(Budget).unwrap_or(state.0.config.budget);
    let report = blocking(move || analyze(board, q.holes, budget)).await?;
    match report {
        Ok(r) if r.partial => Ok((StatusCode::SERVICE_UNAVAILABLE, Json(r)).into_response()),
        Ok(r) => Ok(Json(r).into_response()),
        Err(AnalysisError::Graph(GraphError::BudgetExceeded { budget })) => Err(ApiError::new(
            StatusCode::SERVICE_UNAVAILABLE,
            format!("analysis exceeds the budget of {budget} states"),
        )),
        Err(e) => Err(ApiError::bad_request(e)),
    }
}

async fn healthz() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

pub fn router(state: AppState) -> Router {
    let origin = match &state.0.config.cors_origin {
        Some(o) => HeaderValue::from_str(o)
            .map(AllowOrigin::exact)
            .unwrap_or_else(|_| AllowOrigin::any()),
        None => AllowOrigin::any(),
    };
    let cors = CorsLayer::new()
        .allow_origin(origin)
        .allow_methods(Any)
        .allow_headers(Any);
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/moves", post(post_move))
        .route("/games/{id}/solvability", get(solvability))
        .route("/games/{id}/hint", get(hint))
        .route("/analysis", get(analysis))
        .route("/healthz", get(healthz))
        .layer(cors)
        .with_state(state)
}

/// Serves the API until interrupted.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> anyhow::Result<()> {
    let app = router(AppState::new(config)?);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
