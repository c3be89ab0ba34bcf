//! HTTP/JSON service through which clients play against engine agents.
//!
//! | method | path                      | body / query          |
//! |--------|---------------------------|-----------------------|
//! | POST   | `/games`                  | players and seed      |
//! | GET    | `/games/{id}`             |                       |
//! | GET    | `/games/{id}/legal`       | `?from=2g2` optional  |
//! | POST   | `/games/{id}/moves`       | `{"move": "2g2-2g3"}` |
//! | POST   | `/games/{id}/engine-move` |                       |
//! | GET    | `/games/{id}/eval`        | `?weights=identity`   |

pub mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use dragonfish_core::notation::{format_move, format_square, parse_move};
use dragonfish_core::{best_move, Outcome};
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;
use tower_http::cors::CorsLayer;

pub use session::{GameView, NewGame, PlayerSpec, Session};
use session::{eval_view, legal_views, MoveView};

/// Sessions live for the lifetime of the process. Each has its own lock, so
/// a long engine search blocks only its own game.
#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<std::sync::Mutex<HashMap<u64, Arc<Mutex<Session>>>>>,
    next_id: Arc<AtomicU64>,
}

impl AppState {
    fn session(&self, id: u64) -> Result<Arc<Mutex<Session>>, ApiError> {
        let map = self.sessions.lock().expect("session map poisoned");
        map.get(&id).cloned().ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "not-found", format!("no game {id}")))
    }
}

#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    pub error: &'static str,
    pub message: String,
    /// Present when a move was rejected: the moves that would be accepted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub legal: Option<Vec<String>>,
}

impl ApiError {
    fn new(status: StatusCode, error: &'static str, message: impl Into<String>) -> ApiError {
        ApiError { status, error, message: message.into(), legal: None }
    }

    fn bad_request(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, "bad-request", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> ApiError {
        ApiError::bad_request(r.body_text())
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/legal", get(get_legal))
        .route("/games/{id}/moves", post(post_move))
        .route("/games/{id}/engine-move", post(engine_move))
        .route("/games/{id}/eval", get(get_eval))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::default())).await
}

async fn create_game(
    State(state): State<AppState>,
    body: Option<Json<serde_json::Value>>,
) -> Result<(StatusCode, Json<GameView>), ApiError> {
    let value = body.map_or(serde_json::Value::Object(Default::default()), |Json(v)| v);
    let request: NewGame = serde_json::from_value(value).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let id = state.next_id.fetch_add(1, Ordering::Relaxed) + 1;
    let session = Session::new(id, &request).map_err(ApiError::bad_request)?;
    let view = session.view();
    state.sessions.lock().expect("session map poisoned").insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_game(State(state): State<AppState>, Path(id): Path<u64>) -> Result<Json<GameView>, ApiError> {
    Ok(Json(state.session(id)?.lock().await.view()))
}

#[derive(Deserialize)]
struct LegalQuery {
    from: Option<String>,
}

#[derive(Serialize)]
struct LegalView {
    side_to_move: &'static str,
    moves: Vec<MoveView>,
}

async fn get_legal(
    State(state): State<AppState>,
    Path(id): Path<u64>,
    Query(q): Query<LegalQuery>,
) -> Result<Json<LegalView>, ApiError> {
    let session = state.session(id)?;
    let session = session.lock().await;
    let mut moves = legal_views(&session.position);
    if session.outcome() != Outcome::Ongoing {
        // Capped games can still have moves on the board; none may be played.
        moves.clear();
    }
    if let Some(from) = q.from {
        let square = parse_square(&from)?;
        moves.retain(|m| m.from == square);
    }
    Ok(Json(LegalView { side_to_move: session::color_name(session.position.side_to_move), moves }))
}

/// Normalises square text by parsing it as the origin of a dummy move.
fn parse_square(text: &str) -> Result<String, ApiError> {
    let mt = parse_move(&format!("{text}-1a1")).map_err(|_| ApiError::bad_request(format!("bad square {text:?}")))?;
    Ok(format_square(mt.from))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveRequest {
    #[serde(rename = "move")]
    text: String,
}

fn check_ongoing(session: &Session) -> Result<(), ApiError> {
    if session.outcome() != Outcome::Ongoing {
        return Err(ApiError::new(StatusCode::CONFLICT, "finished", "the game is over"));
    }
    Ok(())
}

async fn post_move(
    State(state): State<AppState>,
    Path(id): Path<u64>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> Result<Json<GameView>, ApiError> {
    let Json(request) = body?;
    let session = state.session(id)?;
    let mut session = session.lock().await;
    check_ongoing(&session)?;
    if session.engine_to_move().is_some() {
        return Err(ApiError::new(StatusCode::CONFLICT, "not-your-turn", "the side to move is played by the engine"));
    }
    let text = parse_move(&request.text).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "parse", e.to_string()))?;
    match text.resolve(&session.position) {
        Ok(mv) => {
            session.play(mv);
            Ok(Json(session.view()))
        }
        Err(e) => {
            let mut err = ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "illegal", e.to_string());
            err.legal = Some(legal_views(&session.position).into_iter().map(|m| m.text).collect());
            Err(err)
        }
    }
}

#[derive(Serialize)]
struct EngineMoveView {
    #[serde(rename = "move")]
    played: String,
    game: GameView,
}

async fn engine_move(State(state): State<AppState>, Path(id): Path<u64>) -> Result<Json<EngineMoveView>, ApiError> {
    let session = state.session(id)?;
    let mut session = session.lock().await;
    check_ongoing(&session)?;
    let Some(agent) = session.engine_to_move() else {
        return Err(ApiError::new(StatusCode::CONFLICT, "not-engine-turn", "the side to move is played by a human"));
    };
    let position = session.position.clone();
    let mv = tokio::task::spawn_blocking(move || best_move(&position, &agent))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?;
    session.play(mv);
    Ok(Json(EngineMoveView { played: format_move(&mv), game: session.view() }))
}

#[derive(Deserialize)]
struct EvalQuery {
    weights: Option<String>,
}

async fn get_eval(
    State(state): State<AppState>,
    Path(id): Path<u64>,
    Query(q): Query<EvalQuery>,
) -> Result<Json<session::EvalView>, ApiError> {
    let session = state.session(id)?;
    let session = session.lock().await;
    let view = eval_view(&session.position, q.weights.as_deref().unwrap_or("identity")).map_err(ApiError::bad_request)?;
    Ok(Json(view))
}
