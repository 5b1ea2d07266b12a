use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

/// An error response: HTTP status, stable machine-readable code, message.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{code}: {message}")]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

#[derive(Serialize)]
struct Body<'a> {
    error: Inner<'a>,
}

#[derive(Serialize)]
struct Inner<'a> {
    code: &'a str,
    message: &'a str,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
        }
    }

    pub fn bad_spec(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_spec", message)
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn too_large(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "too_large", message)
    }

    pub fn unknown_game(id: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "unknown_game",
            format!("no game with id {id}"),
        )
    }

    pub fn not_your_turn() -> Self {
        Self::new(
            StatusCode::CONFLICT,
            "not_your_turn",
            "it is the engine's turn",
        )
    }

    pub fn not_engine_turn() -> Self {
        Self::new(
            StatusCode::CONFLICT,
            "not_engine_turn",
            "it is the human's turn",
        )
    }

    pub fn occupied(vertex: usize) -> Self {
        Self::new(
            StatusCode::CONFLICT,
            "occupied",
            format!("vertex {vertex} is already assigned"),
        )
    }

    pub fn bad_vertex(vertex: usize, n: usize) -> Self {
        Self::new(
            StatusCode::BAD_REQUEST,
            "bad_vertex",
            format!("vertex {vertex} does not exist (graph has {n} vertices)"),
        )
    }

    pub fn game_over() -> Self {
        Self::new(StatusCode::CONFLICT, "game_over", "the game is over")
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Body {
            error: Inner {
                code: self.code,
                message: &self.message,
            },
        };
        (self.status, Json(body)).into_response()
    }
}
