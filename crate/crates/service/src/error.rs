use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use softscale_core::lattice::LatticeError;
use softscale_core::PipelineError;

/// An error response: `{"error": {"module": ..., "message": ...}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub module: &'static str,
    pub message: String,
}

#[derive(Serialize)]
struct Body<'a> {
    error: Detail<'a>,
}

#[derive(Serialize)]
struct Detail<'a> {
    module: &'a str,
    message: &'a str,
}

impl ApiError {
    pub fn new(status: StatusCode, module: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, module, message: message.into() }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "service", message)
    }

    pub fn not_found(what: &str, id: u64) -> Self {
        Self::new(StatusCode::NOT_FOUND, "service", format!("no {what} {id}"))
    }
}

impl From<PipelineError> for ApiError {
    fn from(e: PipelineError) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.module(), e.to_string())
    }
}

impl From<LatticeError> for ApiError {
    fn from(e: LatticeError) -> Self {
        let status = match e {
            LatticeError::DuplicateView(_) => StatusCode::CONFLICT,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::new(status, "fca-lattice", e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Body { error: Detail { module: self.module, message: &self.message } };
        (self.status, Json(body)).into_response()
    }
}
