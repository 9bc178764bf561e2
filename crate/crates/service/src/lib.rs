//! Conceptual space server. A space is built once from an ontology, an
//! attribute collection and a CSV dataset; sessions browse its lattice by
//! meets and joins and bookmark concepts as views shared by the space.
//!
//! | method | path | body | response |
//! |---|---|---|---|
//! | POST | `/spaces` | multipart or JSON `ontology`, `collection`, `dataset`, optional `referenceDate` | `{spaceId, concepts}` |
//! | GET | `/spaces/{id}/lattice` | | lattice document |
//! | POST | `/spaces/{id}/sessions` | | state document |
//! | GET | `/sessions/{id}/state` | | state document |
//! | POST | `/sessions/{id}/meet` | `{elements: [...]}` | state document |
//! | POST | `/sessions/{id}/join` | `{elements: [...]}` | state document |
//! | POST | `/sessions/{id}/mode` | optional `{mode}`; empty toggles | state document |
//! | POST | `/sessions/{id}/views` | `{name, owner?}` | `{name, concept, owner}` |
//!
//! Errors are `{"error": {"module", "message"}}`: 422 for documents or
//! elements that fail validation, 404 for unknown ids, 409 for a taken
//! view name, 400 for malformed requests.

mod error;
mod state;

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{FromRequest, Multipart, Path, Request, State};
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use softscale_core::Mode;

pub use error::ApiError;
pub use state::{
    ElementRef, ElementRow, Operation, Registry, ServiceConfig, SpaceCreated, SpaceDocuments, StateDoc, ViewRecord,
};

type Shared = State<Arc<Registry>>;

pub fn router(config: ServiceConfig) -> Router {
    Router::new()
        .route("/spaces", post(create_space))
        .route("/spaces/{id}/lattice", get(lattice))
        .route("/spaces/{id}/sessions", post(create_session))
        .route("/sessions/{id}/state", get(state))
        .route("/sessions/{id}/meet", post(meet))
        .route("/sessions/{id}/join", post(join))
        .route("/sessions/{id}/mode", post(mode))
        .route("/sessions/{id}/views", post(create_view))
        .with_state(Arc::new(Registry::new(config)))
}

pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(config)).await
}

fn parse_json<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid JSON body: {e}")))
}

async fn read_multipart(mut form: Multipart) -> Result<SpaceDocuments, ApiError> {
    let mut docs = SpaceDocuments::default();
    while let Some(field) = form.next_field().await.map_err(|e| ApiError::bad_request(e.to_string()))? {
        let name = field.name().unwrap_or_default().to_string();
        let text = field.text().await.map_err(|e| ApiError::bad_request(e.to_string()))?;
        match name.as_str() {
            "ontology" => docs.ontology = text,
            "collection" => docs.collection = text,
            "dataset" => docs.dataset = text,
            "referenceDate" => {
                let date = text
                    .trim()
                    .parse()
                    .map_err(|_| ApiError::bad_request(format!("referenceDate `{text}` is not YYYY-MM-DD")))?;
                docs.reference_date = Some(date);
            }
            other => return Err(ApiError::bad_request(format!("unexpected form field `{other}`"))),
        }
    }
    Ok(docs)
}

async fn create_space(State(reg): Shared, req: Request) -> Result<impl IntoResponse, ApiError> {
    let multipart = req
        .headers()
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("multipart/form-data"));
    let docs = if multipart {
        let form = Multipart::from_request(req, &()).await.map_err(|e| ApiError::bad_request(e.body_text()))?;
        read_multipart(form).await?
    } else {
        let body = Bytes::from_request(req, &()).await.map_err(|e| ApiError::bad_request(e.body_text()))?;
        parse_json(&body)?
    };
    let created = reg.create_space(&docs)?;
    Ok((StatusCode::CREATED, Json(created)))
}

async fn lattice(State(reg): Shared, Path(id): Path<u64>) -> Result<impl IntoResponse, ApiError> {
    Ok(Json(reg.lattice(id)?))
}

async fn create_session(State(reg): Shared, Path(id): Path<u64>) -> Result<impl IntoResponse, ApiError> {
    Ok((StatusCode::CREATED, Json(reg.create_session(id)?)))
}

async fn state(State(reg): Shared, Path(id): Path<u64>) -> Result<Json<StateDoc>, ApiError> {
    Ok(Json(reg.state(id)?))
}

#[derive(Deserialize)]
struct Elements {
    elements: Vec<ElementRef>,
}

async fn meet(State(reg): Shared, Path(id): Path<u64>, body: Bytes) -> Result<Json<StateDoc>, ApiError> {
    let Elements { elements } = parse_json(&body)?;
    Ok(Json(reg.transition(id, Operation::Meet, elements)?))
}

async fn join(State(reg): Shared, Path(id): Path<u64>, body: Bytes) -> Result<Json<StateDoc>, ApiError> {
    let Elements { elements } = parse_json(&body)?;
    Ok(Json(reg.transition(id, Operation::Join, elements)?))
}

#[derive(Deserialize)]
struct ModeBody {
    mode: Option<Mode>,
}

async fn mode(State(reg): Shared, Path(id): Path<u64>, body: Bytes) -> Result<Json<StateDoc>, ApiError> {
    let mode = if body.iter().all(u8::is_ascii_whitespace) { None } else { parse_json::<ModeBody>(&body)?.mode };
    Ok(Json(reg.set_mode(id, mode)?))
}

#[derive(Deserialize)]
struct ViewBody {
    name: String,
    #[serde(default)]
    owner: Option<String>,
}

async fn create_view(State(reg): Shared, Path(id): Path<u64>, body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let ViewBody { name, owner } = parse_json(&body)?;
    Ok((StatusCode::CREATED, Json(reg.create_view(id, &name, owner)?)))
}
