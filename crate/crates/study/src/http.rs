//! JSON-over-HTTP binding of the study service.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;

use crate::error::StudyError;
use crate::protocol::Step;
use crate::service::{elicit_begin, elicit_drag, DragRequest, StudyService};

impl IntoResponse for StudyError {
    fn into_response(self) -> Response {
        let status = match &self {
            StudyError::UnknownParticipant(_) => StatusCode::NOT_FOUND,
            StudyError::Duplicate(_) | StudyError::OrderViolation { .. } | StudyError::NotAvailable(_) => {
                StatusCode::CONFLICT
            }
            StudyError::Expired(_) => StatusCode::GONE,
            StudyError::Malformed(_) | StudyError::Belief(_) => StatusCode::UNPROCESSABLE_ENTITY,
            StudyError::Storage(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        if status.is_server_error() {
            tracing::error!(error = %self, "request failed");
        }
        (status, Json(json!({ "error": self.kind(), "message": self.to_string() }))).into_response()
    }
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, StudyError> {
    payload.map(|Json(v)| v).map_err(|e| StudyError::Malformed(e.body_text()))
}

#[derive(Deserialize)]
struct NewSession {
    participant_id: String,
}

#[derive(Deserialize)]
struct Begin {
    point_estimate: f64,
}

#[derive(Deserialize)]
struct ExportQuery {
    #[serde(default)]
    include_excluded: bool,
}

async fn create_session(
    State(service): State<Arc<StudyService>>,
    payload: Result<Json<NewSession>, JsonRejection>,
) -> Result<impl IntoResponse, StudyError> {
    let request = body(payload)?;
    let assignment = service.create_session(&request.participant_id)?;
    Ok((StatusCode::CREATED, Json(assignment)))
}

async fn record_step(
    State(service): State<Arc<StudyService>>,
    Path(id): Path<String>,
    payload: Result<Json<Step>, JsonRejection>,
) -> Result<impl IntoResponse, StudyError> {
    let step = body(payload)?;
    Ok(Json(service.record_step(&id, step)?))
}

async fn stimulus(
    State(service): State<Arc<StudyService>>,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, StudyError> {
    Ok(Json(service.stimulus(&id)?))
}

async fn assistance(
    State(service): State<Arc<StudyService>>,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, StudyError> {
    Ok(Json(service.assistance(&id)?))
}

async fn begin(payload: Result<Json<Begin>, JsonRejection>) -> Result<impl IntoResponse, StudyError> {
    Ok(Json(elicit_begin(body(payload)?.point_estimate)?))
}

async fn drag(payload: Result<Json<DragRequest>, JsonRejection>) -> Result<impl IntoResponse, StudyError> {
    let request = body(payload)?;
    // Solving for the concentration is CPU work; keep it off the reactor.
    let view = tokio::task::spawn_blocking(move || elicit_drag(&request))
        .await
        .map_err(|e| StudyError::Storage(format!("drag task failed: {e}")))??;
    Ok(Json(view))
}

async fn export(
    State(service): State<Arc<StudyService>>,
    Query(query): Query<ExportQuery>,
) -> Result<impl IntoResponse, StudyError> {
    let csv = service.export_csv(query.include_excluded)?;
    Ok(([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], csv))
}

pub fn router(service: Arc<StudyService>) -> Router {
    Router::new()
        .route("/session", post(create_session))
        .route("/session/{id}/step", post(record_step))
        .route("/session/{id}/stimulus", get(stimulus))
        .route("/session/{id}/assistance", get(assistance))
        .route("/elicit/begin", post(begin))
        .route("/elicit/drag", post(drag))
        .route("/export.csv", get(export))
        .with_state(service)
}

/// Serve until Ctrl-C.
pub async fn serve(addr: SocketAddr, service: Arc<StudyService>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "study service listening");
    axum::serve(listener, router(service))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
