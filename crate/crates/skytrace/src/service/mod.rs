//! Ephemeral HTTP service. Uploaded logs live in memory until they idle
//! out; nothing is ever written to disk.

mod error;
mod sessions;

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::rejection::{BytesRejection, QueryRejection};
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use skytrace_core::encoding::ScaleKind;
use skytrace_core::geo::ChartBudget;
use skytrace_core::model::LayerKind;
use skytrace_core::ulog::parse_log;
use tower_http::trace::TraceLayer;

pub use error::ApiError;
pub use sessions::{Session, SessionStore};

use crate::config::AnalysisConfig;
use crate::export;
use crate::query::{self, MetaView, SeriesQuery, TrajectoryQuery};

pub const DEFAULT_TTL: Duration = Duration::from_secs(30 * 60);
pub const DEFAULT_UPLOAD_LIMIT: usize = 256 * 1024 * 1024;
pub const DEFAULT_TILE_URL: &str = "https://tile.openstreetmap.org/{z}/{x}/{y}.png";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub bind: SocketAddr,
    pub session_ttl: Duration,
    pub max_upload_bytes: usize,
    /// XYZ template handed to clients for the map background.
    pub tile_url: String,
    pub analysis: AnalysisConfig,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            bind: SocketAddr::from(([127, 0, 0, 1], 8080)),
            session_ttl: DEFAULT_TTL,
            max_upload_bytes: DEFAULT_UPLOAD_LIMIT,
            tile_url: DEFAULT_TILE_URL.to_string(),
            analysis: AnalysisConfig::default(),
        }
    }
}

#[derive(Debug)]
pub struct AppState {
    pub sessions: SessionStore,
    pub config: ServiceConfig,
}

pub fn router(config: ServiceConfig) -> (Router, Arc<AppState>) {
    let state = Arc::new(AppState {
        sessions: SessionStore::new(config.session_ttl),
        config,
    });
    let limit = state.config.max_upload_bytes;
    let app = Router::new()
        .route("/config", get(client_config))
        .route("/logs", post(upload).layer(DefaultBodyLimit::max(limit)))
        .route("/logs/{id}", axum::routing::delete(close))
        .route("/logs/{id}/meta", get(meta))
        .route("/logs/{id}/messages", get(messages))
        .route("/logs/{id}/series", get(series))
        .route("/logs/{id}/trajectory", get(trajectory))
        .route("/logs/{id}/events", get(events))
        .route("/logs/{id}/overview", get(overview))
        .route("/logs/{id}/export.geojson", get(export_geojson))
        .layer(TraceLayer::new_for_http())
        .with_state(state.clone());
    (app, state)
}

/// Binds and serves until Ctrl-C.
pub async fn serve(config: ServiceConfig) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(config.bind).await?;
    run(listener, config, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}

/// Serves on `listener` with the eviction timer running until `shutdown` resolves.
pub async fn run(
    listener: tokio::net::TcpListener,
    config: ServiceConfig,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> anyhow::Result<()> {
    let (app, state) = router(config);
    let period = (state.sessions.ttl() / 4).clamp(Duration::from_secs(1), Duration::from_secs(60));
    let evictor = state.clone();
    let eviction = tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        loop {
            tick.tick().await;
            let n = evictor.sessions.evict_idle();
            if n > 0 {
                tracing::info!(evicted = n, live = evictor.sessions.len(), "idle sessions dropped");
            }
        }
    });
    tracing::info!(addr = %listener.local_addr()?, "listening");
    let served = axum::serve(listener, app).with_graceful_shutdown(shutdown).await;
    eviction.abort();
    Ok(served?)
}

type Shared = State<Arc<AppState>>;

fn session(state: &AppState, id: &str) -> Result<Arc<Session>, ApiError> {
    state.sessions.get(id).ok_or(ApiError::UnknownSession)
}

fn params<T>(q: Result<Query<T>, QueryRejection>) -> Result<T, ApiError> {
    q.map(|Query(p)| p).map_err(|e| ApiError::BadRequest(e.body_text()))
}

#[derive(Serialize)]
struct ClientConfig<'a> {
    tile_url: &'a str,
    session_ttl_secs: u64,
    max_upload_bytes: usize,
    chart_tolerance_px: f64,
    chart_max_points: Option<usize>,
}

async fn client_config(State(state): Shared) -> impl IntoResponse {
    let budget = ChartBudget::new(0.0);
    Json(ClientConfig {
        tile_url: &state.config.tile_url,
        session_ttl_secs: state.config.session_ttl.as_secs(),
        max_upload_bytes: state.config.max_upload_bytes,
        chart_tolerance_px: budget.tolerance_px,
        chart_max_points: budget.max_points,
    })
    .into_response()
}

#[derive(Serialize)]
struct Opened {
    id: String,
    meta: MetaView,
}

async fn upload(State(state): Shared, body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let bytes = body.map_err(|e| match e.status() {
        StatusCode::PAYLOAD_TOO_LARGE => ApiError::TooLarge {
            limit: state.config.max_upload_bytes,
        },
        _ => ApiError::BadRequest(e.body_text()),
    })?;
    let log = tokio::task::spawn_blocking(move || parse_log(&bytes))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))??;
    let meta = query::meta(&log, &state.config.analysis);
    let (id, _) = state.sessions.insert(log);
    tracing::info!(live = state.sessions.len(), "session opened");
    Ok(Json(Opened { id, meta }).into_response())
}

async fn close(State(state): Shared, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    if state.sessions.remove(&id) {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::UnknownSession)
    }
}

async fn meta(State(state): Shared, Path(id): Path<String>) -> Result<Response, ApiError> {
    let s = session(&state, &id)?;
    Ok(Json(query::meta(&s.log, &state.config.analysis)).into_response())
}

async fn messages(State(state): Shared, Path(id): Path<String>) -> Result<Response, ApiError> {
    let s = session(&state, &id)?;
    Ok(Json(query::messages(&s.log)).into_response())
}

#[derive(Debug, Deserialize)]
struct SeriesParams {
    msg: String,
    #[serde(default)]
    inst: u8,
    field: String,
    start: Option<u64>,
    end: Option<u64>,
    /// Chart width in pixels.
    px: Option<f64>,
    /// Chart height in pixels.
    h: Option<f64>,
    /// Tolerance in pixels; 0 returns every stored point.
    tol: Option<f64>,
    /// `false` adds the radial pre-pass.
    hq: Option<bool>,
}

async fn series(
    State(state): Shared,
    Path(id): Path<String>,
    q: Result<Query<SeriesParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let p = params(q)?;
    let s = session(&state, &id)?;
    let mut budget = ChartBudget::new(p.px.unwrap_or(800.0));
    if let Some(h) = p.h {
        budget.height_px = h;
    }
    if let Some(tol) = p.tol {
        budget.tolerance_px = tol;
    }
    if let Some(hq) = p.hq {
        budget.high_quality = hq;
    }
    if !(budget.width_px > 0.0 && budget.height_px > 0.0 && budget.tolerance_px >= 0.0) {
        return Err(ApiError::BadRequest("px and h must be positive, tol non-negative".into()));
    }
    let q = SeriesQuery {
        attr: skytrace_core::model::AttributeRef::new(p.msg, p.inst, p.field),
        window: query::window(p.start, p.end)?,
        budget,
    };
    Ok(Json(query::series(&s.log, &q)?).into_response())
}

#[derive(Debug, Deserialize)]
struct TrajectoryParams {
    layer: Option<String>,
    attr: Option<String>,
    start: Option<u64>,
    end: Option<u64>,
    zoom: Option<u8>,
    scale: Option<String>,
}

async fn trajectory(
    State(state): Shared,
    Path(id): Path<String>,
    q: Result<Query<TrajectoryParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let p = params(q)?;
    let s = session(&state, &id)?;
    let layer = match p.layer.as_deref() {
        None => LayerKind::Recorded,
        Some(l) => LayerKind::parse(l).ok_or_else(|| ApiError::BadRequest(format!("unknown layer '{l}'")))?,
    };
    let scale = match p.scale.as_deref() {
        None => ScaleKind::Sequential,
        Some(k) => ScaleKind::parse(k)
            .filter(|k| *k != ScaleKind::Categorical)
            .ok_or_else(|| ApiError::BadRequest(format!("unsupported scale '{k}'")))?,
    };
    let attr = p
        .attr
        .as_deref()
        .map(|a| query::resolve_attr(&s.log, &state.config.analysis, a))
        .transpose()?;
    let q = TrajectoryQuery {
        layer,
        attr,
        window: query::window(p.start, p.end)?,
        zoom: p.zoom.filter(|z| *z <= 24),
        scale,
    };
    Ok(Json(query::trajectory(&s.log, &state.config.analysis, &q)?).into_response())
}

async fn events(State(state): Shared, Path(id): Path<String>) -> Result<Response, ApiError> {
    let s = session(&state, &id)?;
    Ok(Json(query::events(&s.log, &state.config.analysis)).into_response())
}

async fn overview(State(state): Shared, Path(id): Path<String>) -> Result<Response, ApiError> {
    let s = session(&state, &id)?;
    Ok(Json(query::overview(&s.log, &state.config.analysis)).into_response())
}

#[derive(Debug, Deserialize)]
struct ExportParams {
    attr: Option<String>,
    start: Option<u64>,
    end: Option<u64>,
}

async fn export_geojson(
    State(state): Shared,
    Path(id): Path<String>,
    q: Result<Query<ExportParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let p = params(q)?;
    let s = session(&state, &id)?;
    let cfg = &state.config.analysis;
    let attr = p.attr.as_deref().map(|a| query::resolve_attr(&s.log, cfg, a)).transpose()?;
    let window = query::window(p.start, p.end)?;
    let doc = export::geojson(&s.log, cfg, attr.as_ref(), window.as_ref())?;
    let body = serde_json::to_vec(&doc).map_err(|e| ApiError::Internal(e.to_string()))?;
    Ok(([(header::CONTENT_TYPE, "application/geo+json")], body).into_response())
}
