//! Analysis service: loads networks into immutable in-memory sessions and
//! serves validation, filtering, centrality analyses, sweeps and
//! correlation matrices over HTTP/JSON. Compute runs on blocking threads;
//! stored networks are shared read-only, so any number of requests can
//! analyze the same network concurrently.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use axum::extract::{DefaultBodyLimit, Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};

use pednet::centrality::{analyze, intelligibility, AnalysisError, AnalysisRequest};
use pednet::io;
use pednet::network::{Network, NetworkError};
use pednet::routing::{reachable_set, RoutingError};
use pednet::stats::{cross_correlation_matrix, sweep, SweepError};
use pednet::validate::{validate_network, ValidationConfig, ValidationReport};
use pednet_api::*;

pub struct StoredNetwork {
    pub summary: NetworkSummary,
    pub network: Network,
    pub validation: ValidationReport,
}

#[derive(Default)]
pub struct AppState {
    networks: RwLock<HashMap<String, Arc<StoredNetwork>>>,
}

impl AppState {
    pub fn new() -> Arc<AppState> {
        Arc::new(AppState::default())
    }

    fn insert(&self, name: Option<String>, network: Network) -> Arc<StoredNetwork> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let validation = validate_network(&network, &ValidationConfig::default());
        let stored = Arc::new(StoredNetwork {
            summary: NetworkSummary {
                id: id.clone(),
                name,
                links: network.links().len(),
                nodes: network.nodes().len(),
                snap_tolerance_m: network.snap_tolerance_m(),
            },
            network,
            validation,
        });
        self.networks.write().unwrap().insert(id, stored.clone());
        stored
    }

    fn get(&self, id: &str) -> Result<Arc<StoredNetwork>, ServiceError> {
        self.networks
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::not_found(format!("no network with id `{id}`")))
    }
}

/// Error with the HTTP mapping baked in.
pub struct ServiceError {
    status: StatusCode,
    body: ApiError,
}

impl ServiceError {
    fn input(message: impl Into<String>) -> Self {
        ServiceError {
            status: StatusCode::BAD_REQUEST,
            body: ApiError {
                code: ErrorCode::Input,
                message: message.into(),
            },
        }
    }

    fn analysis(message: impl Into<String>) -> Self {
        ServiceError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            body: ApiError {
                code: ErrorCode::Analysis,
                message: message.into(),
            },
        }
    }

    fn not_found(message: impl Into<String>) -> Self {
        ServiceError {
            status: StatusCode::NOT_FOUND,
            body: ApiError {
                code: ErrorCode::NotFound,
                message: message.into(),
            },
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        ServiceError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: ApiError {
                code: ErrorCode::Internal,
                message: message.into(),
            },
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<NetworkError> for ServiceError {
    fn from(e: NetworkError) -> Self {
        ServiceError::input(e.to_string())
    }
}

impl From<io::IoError> for ServiceError {
    fn from(e: io::IoError) -> Self {
        ServiceError::input(e.to_string())
    }
}

impl From<AnalysisError> for ServiceError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::NoMetrics | AnalysisError::NoRadii => ServiceError::input(e.to_string()),
            _ => ServiceError::analysis(e.to_string()),
        }
    }
}

impl From<SweepError> for ServiceError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::UnknownObservationLink(_) | SweepError::NoObservations => {
                ServiceError::input(e.to_string())
            }
            SweepError::Analysis(inner) => inner.into(),
        }
    }
}

impl From<RoutingError> for ServiceError {
    fn from(e: RoutingError) -> Self {
        ServiceError::input(e.to_string())
    }
}

pub fn app(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/networks", post(load_network).get(list_networks))
        .route("/networks/{id}", get(get_network).delete(delete_network))
        .route("/networks/{id}/validation", get(get_validation))
        .route("/networks/{id}/filter", post(filter_network))
        .route("/networks/{id}/export", get(export_network))
        .route("/networks/{id}/analyze", post(run_analyze))
        .route("/networks/{id}/sweep", post(run_sweep))
        .route("/networks/{id}/xcorr", post(run_xcorr))
        .route("/networks/{id}/intelligibility", post(run_intelligibility))
        .route("/networks/{id}/reachable", post(run_reachable))
        .layer(DefaultBodyLimit::max(512 * 1024 * 1024))
        .with_state(state)
}

/// Binds the router on the listener until the task is dropped.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: Arc<AppState>,
) -> std::io::Result<()> {
    axum::serve(listener, app(state)).await
}

async fn health() -> Json<HealthResponse> {
    Json(HealthResponse {
        status: "ok".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

async fn load_network(
    State(state): State<Arc<AppState>>,
    Json(req): Json<LoadNetworkRequest>,
) -> Result<Json<LoadNetworkResponse>, ServiceError> {
    let snap = req
        .snap_tolerance_m
        .unwrap_or(pednet::network::DEFAULT_SNAP_TOLERANCE_M);
    let loaded = tokio::task::spawn_blocking(move || -> Result<_, ServiceError> {
        let (records, warnings) = match req.format {
            NetworkFormat::Geojson => io::parse_geojson(&req.content)?,
            NetworkFormat::Csv => (io::parse_csv_geometry(&req.content)?, Vec::new()),
        };
        let network = Network::build(records, snap)?;
        Ok((req.name, network, warnings))
    })
    .await
    .map_err(|e| ServiceError::internal(e.to_string()))??;
    let (name, network, warnings) = loaded;
    let stored = state.insert(name, network);
    Ok(Json(LoadNetworkResponse {
        network: stored.summary.clone(),
        validation: stored.validation.clone(),
        warnings,
    }))
}

async fn list_networks(State(state): State<Arc<AppState>>) -> Json<Vec<NetworkSummary>> {
    let mut list: Vec<NetworkSummary> = state
        .networks
        .read()
        .unwrap()
        .values()
        .map(|n| n.summary.clone())
        .collect();
    list.sort_by(|a, b| a.id.cmp(&b.id));
    Json(list)
}

async fn get_network(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<NetworkSummary>, ServiceError> {
    Ok(Json(state.get(&id)?.summary.clone()))
}

async fn delete_network(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<StatusCode, ServiceError> {
    match state.networks.write().unwrap().remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ServiceError::not_found(format!("no network with id `{id}`"))),
    }
}

async fn get_validation(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<ValidationReport>, ServiceError> {
    Ok(Json(state.get(&id)?.validation.clone()))
}

async fn filter_network(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<FilterRequest>,
) -> Result<Json<LoadNetworkResponse>, ServiceError> {
    let stored = state.get(&id)?;
    let filtered =
        tokio::task::spawn_blocking(move || stored.network.filter(&req.filter).map(|n| (req.name, n)))
            .await
            .map_err(|e| ServiceError::internal(e.to_string()))??;
    let (name, network) = filtered;
    let stored = state.insert(name, network);
    Ok(Json(LoadNetworkResponse {
        network: stored.summary.clone(),
        validation: stored.validation.clone(),
        warnings: Vec::new(),
    }))
}

async fn export_network(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<ExportResponse>, ServiceError> {
    let stored = state.get(&id)?;
    let geojson =
        tokio::task::spawn_blocking(move || io::network_to_geojson(&stored.network))
            .await
            .map_err(|e| ServiceError::internal(e.to_string()))?;
    Ok(Json(ExportResponse { geojson }))
}

async fn run_analyze(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<AnalysisRequest>,
) -> Result<Json<AnalyzeResponse>, ServiceError> {
    let stored = state.get(&id)?;
    let tables = tokio::task::spawn_blocking(move || analyze(&stored.network, &req))
        .await
        .map_err(|e| ServiceError::internal(e.to_string()))??;
    Ok(Json(AnalyzeResponse { tables }))
}

async fn run_sweep(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<SweepRequest>,
) -> Result<Json<SweepResponse>, ServiceError> {
    let stored = state.get(&id)?;
    let result = tokio::task::spawn_blocking(move || {
        sweep(&stored.network, &req.analysis, &req.measures, &req.observations)
    })
    .await
    .map_err(|e| ServiceError::internal(e.to_string()))??;
    Ok(Json(SweepResponse { result }))
}

async fn run_xcorr(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<XcorrRequest>,
) -> Result<Json<XcorrResponse>, ServiceError> {
    let stored = state.get(&id)?;
    let result = tokio::task::spawn_blocking(move || {
        cross_correlation_matrix(&stored.network, &req.analysis, req.measure, req.radius)
    })
    .await
    .map_err(|e| ServiceError::internal(e.to_string()))??;
    Ok(Json(XcorrResponse { result }))
}

async fn run_intelligibility(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<IntelligibilityRequest>,
) -> Result<Json<IntelligibilityResponse>, ServiceError> {
    let stored = state.get(&id)?;
    let r_squared = tokio::task::spawn_blocking(move || {
        intelligibility(&stored.network, req.metric, req.noise_floor_deg)
    })
    .await
    .map_err(|e| ServiceError::internal(e.to_string()))??;
    Ok(Json(IntelligibilityResponse { r_squared }))
}

async fn run_reachable(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<ReachableRequest>,
) -> Result<Json<ReachableResponse>, ServiceError> {
    let stored = state.get(&id)?;
    let links = tokio::task::spawn_blocking(move || {
        let router = pednet::routing::Router::new(&stored.network, pednet::metric::DEFAULT_NOISE_FLOOR_DEG);
        reachable_set(&router, &req.origin, req.radius)
    })
    .await
    .map_err(|e| ServiceError::internal(e.to_string()))??;
    Ok(Json(ReachableResponse {
        links: links.into_iter().collect(),
    }))
}
