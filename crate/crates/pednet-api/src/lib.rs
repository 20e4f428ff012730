//! Request and response types of the pednet HTTP service. Analysis payloads
//! reuse the core crate's serde-enabled types so client, server and CLI
//! agree by construction.

use serde::{Deserialize, Serialize};

use pednet::centrality::{AnalysisRequest, CentralityTable};
use pednet::metric::{Metric, Radius};
use pednet::network::TagFilter;
use pednet::stats::{MeasureKind, ObservationSet, SweepResult, XcorrResult};
use pednet::validate::ValidationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorCode {
    /// Malformed input: files, parameters, unknown ids.
    Input,
    /// The analysis itself failed (degenerate statistics, empty results).
    Analysis,
    /// Unknown network id.
    NotFound,
    Internal,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkFormat {
    Geojson,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoadNetworkRequest {
    #[serde(default)]
    pub name: Option<String>,
    pub format: NetworkFormat,
    /// The file text itself.
    pub content: String,
    #[serde(default)]
    pub snap_tolerance_m: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub id: String,
    pub name: Option<String>,
    pub links: usize,
    pub nodes: usize,
    pub snap_tolerance_m: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoadNetworkResponse {
    pub network: NetworkSummary,
    pub validation: ValidationReport,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilterRequest {
    #[serde(default)]
    pub name: Option<String>,
    pub filter: TagFilter,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyzeResponse {
    pub tables: Vec<CentralityTable>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRequest {
    pub analysis: AnalysisRequest,
    pub measures: Vec<MeasureKind>,
    pub observations: ObservationSet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResponse {
    pub result: SweepResult,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct XcorrRequest {
    pub analysis: AnalysisRequest,
    pub measure: MeasureKind,
    pub radius: Radius,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct XcorrResponse {
    pub result: XcorrResult,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntelligibilityRequest {
    pub metric: Metric,
    pub noise_floor_deg: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntelligibilityResponse {
    pub r_squared: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReachableRequest {
    pub origin: String,
    pub radius: Radius,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReachableResponse {
    pub links: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExportResponse {
    pub geojson: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HealthResponse {
    pub status: String,
    pub version: String,
}
