//! Thin async client over the pednet service API.

use pednet::centrality::AnalysisRequest;
use pednet_api::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("transport: {0}")]
    Transport(#[from] reqwest::Error),
    #[error("service error ({status}): {}", .error.message)]
    Api { status: u16, error: ApiError },
}

impl ClientError {
    pub fn api_code(&self) -> Option<ErrorCode> {
        match self {
            ClientError::Api { error, .. } => Some(error.code),
            _ => None,
        }
    }
}

pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    pub fn new(base_url: impl Into<String>) -> Client {
        Client {
            base: base_url.into().trim_end_matches('/').to_string(),
            http: reqwest::Client::new(),
        }
    }

    async fn decode<T: DeserializeOwned>(response: reqwest::Response) -> Result<T, ClientError> {
        let status = response.status();
        if status.is_success() {
            Ok(response.json().await?)
        } else {
            let error = response.json::<ApiError>().await.unwrap_or(ApiError {
                code: ErrorCode::Internal,
                message: format!("http status {status}"),
            });
            Err(ClientError::Api {
                status: status.as_u16(),
                error,
            })
        }
    }

    async fn post_json<B: Serialize, T: DeserializeOwned>(
        &self,
        path: &str,
        body: &B,
    ) -> Result<T, ClientError> {
        let response = self
            .http
            .post(format!("{}{}", self.base, path))
            .json(body)
            .send()
            .await?;
        Self::decode(response).await
    }

    async fn get_json<T: DeserializeOwned>(&self, path: &str) -> Result<T, ClientError> {
        let response = self.http.get(format!("{}{}", self.base, path)).send().await?;
        Self::decode(response).await
    }

    pub async fn health(&self) -> Result<HealthResponse, ClientError> {
        self.get_json("/health").await
    }

    pub async fn load_network(
        &self,
        request: &LoadNetworkRequest,
    ) -> Result<LoadNetworkResponse, ClientError> {
        self.post_json("/networks", request).await
    }

    pub async fn list_networks(&self) -> Result<Vec<NetworkSummary>, ClientError> {
        self.get_json("/networks").await
    }

    pub async fn validation(&self, id: &str) -> Result<pednet::ValidationReport, ClientError> {
        self.get_json(&format!("/networks/{id}/validation")).await
    }

    pub async fn filter(
        &self,
        id: &str,
        request: &FilterRequest,
    ) -> Result<LoadNetworkResponse, ClientError> {
        self.post_json(&format!("/networks/{id}/filter"), request).await
    }

    pub async fn export(&self, id: &str) -> Result<ExportResponse, ClientError> {
        self.get_json(&format!("/networks/{id}/export")).await
    }

    pub async fn analyze(
        &self,
        id: &str,
        request: &AnalysisRequest,
    ) -> Result<AnalyzeResponse, ClientError> {
        self.post_json(&format!("/networks/{id}/analyze"), request).await
    }

    pub async fn sweep(&self, id: &str, request: &SweepRequest) -> Result<SweepResponse, ClientError> {
        self.post_json(&format!("/networks/{id}/sweep"), request).await
    }

    pub async fn xcorr(&self, id: &str, request: &XcorrRequest) -> Result<XcorrResponse, ClientError> {
        self.post_json(&format!("/networks/{id}/xcorr"), request).await
    }

    pub async fn intelligibility(
        &self,
        id: &str,
        request: &IntelligibilityRequest,
    ) -> Result<IntelligibilityResponse, ClientError> {
        self.post_json(&format!("/networks/{id}/intelligibility"), request)
            .await
    }

    pub async fn reachable(
        &self,
        id: &str,
        request: &ReachableRequest,
    ) -> Result<ReachableResponse, ClientError> {
        self.post_json(&format!("/networks/{id}/reachable"), request).await
    }

    pub async fn delete_network(&self, id: &str) -> Result<(), ClientError> {
        let response = self
            .http
            .delete(format!("{}/networks/{id}", self.base))
            .send()
            .await?;
        if response.status().is_success() {
            Ok(())
        } else {
            let status = response.status();
            let error = response.json::<ApiError>().await.unwrap_or(ApiError {
                code: ErrorCode::Internal,
                message: format!("http status {status}"),
            });
            Err(ClientError::Api {
                status: status.as_u16(),
                error,
            })
        }
    }
}
