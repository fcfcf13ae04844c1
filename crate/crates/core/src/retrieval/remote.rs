//! HTTP client for an external embedding service.
//!
//! Wire protocol: `POST {endpoint}{path}` with body `{"ids": [[int, ...], ...]}`,
//! answered by `{"embeddings": [[number, ...], ...]}` in request order. Any
//! non-2xx status or schema violation is an error; the client never fills in
//! vectors on its own.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::embedder::{validate_embeddings, EmbedError, Embedder};
use super::Embedding;
use crate::vocab::TokenId;

pub const DEFAULT_PATH: &str = "/embed";
pub const DEFAULT_BATCH_SIZE: usize = 32;
pub const DEFAULT_MAX_IN_FLIGHT: usize = 4;
const MAX_RESPONSE_BYTES: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedRequest {
    pub ids: Vec<Vec<TokenId>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedResponse {
    pub embeddings: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct RemoteEmbedderBuilder {
    endpoint: String,
    dim: usize,
    path: String,
    batch_size: usize,
    max_in_flight: usize,
    timeout: Duration,
}

impl RemoteEmbedderBuilder {
    pub fn path(mut self, path: impl Into<String>) -> Self {
        self.path = path.into();
        self
    }

    pub fn batch_size(mut self, batch_size: usize) -> Self {
        self.batch_size = batch_size.max(1);
        self
    }

    /// Upper bound on concurrent requests.
    pub fn max_in_flight(mut self, max_in_flight: usize) -> Self {
        self.max_in_flight = max_in_flight.max(1);
        self
    }

    pub fn timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn build(self) -> RemoteEmbedder {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let url = format!(
            "{}/{}",
            self.endpoint.trim_end_matches('/'),
            self.path.trim_start_matches('/')
        );
        RemoteEmbedder {
            url,
            dim: self.dim,
            batch_size: self.batch_size,
            max_in_flight: self.max_in_flight,
            agent,
        }
    }
}

/// [`Embedder`] backed by an HTTP embedding service.
#[derive(Debug, Clone)]
pub struct RemoteEmbedder {
    url: String,
    dim: usize,
    batch_size: usize,
    max_in_flight: usize,
    agent: ureq::Agent,
}

impl RemoteEmbedder {
    pub fn builder(endpoint: impl Into<String>, dim: usize) -> RemoteEmbedderBuilder {
        RemoteEmbedderBuilder {
            endpoint: endpoint.into(),
            dim,
            path: DEFAULT_PATH.to_owned(),
            batch_size: DEFAULT_BATCH_SIZE,
            max_in_flight: DEFAULT_MAX_IN_FLIGHT,
            timeout: Duration::from_secs(60),
        }
    }

    pub fn new(endpoint: impl Into<String>, dim: usize) -> Self {
        Self::builder(endpoint, dim).build()
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    fn request(&self, batch: &[Vec<TokenId>]) -> Result<Vec<Embedding>, EmbedError> {
        let body = EmbedRequest {
            ids: batch.to_vec(),
        };
        let mut response = self
            .agent
            .post(&self.url)
            .send_json(&body)
            .map_err(|e| EmbedError::Transport(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(EmbedError::Status(status.as_u16()));
        }
        let text = response
            .body_mut()
            .with_config()
            .limit(MAX_RESPONSE_BYTES)
            .read_to_string()
            .map_err(|e| EmbedError::Transport(e.to_string()))?;
        let parsed: EmbedResponse = serde_json::from_str(&text)
            .map_err(|e| EmbedError::MalformedResponse(e.to_string()))?;
        let vectors: Vec<Embedding> = parsed
            .embeddings
            .into_iter()
            .map(Embedding::Dense)
            .collect();
        validate_embeddings(batch.len(), self.dim, &vectors)?;
        Ok(vectors)
    }
}

impl Embedder for RemoteEmbedder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn embed_batch(&self, sequences: &[Vec<TokenId>]) -> Result<Vec<Embedding>, EmbedError> {
        let batches: Vec<&[Vec<TokenId>]> = sequences.chunks(self.batch_size).collect();
        let workers = self.max_in_flight.min(batches.len());
        if workers <= 1 {
            let mut out = Vec::with_capacity(sequences.len());
            for batch in batches {
                out.extend(self.request(batch)?);
            }
            return Ok(out);
        }

        // Worker w handles batches w, w + workers, ...; results are placed by
        // batch index so output order never depends on timing.
        let mut slots: Vec<Option<Result<Vec<Embedding>, EmbedError>>> = vec![None; batches.len()];
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let batches = &batches;
                    scope.spawn(move || {
                        (w..batches.len())
                            .step_by(workers)
                            .map(|i| (i, self.request(batches[i])))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for handle in handles {
                for (i, result) in handle.join().expect("embedding worker panicked") {
                    slots[i] = Some(result);
                }
            }
        });

        let mut out = Vec::with_capacity(sequences.len());
        for slot in slots {
            out.extend(slot.expect("every batch is assigned to a worker")?);
        }
        Ok(out)
    }
}
