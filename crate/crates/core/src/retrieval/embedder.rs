use rayon::prelude::*;
use thiserror::Error;

use super::{Embedding, SparseVector};
use crate::vocab::{TokenId, Vocab};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbedError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("embedding server answered with HTTP status {0}")]
    Status(u16),
    #[error("malformed embedding response: {0}")]
    MalformedResponse(String),
    #[error("expected {expected} embeddings, got {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("embedding {index} has dimension {found}, expected {expected}")]
    DimMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("embedding {index} has a non-finite component")]
    NonFinite { index: usize },
    #[error("token id {id} is outside the embedder's dimension {dim}")]
    TokenOutOfRange { id: TokenId, dim: usize },
    #[error("cannot fit an embedder on an empty corpus")]
    EmptyCorpus,
}

/// Maps token-id sequences to fixed-dimension vectors.
///
/// Implementations return one vector per input sequence, in input order.
pub trait Embedder: Send + Sync {
    fn dim(&self) -> usize;

    fn embed_batch(&self, sequences: &[Vec<TokenId>]) -> Result<Vec<Embedding>, EmbedError>;
}

/// Checks the embedder contract: count, dimension and finiteness.
pub fn validate_embeddings(
    expected_count: usize,
    dim: usize,
    embeddings: &[Embedding],
) -> Result<(), EmbedError> {
    if embeddings.len() != expected_count {
        return Err(EmbedError::CountMismatch {
            expected: expected_count,
            found: embeddings.len(),
        });
    }
    for (index, e) in embeddings.iter().enumerate() {
        if e.dim() != dim {
            return Err(EmbedError::DimMismatch {
                index,
                expected: dim,
                found: e.dim(),
            });
        }
        if !e.is_finite() {
            return Err(EmbedError::NonFinite { index });
        }
    }
    Ok(())
}

/// Deterministic bag-of-tokens reference embedder.
///
/// `idf(t) = ln((N + 1) / (df(t) + 1)) + 1` over the fitting corpus of `N`
/// sequences; a sequence embeds as raw term frequency times idf, L2-normalised.
/// Tokens absent from the fitting corpus get `df = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfEmbedder {
    idf: Vec<f64>,
}

impl TfIdfEmbedder {
    /// Fits document frequencies over `corpus`; the dimension is the vocab size.
    pub fn fit<S: AsRef<[TokenId]>>(corpus: &[S], vocab: &Vocab) -> Result<Self, EmbedError> {
        Self::fit_with_dim(corpus, vocab.len())
    }

    pub fn fit_with_dim<S: AsRef<[TokenId]>>(corpus: &[S], dim: usize) -> Result<Self, EmbedError> {
        if corpus.is_empty() {
            return Err(EmbedError::EmptyCorpus);
        }
        let mut df = vec![0u64; dim];
        let mut seen = vec![usize::MAX; dim];
        for (doc, seq) in corpus.iter().enumerate() {
            for &id in seq.as_ref() {
                let slot = id as usize;
                if slot >= dim {
                    return Err(EmbedError::TokenOutOfRange { id, dim });
                }
                if seen[slot] != doc {
                    seen[slot] = doc;
                    df[slot] += 1;
                }
            }
        }
        let n = corpus.len() as f64;
        let idf = df
            .into_iter()
            .map(|d| ((n + 1.0) / (d as f64 + 1.0)).ln() + 1.0)
            .collect();
        Ok(TfIdfEmbedder { idf })
    }

    pub fn idf(&self, id: TokenId) -> Option<f64> {
        self.idf.get(id as usize).copied()
    }

    pub fn embed(&self, sequence: &[TokenId]) -> Result<Embedding, EmbedError> {
        let dim = self.idf.len();
        let mut ids = sequence.to_vec();
        ids.sort_unstable();
        let mut entries: Vec<(u32, f64)> = Vec::new();
        for chunk in ids.chunk_by(|a, b| a == b) {
            let id = chunk[0];
            let idf = self
                .idf(id)
                .ok_or(EmbedError::TokenOutOfRange { id, dim })?;
            entries.push((id, chunk.len() as f64 * idf));
        }
        let norm = entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, w) in &mut entries {
                *w /= norm;
            }
        }
        Ok(Embedding::Sparse(SparseVector::new(dim, entries)))
    }
}

impl Embedder for TfIdfEmbedder {
    fn dim(&self) -> usize {
        self.idf.len()
    }

    fn embed_batch(&self, sequences: &[Vec<TokenId>]) -> Result<Vec<Embedding>, EmbedError> {
        sequences.par_iter().map(|s| self.embed(s)).collect()
    }
}
