use std::cmp::Ordering;

use thiserror::Error;

use super::dataset::EvalDataset;
use super::embedder::{validate_embeddings, EmbedError, Embedder};
use super::{cosine_from_parts, Embedding};
use crate::chunker::{chunk_tokens, Chunk, ChunkSpec};
use crate::codec::{encode, Mode};
use crate::vocab::{TokenId, Vocab};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RetrievalError {
    #[error("the chunk index is empty")]
    EmptyIndex,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("query has dimension {found}, index has {expected}")]
    QueryDim { expected: usize, found: usize },
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

/// Flat-encodes every passage and cuts it into windows, in passage order.
pub fn chunk_passages(dataset: &EvalDataset, vocab: &Vocab, spec: ChunkSpec) -> Vec<Chunk> {
    dataset
        .passages()
        .iter()
        .flat_map(|p| {
            let ids = encode(&p.text, vocab, Mode::Flat).ids;
            chunk_tokens(&p.id, &ids, spec)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredChunk {
    /// Position of the chunk in the index.
    pub position: usize,
    pub score: f64,
}

/// Higher score first, then lower position.
fn rank_order(a: &ScoredChunk, b: &ScoredChunk) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.position.cmp(&b.position))
}

/// Embedded chunks, searched by exhaustive cosine scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkIndex {
    chunks: Vec<Chunk>,
    vectors: Vec<Embedding>,
    norms: Vec<f64>,
    spec: ChunkSpec,
    dim: usize,
}

impl ChunkIndex {
    pub fn build(
        dataset: &EvalDataset,
        vocab: &Vocab,
        spec: ChunkSpec,
        embedder: &dyn Embedder,
    ) -> Result<Self, RetrievalError> {
        Self::from_chunks(chunk_passages(dataset, vocab, spec), spec, embedder)
    }

    pub fn from_chunks(
        chunks: Vec<Chunk>,
        spec: ChunkSpec,
        embedder: &dyn Embedder,
    ) -> Result<Self, RetrievalError> {
        let sequences: Vec<Vec<TokenId>> = chunks.iter().map(|c| c.ids.clone()).collect();
        let vectors = embedder.embed_batch(&sequences)?;
        validate_embeddings(chunks.len(), embedder.dim(), &vectors)?;
        let norms = vectors.iter().map(Embedding::norm).collect();
        Ok(ChunkIndex {
            chunks,
            vectors,
            norms,
            spec,
            dim: embedder.dim(),
        })
    }

    pub fn chunks(&self) -> &[Chunk] {
        &self.chunks
    }

    pub fn vectors(&self) -> &[Embedding] {
        &self.vectors
    }

    pub fn spec(&self) -> ChunkSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.chunks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chunks.is_empty()
    }

    /// Cosine of `query` against every chunk, in index order.
    pub fn scores(&self, query: &Embedding) -> Result<Vec<ScoredChunk>, RetrievalError> {
        if query.dim() != self.dim {
            return Err(RetrievalError::QueryDim {
                expected: self.dim,
                found: query.dim(),
            });
        }
        let query_norm = query.norm();
        Ok(self
            .vectors
            .iter()
            .zip(&self.norms)
            .enumerate()
            .map(|(position, (v, &norm))| {
                let dot = query.dot(v).expect("dimension checked above");
                ScoredChunk {
                    position,
                    score: cosine_from_parts(dot, query_norm, norm),
                }
            })
            .collect())
    }

    /// The `k` best chunks, best first.
    pub fn top_k(&self, query: &Embedding, k: usize) -> Result<Vec<ScoredChunk>, RetrievalError> {
        if k == 0 {
            return Err(RetrievalError::InvalidK);
        }
        if self.is_empty() {
            return Err(RetrievalError::EmptyIndex);
        }
        let mut scored = self.scores(query)?;
        if k < scored.len() {
            scored.select_nth_unstable_by(k - 1, rank_order);
            scored.truncate(k);
        }
        scored.sort_unstable_by(rank_order);
        Ok(scored)
    }

    /// Best chunks from `k` distinct passages, best first.
    pub fn top_k_passages(
        &self,
        query: &Embedding,
        k: usize,
    ) -> Result<Vec<ScoredChunk>, RetrievalError> {
        if k == 0 {
            return Err(RetrievalError::InvalidK);
        }
        if self.is_empty() {
            return Err(RetrievalError::EmptyIndex);
        }
        let mut scored = self.scores(query)?;
        scored.sort_unstable_by(rank_order);
        let mut seen = std::collections::HashSet::new();
        Ok(scored
            .into_iter()
            .filter(|s| seen.insert(self.chunks[s.position].passage_id.as_str()))
            .take(k)
            .collect())
    }
}
