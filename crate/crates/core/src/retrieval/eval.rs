use rayon::prelude::*;
use serde::Serialize;

use super::dataset::EvalDataset;
use super::embedder::{validate_embeddings, Embedder, TfIdfEmbedder};
use super::index::{chunk_passages, ChunkIndex, RetrievalError};
use super::remote::RemoteEmbedder;
use crate::chunker::{default_retrieval_stride, ChunkSpec};
use crate::codec::{encode, Mode};
use crate::vocab::{TokenId, Vocab};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub k: usize,
    /// Count the top `k` distinct passages instead of the top `k` chunks.
    pub dedup_passages: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            k: 5,
            dedup_passages: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalResult {
    pub recall_at_k: f64,
    pub k: usize,
    pub chunk_size: usize,
    pub stride: usize,
    pub num_chunks: usize,
    pub per_question_hits: Vec<bool>,
}

/// Recall@k of `index` over the dataset's questions.
///
/// Each question is flat-encoded in full and embedded with `embedder`, which
/// must be the embedder the index was built with.
pub fn recall_at_k(
    dataset: &EvalDataset,
    vocab: &Vocab,
    index: &ChunkIndex,
    embedder: &dyn Embedder,
    options: EvalOptions,
) -> Result<EvalResult, RetrievalError> {
    if options.k == 0 {
        return Err(RetrievalError::InvalidK);
    }
    if index.is_empty() {
        return Err(RetrievalError::EmptyIndex);
    }
    let queries: Vec<Vec<TokenId>> = dataset
        .questions()
        .iter()
        .map(|q| encode(&q.text, vocab, Mode::Flat).ids)
        .collect();
    let vectors = embedder.embed_batch(&queries)?;
    validate_embeddings(queries.len(), embedder.dim(), &vectors)?;

    let per_question_hits = dataset
        .questions()
        .par_iter()
        .zip(vectors.par_iter())
        .map(|(question, query)| {
            let top = if options.dedup_passages {
                index.top_k_passages(query, options.k)?
            } else {
                index.top_k(query, options.k)?
            };
            Ok(top
                .iter()
                .any(|s| index.chunks()[s.position].passage_id == question.passage_id))
        })
        .collect::<Result<Vec<bool>, RetrievalError>>()?;

    let hits = per_question_hits.iter().filter(|&&h| h).count();
    let recall = if per_question_hits.is_empty() {
        0.0
    } else {
        hits as f64 / per_question_hits.len() as f64
    };
    Ok(EvalResult {
        recall_at_k: recall,
        k: options.k,
        chunk_size: index.spec().size(),
        stride: index.spec().stride(),
        num_chunks: index.len(),
        per_question_hits,
    })
}

/// Which embedder a sweep uses.
pub enum Backend<'a> {
    /// A fresh TF-IDF embedder fitted on the chunks of each size.
    TfIdf,
    Remote(&'a RemoteEmbedder),
}

/// Builds an index and evaluates it for each chunk size.
///
/// `stride` of `None` uses half the chunk size.
pub fn evaluate_sweep(
    dataset: &EvalDataset,
    vocab: &Vocab,
    chunk_sizes: &[usize],
    stride: Option<usize>,
    backend: &Backend<'_>,
    options: EvalOptions,
) -> Result<Vec<EvalResult>, SweepError> {
    let mut results = Vec::with_capacity(chunk_sizes.len());
    for &size in chunk_sizes {
        let spec = ChunkSpec::new(
            size,
            stride.unwrap_or_else(|| default_retrieval_stride(size)),
        )?;
        let chunks = chunk_passages(dataset, vocab, spec);
        let result = match backend {
            Backend::TfIdf => {
                let tfidf = TfIdfEmbedder::fit(
                    &chunks.iter().map(|c| c.ids.as_slice()).collect::<Vec<_>>(),
                    vocab,
                )
                .map_err(RetrievalError::from)?;
                let index = ChunkIndex::from_chunks(chunks, spec, &tfidf)?;
                recall_at_k(dataset, vocab, &index, &tfidf, options)?
            }
            Backend::Remote(remote) => {
                let index = ChunkIndex::from_chunks(chunks, spec, *remote)?;
                recall_at_k(dataset, vocab, &index, *remote, options)?
            }
        };
        results.push(result);
    }
    Ok(results)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Spec(#[from] crate::chunker::InvalidChunkSpec),
    #[error(transparent)]
    Retrieval(#[from] RetrievalError),
}
