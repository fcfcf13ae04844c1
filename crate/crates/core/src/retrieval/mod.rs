//! Chunked dense retrieval and Recall@k evaluation.
//!
//! Passages are flat-encoded, cut into overlapping windows, and each window is
//! embedded on its own. A question counts as a hit when any of the `k` chunks
//! closest to it by cosine similarity comes from its gold passage.

mod dataset;
mod embedder;
mod eval;
mod index;
mod remote;

pub use dataset::{DatasetError, EvalDataset, Passage, Question};
pub use embedder::{validate_embeddings, EmbedError, Embedder, TfIdfEmbedder};
pub use eval::{evaluate_sweep, recall_at_k, Backend, EvalOptions, EvalResult, SweepError};
pub use index::{chunk_passages, ChunkIndex, RetrievalError, ScoredChunk};
pub use remote::{EmbedRequest, EmbedResponse, RemoteEmbedder, RemoteEmbedderBuilder};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("vector dimensions differ: {left} vs {right}")]
pub struct DimMismatch {
    pub left: usize,
    pub right: usize,
}

/// Sparse vector with strictly increasing indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    /// Entries must be sorted by index, unique, and below `dim`.
    pub fn new(dim: usize, entries: Vec<(u32, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|&(i, _)| (i as usize) < dim));
        SparseVector { dim, entries }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &(i, x) in &self.entries {
            out[i as usize] = x;
        }
        out
    }
}

/// An embedding vector in whichever layout the embedder produces.
#[derive(Debug, Clone, PartialEq)]
pub enum Embedding {
    Dense(Vec<f64>),
    Sparse(SparseVector),
}

impl From<Vec<f64>> for Embedding {
    fn from(v: Vec<f64>) -> Self {
        Embedding::Dense(v)
    }
}

impl Embedding {
    pub fn dim(&self) -> usize {
        match self {
            Embedding::Dense(v) => v.len(),
            Embedding::Sparse(s) => s.dim,
        }
    }

    fn values(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        match self {
            Embedding::Dense(v) => Box::new(v.iter().copied()),
            Embedding::Sparse(s) => Box::new(s.entries.iter().map(|&(_, x)| x)),
        }
    }

    pub fn norm(&self) -> f64 {
        self.values().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.values().all(f64::is_finite)
    }

    pub fn scale(&self, factor: f64) -> Embedding {
        match self {
            Embedding::Dense(v) => Embedding::Dense(v.iter().map(|x| x * factor).collect()),
            Embedding::Sparse(s) => Embedding::Sparse(SparseVector {
                dim: s.dim,
                entries: s.entries.iter().map(|&(i, x)| (i, x * factor)).collect(),
            }),
        }
    }

    pub fn dot(&self, other: &Embedding) -> Result<f64, DimMismatch> {
        if self.dim() != other.dim() {
            return Err(DimMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(match (self, other) {
            (Embedding::Dense(a), Embedding::Dense(b)) => dense_dot(a, b),
            (Embedding::Dense(d), Embedding::Sparse(s))
            | (Embedding::Sparse(s), Embedding::Dense(d)) => {
                s.entries.iter().map(|&(i, x)| x * d[i as usize]).sum()
            }
            (Embedding::Sparse(a), Embedding::Sparse(b)) => sparse_dot(&a.entries, &b.entries),
        })
    }

    /// Cosine similarity; 0 when either vector has zero norm.
    pub fn cosine(&self, other: &Embedding) -> Result<f64, DimMismatch> {
        let dot = self.dot(other)?;
        Ok(cosine_from_parts(dot, self.norm(), other.norm()))
    }
}

fn dense_dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sparse_dot(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let (mut i, mut j, mut sum) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                sum += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    sum
}

pub(crate) fn cosine_from_parts(dot: f64, norm_a: f64, norm_b: f64) -> f64 {
    if norm_a == 0.0 || norm_b == 0.0 {
        0.0
    } else {
        // `+ 0.0` turns -0.0 into 0.0 so ranking ties stay ties.
        dot / (norm_a * norm_b) + 0.0
    }
}

/// Cosine similarity of two dense vectors; 0 when either has zero norm.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, DimMismatch> {
    if u.len() != v.len() {
        return Err(DimMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let norm = |x: &[f64]| dense_dot(x, x).sqrt();
    Ok(cosine_from_parts(dense_dot(u, v), norm(u), norm(v)))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticError {
    #[error("need at least 2 vectors, got {0}")]
    TooFewVectors(usize),
    #[error(transparent)]
    DimMismatch(#[from] DimMismatch),
}

/// Mean cosine similarity over all unordered pairs.
///
/// Values near 1 mean the embedder maps everything to nearly the same
/// direction and cannot rank anything.
pub fn mean_pairwise_cosine(vectors: &[Embedding]) -> Result<f64, DiagnosticError> {
    let n = vectors.len();
    if n < 2 {
        return Err(DiagnosticError::TooFewVectors(n));
    }
    let norms: Vec<f64> = vectors.iter().map(Embedding::norm).collect();
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += cosine_from_parts(vectors[i].dot(&vectors[j])?, norms[i], norms[j]);
        }
    }
    Ok(sum / (n * (n - 1) / 2) as f64)
}
