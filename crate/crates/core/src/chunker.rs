//! Overlapping fixed-size token windows.

use std::ops::Range;

use thiserror::Error;

use crate::vocab::TokenId;

/// Training-data window preset: 256 tokens, stride 128.
pub const TRAINING_SPEC: ChunkSpec = ChunkSpec {
    size: 256,
    stride: 128,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error(
    "invalid chunk spec: size {size}, stride {stride} (need size >= 1 and 1 <= stride <= size)"
)]
pub struct InvalidChunkSpec {
    pub size: usize,
    pub stride: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChunkSpec {
    size: usize,
    stride: usize,
}

impl ChunkSpec {
    pub fn new(size: usize, stride: usize) -> Result<Self, InvalidChunkSpec> {
        if size == 0 || stride == 0 || stride > size {
            return Err(InvalidChunkSpec { size, stride });
        }
        Ok(ChunkSpec { size, stride })
    }

    /// Spec with the default retrieval stride for `size`.
    pub fn retrieval(size: usize) -> Result<Self, InvalidChunkSpec> {
        ChunkSpec::new(size, default_retrieval_stride(size))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn stride(&self) -> usize {
        self.stride
    }
}

/// Half the window size, at least 1.
pub fn default_retrieval_stride(size: usize) -> usize {
    (size / 2).max(1)
}

/// A window of token ids from one passage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    pub passage_id: String,
    /// Offset of the first token within the passage encoding.
    pub start: usize,
    pub ids: Vec<TokenId>,
}

/// Window ranges over a sequence of `len` tokens.
///
/// Windows start at multiples of the stride while they fit. If tokens remain
/// uncovered, one last window is clamped to end at `len`. A sequence no longer
/// than the window yields a single window over all of it.
pub fn chunk_spans(len: usize, spec: ChunkSpec) -> Vec<Range<usize>> {
    let ChunkSpec { size, stride } = spec;
    if len == 0 {
        return Vec::new();
    }
    if len <= size {
        #[allow(clippy::single_range_in_vec_init)]
        return vec![0..len];
    }
    let mut spans: Vec<Range<usize>> = (0..=len - size)
        .step_by(stride)
        .map(|start| start..start + size)
        .collect();
    if spans.last().is_some_and(|last| last.end < len) {
        spans.push(len - size..len);
    }
    spans
}

pub fn chunk_tokens(passage_id: &str, ids: &[TokenId], spec: ChunkSpec) -> Vec<Chunk> {
    chunk_spans(ids.len(), spec)
        .into_iter()
        .map(|range| Chunk {
            passage_id: passage_id.to_owned(),
            start: range.start,
            ids: ids[range].to_vec(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn starts(len: usize, size: usize, stride: usize) -> Vec<usize> {
        chunk_spans(len, ChunkSpec::new(size, stride).unwrap())
            .into_iter()
            .map(|r| r.start)
            .collect()
    }

    #[test]
    fn strided_windows() {
        assert_eq!(starts(20, 8, 4), [0, 4, 8, 12]);
        assert_eq!(starts(5, 8, 4), [0]);
        assert_eq!(starts(8, 8, 4), [0]);
        assert_eq!(starts(0, 8, 4), Vec::<usize>::new());
    }

    #[test]
    fn tail_window_is_clamped() {
        assert_eq!(starts(10, 8, 4), [0, 2]);
        assert_eq!(starts(21, 8, 4), [0, 4, 8, 12, 13]);
        let spans = chunk_spans(21, ChunkSpec::new(8, 4).unwrap());
        assert_eq!(spans.last(), Some(&(13..21)));
    }

    #[test]
    fn short_sequence_is_one_window() {
        let ids: Vec<TokenId> = (0..5).collect();
        let chunks = chunk_tokens("p", &ids, ChunkSpec::new(8, 4).unwrap());
        assert_eq!(chunks.len(), 1);
        assert_eq!(chunks[0].ids, ids);
        assert_eq!(chunks[0].start, 0);
        assert!(chunk_tokens("p", &[], ChunkSpec::new(8, 4).unwrap()).is_empty());
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(ChunkSpec::new(0, 1).is_err());
        assert!(ChunkSpec::new(4, 0).is_err());
        assert!(ChunkSpec::new(4, 5).is_err());
        assert!(ChunkSpec::new(1, 1).is_ok());
    }

    #[test]
    fn retrieval_stride_is_half_the_size() {
        assert_eq!(default_retrieval_stride(8), 4);
        assert_eq!(default_retrieval_stride(4), 2);
        assert_eq!(default_retrieval_stride(2), 1);
        assert_eq!(default_retrieval_stride(1), 1);
        assert_eq!(ChunkSpec::retrieval(512).unwrap().stride(), 256);
    }

    #[test]
    fn training_preset() {
        assert_eq!((TRAINING_SPEC.size(), TRAINING_SPEC.stride()), (256, 128));
        assert_eq!(starts(512, 256, 128), [0, 128, 256]);
    }
}
