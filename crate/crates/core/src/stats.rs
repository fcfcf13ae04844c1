//! Token density over a corpus.
//!
//! Counts follow flat encoding: every syllable, digit and punctuation token
//! counts as a token, words are word units, and characters are the
//! non-whitespace codepoints of the normalised text.

use serde::Serialize;
use thiserror::Error;

use crate::codec::unit_pieces;
use crate::pretokenizer::{normalize, split_units, UnitKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("corpus contains no words")]
pub struct EmptyCorpus;

/// Raw counts. Merging is associative and commutative.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DensityCounts {
    pub words: u64,
    pub tokens: u64,
    pub syllables: u64,
    pub chars: u64,
}

impl DensityCounts {
    pub fn add_document(&mut self, text: &str) {
        let normalized = normalize(text);
        self.chars += normalized.chars().filter(|c| !c.is_whitespace()).count() as u64;
        for unit in split_units(&normalized) {
            let pieces = unit_pieces(&unit).len() as u64;
            self.tokens += pieces;
            if unit.kind == UnitKind::Word {
                self.words += 1;
                self.syllables += pieces;
            }
        }
    }

    pub fn merge(&mut self, other: DensityCounts) {
        self.words += other.words;
        self.tokens += other.tokens;
        self.syllables += other.syllables;
        self.chars += other.chars;
    }

    pub fn finish(&self) -> Result<DensityStats, EmptyCorpus> {
        if self.words == 0 {
            return Err(EmptyCorpus);
        }
        let words = self.words as f64;
        Ok(DensityStats {
            tokens_per_word: self.tokens as f64 / words,
            tokens_per_char: self.tokens as f64 / self.chars as f64,
            syllables_per_word: self.syllables as f64 / words,
            word_count: self.words,
            token_count: self.tokens,
            char_count: self.chars,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityStats {
    pub tokens_per_word: f64,
    pub tokens_per_char: f64,
    pub syllables_per_word: f64,
    pub word_count: u64,
    pub token_count: u64,
    pub char_count: u64,
}

pub fn density<I, S>(corpus: I) -> Result<DensityStats, EmptyCorpus>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counts = DensityCounts::default();
    for doc in corpus {
        counts.add_document(doc.as_ref());
    }
    counts.finish()
}
