//! Closed token vocabulary: six reserved specials followed by every syllable,
//! digit and punctuation token seen in the build corpus.
//!
//! Ids `0..6` are the specials in [`Special::ALL`] order. Corpus tokens get ids
//! from 6 upwards in descending frequency, ties broken by ascending codepoint
//! order of the token text, so a build is reproducible regardless of document
//! order.
//!
//! # File format
//!
//! A vocabulary is persisted as a JSON document:
//!
//! ```json
//! {
//!   "format": "hece-vocab",
//!   "version": 1,
//!   "specials": ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "[WB]"],
//!   "tokens": [
//!     { "text": "a", "id": 6, "count": 1 },
//!     { "text": "le", "id": 7, "count": 1 }
//!   ]
//! }
//! ```
//!
//! `tokens` lists corpus tokens only, in id order; specials carry no count.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::unit_pieces;
use crate::pretokenizer::{normalize, split_units};

pub type TokenId = u32;

pub const FORMAT_NAME: &str = "hece-vocab";
pub const FORMAT_VERSION: u32 = 1;

/// Reserved tokens at fixed ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Special {
    Pad,
    Unk,
    Cls,
    Sep,
    Mask,
    /// Word boundary, used by lossless encoding.
    Wb,
}

impl Special {
    pub const ALL: [Special; 6] = [
        Special::Pad,
        Special::Unk,
        Special::Cls,
        Special::Sep,
        Special::Mask,
        Special::Wb,
    ];

    pub const fn id(self) -> TokenId {
        self as TokenId
    }

    pub const fn text(self) -> &'static str {
        match self {
            Special::Pad => "[PAD]",
            Special::Unk => "[UNK]",
            Special::Cls => "[CLS]",
            Special::Sep => "[SEP]",
            Special::Mask => "[MASK]",
            Special::Wb => "[WB]",
        }
    }

    pub fn from_id(id: TokenId) -> Option<Special> {
        Special::ALL.get(id as usize).copied()
    }
}

pub const NUM_SPECIALS: usize = Special::ALL.len();

#[derive(Debug, Error)]
pub enum VocabError {
    #[error("corpus produced no tokens")]
    EmptyCorpus,
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed vocabulary file: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("unsupported vocabulary format {format:?} version {version:?}")]
    UnsupportedVersion {
        format: Option<String>,
        version: Option<u32>,
    },
    #[error("invalid vocabulary: {0}")]
    Format(String),
    #[error("duplicate token {0:?}")]
    DuplicateToken(String),
}

/// Token frequencies accumulated over documents.
///
/// Counting is order-independent; partial counters can be merged in any
/// order and yield the same vocabulary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenCounts {
    counts: HashMap<String, u64>,
}

impl TokenCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_document(&mut self, text: &str) {
        let normalized = normalize(text);
        for unit in split_units(&normalized) {
            for piece in unit_pieces(&unit) {
                match self.counts.get_mut(piece) {
                    Some(count) => *count += 1,
                    None => {
                        self.counts.insert(piece.to_owned(), 1);
                    }
                }
            }
        }
    }

    pub fn merge(&mut self, other: TokenCounts) {
        for (token, count) in other.counts {
            *self.counts.entry(token).or_default() += count;
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn into_vocab(self) -> Result<Vocab, VocabError> {
        if self.counts.is_empty() {
            return Err(VocabError::EmptyCorpus);
        }
        let mut entries: Vec<(String, u64)> = self.counts.into_iter().collect();
        entries.sort_unstable_by(|(ta, ca), (tb, cb)| cb.cmp(ca).then_with(|| ta.cmp(tb)));
        let (texts, counts) = entries.into_iter().unzip();
        Vocab::from_parts(texts, counts)
    }
}

/// Immutable bidirectional token/id map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    /// Specials first, then corpus tokens.
    tokens: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, TokenId>,
}

impl Vocab {
    /// Builds a vocabulary from a stream of raw documents.
    pub fn build<I, S>(documents: I) -> Result<Vocab, VocabError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut counts = TokenCounts::new();
        for doc in documents {
            counts.add_document(doc.as_ref());
        }
        counts.into_vocab()
    }

    /// Same as [`Vocab::build`] but counts documents on the rayon pool.
    pub fn build_parallel<S>(documents: &[S]) -> Result<Vocab, VocabError>
    where
        S: AsRef<str> + Sync,
    {
        documents
            .par_iter()
            .fold(TokenCounts::new, |mut counts, doc| {
                counts.add_document(doc.as_ref());
                counts
            })
            .reduce(TokenCounts::new, |mut a, b| {
                a.merge(b);
                a
            })
            .into_vocab()
    }

    /// `texts`/`counts` are corpus tokens in id order, starting at id 6.
    fn from_parts(texts: Vec<String>, counts: Vec<u64>) -> Result<Vocab, VocabError> {
        let mut tokens: Vec<String> = Special::ALL.iter().map(|s| s.text().to_owned()).collect();
        tokens.extend(texts);
        let mut all_counts = vec![0; NUM_SPECIALS];
        all_counts.extend(counts);

        let mut index = HashMap::with_capacity(tokens.len());
        for (id, text) in tokens.iter().enumerate() {
            if text.is_empty() {
                return Err(VocabError::Format(format!("empty token text at id {id}")));
            }
            if index.insert(text.clone(), id as TokenId).is_some() {
                return Err(VocabError::DuplicateToken(text.clone()));
            }
        }
        Ok(Vocab {
            tokens,
            counts: all_counts,
            index,
        })
    }

    /// Total number of ids, specials included.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Number of non-special tokens.
    pub fn corpus_token_count(&self) -> usize {
        self.tokens.len() - NUM_SPECIALS
    }

    pub fn id(&self, token: &str) -> Option<TokenId> {
        self.index.get(token).copied()
    }

    pub fn id_or_unk(&self, token: &str) -> TokenId {
        self.id(token).unwrap_or(Special::Unk.id())
    }

    pub fn token(&self, id: TokenId) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn count(&self, id: TokenId) -> Option<u64> {
        self.counts.get(id as usize).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    /// Corpus tokens as `(id, text, count)` in id order.
    pub fn corpus_tokens(&self) -> impl Iterator<Item = (TokenId, &str, u64)> + '_ {
        self.tokens
            .iter()
            .zip(&self.counts)
            .enumerate()
            .skip(NUM_SPECIALS)
            .map(|(id, (text, count))| (id as TokenId, text.as_str(), *count))
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<(), VocabError> {
        let file = VocabFile {
            format: Some(FORMAT_NAME.to_owned()),
            version: Some(FORMAT_VERSION),
            specials: Some(Special::ALL.iter().map(|s| s.text().to_owned()).collect()),
            tokens: self
                .corpus_tokens()
                .map(|(id, text, count)| TokenRecord {
                    text: text.to_owned(),
                    id,
                    count,
                })
                .collect(),
        };
        serde_json::to_writer_pretty(writer, &file)?;
        Ok(())
    }

    pub fn read_json<R: Read>(reader: R) -> Result<Vocab, VocabError> {
        let file: VocabFile = serde_json::from_reader(reader)?;
        if file.format.as_deref() != Some(FORMAT_NAME) || file.version != Some(FORMAT_VERSION) {
            return Err(VocabError::UnsupportedVersion {
                format: file.format,
                version: file.version,
            });
        }
        let specials = file
            .specials
            .ok_or_else(|| VocabError::Format("missing specials block".into()))?;
        let expected: Vec<&str> = Special::ALL.iter().map(|s| s.text()).collect();
        if specials != expected {
            return Err(VocabError::Format(format!(
                "specials {specials:?} do not match {expected:?}"
            )));
        }
        let mut texts = Vec::with_capacity(file.tokens.len());
        let mut counts = Vec::with_capacity(file.tokens.len());
        for (i, record) in file.tokens.into_iter().enumerate() {
            let expected_id = (NUM_SPECIALS + i) as TokenId;
            if record.id != expected_id {
                return Err(VocabError::Format(format!(
                    "token {:?} has id {}, expected {expected_id}",
                    record.text, record.id
                )));
            }
            texts.push(record.text);
            counts.push(record.count);
        }
        Vocab::from_parts(texts, counts)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), VocabError> {
        let mut writer = BufWriter::new(File::create(path)?);
        self.write_json(&mut writer)?;
        writer.write_all(b"\n")?;
        writer.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Vocab, VocabError> {
        Vocab::read_json(BufReader::new(File::open(path)?))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct VocabFile {
    format: Option<String>,
    version: Option<u32>,
    specials: Option<Vec<String>>,
    tokens: Vec<TokenRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TokenRecord {
    text: String,
    id: TokenId,
    count: u64,
}
