//! Syllable-level tokenization for Turkish.
//!
//! Words are split into syllables by a deterministic right-to-left template
//! matcher ([`syllabifier`]); the syllables seen in a corpus form a small
//! closed vocabulary ([`vocab`]) used to encode text ([`codec`]). On top of
//! that the crate provides overlapping token windows ([`chunker`]), token
//! density statistics ([`stats`]) and a Recall@k retrieval harness with a
//! pluggable embedding backend ([`retrieval`]).
//!
//! ```
//! use hece::{syllabify_word, Mode, Vocab};
//!
//! let syllables: Vec<String> = syllabify_word("geçmişten")
//!     .unwrap()
//!     .into_iter()
//!     .map(|s| s.into_text())
//!     .collect();
//! assert_eq!(syllables, ["geç", "miş", "ten"]);
//!
//! let vocab = Vocab::build(["atasözleri geçmişten"]).unwrap();
//! let enc = hece::encode("atasözleri geçmişten", &vocab, Mode::Lossless);
//! assert_eq!(
//!     hece::decode(&enc.ids, &vocab, Mode::Lossless).unwrap(),
//!     "atasözleri geçmişten"
//! );
//! ```

pub mod chunker;
pub mod cli;
pub mod codec;
pub mod pretokenizer;
pub mod retrieval;
pub mod stats;
pub mod syllabifier;
pub mod vocab;

pub use chunker::{chunk_spans, chunk_tokens, default_retrieval_stride, Chunk, ChunkSpec};
pub use codec::{decode, encode, encode_for_model, Encoding, Mode};
pub use pretokenizer::{normalize, split_units, TextUnit, UnitKind};
pub use stats::{density, DensityStats};
pub use syllabifier::{
    classify_char, match_pattern, syllabify_word, LetterClass, PatternTag, Syllable,
};
pub use vocab::{Special, TokenId, Vocab, VocabError};
