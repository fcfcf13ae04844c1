//! Text to token ids and back.
//!
//! [`Mode::Flat`] emits syllable tokens back to back, so word boundaries are
//! lost. [`Mode::Lossless`] additionally puts a `[WB]` token wherever the
//! normalised text had whitespace, which makes decoding exact.

use thiserror::Error;

use crate::pretokenizer::{normalize, split_units, TextUnit, UnitKind};
use crate::syllabifier::syllable_spans;
use crate::vocab::{Special, TokenId, Vocab};

/// Default model context, including the `[CLS]` and `[SEP]` wrappers.
pub const DEFAULT_MAX_LEN: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Flat,
    Lossless,
}

/// Where a token came from: the unit index within the text and the piece
/// index within that unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TokenSource {
    pub unit: usize,
    pub piece: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    pub ids: Vec<TokenId>,
    pub mode: Mode,
    /// One entry per id; `None` for special tokens.
    pub sources: Vec<Option<TokenSource>>,
}

impl Encoding {
    fn empty(mode: Mode) -> Self {
        Encoding {
            ids: Vec::new(),
            mode,
            sources: Vec::new(),
        }
    }

    fn push(&mut self, id: TokenId, source: Option<TokenSource>) {
        self.ids.push(id);
        self.sources.push(source);
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn unk_count(&self) -> usize {
        self.ids
            .iter()
            .filter(|&&id| id == Special::Unk.id())
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("token id {id} is out of range for a vocabulary of {vocab_len}")]
    IdOutOfRange { id: TokenId, vocab_len: usize },
}

/// Token texts a unit expands to: syllables for words, one token per digit,
/// punctuation as is.
pub fn unit_pieces(unit: &TextUnit) -> Vec<&str> {
    match unit.kind {
        UnitKind::Word => syllable_spans(&unit.text)
            .expect("word units contain only letters")
            .into_iter()
            .map(|(range, _)| &unit.text[range])
            .collect(),
        UnitKind::DigitRun => unit
            .text
            .char_indices()
            .map(|(i, c)| &unit.text[i..i + c.len_utf8()])
            .collect(),
        UnitKind::PunctChar => vec![unit.text.as_str()],
    }
}

/// Token texts for raw text, in flat order.
pub fn tokenize(text: &str) -> Vec<String> {
    let normalized = normalize(text);
    split_units(&normalized)
        .iter()
        .flat_map(|unit| {
            unit_pieces(unit)
                .into_iter()
                .map(str::to_owned)
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn encode(text: &str, vocab: &Vocab, mode: Mode) -> Encoding {
    let normalized = normalize(text);
    let units = split_units(&normalized);
    let mut encoding = Encoding::empty(mode);
    for (unit_index, unit) in units.iter().enumerate() {
        if mode == Mode::Lossless && unit_index > 0 && !units[unit_index - 1].is_joined_to(unit) {
            encoding.push(Special::Wb.id(), None);
        }
        for (piece_index, piece) in unit_pieces(unit).into_iter().enumerate() {
            encoding.push(
                vocab.id_or_unk(piece),
                Some(TokenSource {
                    unit: unit_index,
                    piece: piece_index,
                }),
            );
        }
    }
    encoding
}

pub fn decode(ids: &[TokenId], vocab: &Vocab, mode: Mode) -> Result<String, CodecError> {
    let mut out = String::new();
    for &id in ids {
        let text = vocab.token(id).ok_or(CodecError::IdOutOfRange {
            id,
            vocab_len: vocab.len(),
        })?;
        match Special::from_id(id) {
            None | Some(Special::Unk) => out.push_str(text),
            Some(Special::Wb) if mode == Mode::Lossless => out.push(' '),
            Some(_) => {}
        }
    }
    Ok(out)
}

/// Flat encoding wrapped as `[CLS] … [SEP]` and cut to at most `max_len` ids.
///
/// `max_len` below 2 is treated as 2. Truncation drops body tokens from the
/// end; the final `[SEP]` is always kept.
pub fn encode_for_model(text: &str, vocab: &Vocab, max_len: usize) -> Encoding {
    let body = encode(text, vocab, Mode::Flat);
    let keep = body.len().min(max_len.max(2) - 2);
    let mut encoding = Encoding::empty(Mode::Flat);
    encoding.push(Special::Cls.id(), None);
    encoding.ids.extend_from_slice(&body.ids[..keep]);
    encoding.sources.extend_from_slice(&body.sources[..keep]);
    encoding.push(Special::Sep.id(), None);
    encoding
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocab {
        Vocab::build(["atasözleri geçmişten kadar"]).unwrap()
    }

    fn texts(enc: &Encoding, v: &Vocab) -> Vec<String> {
        enc.ids
            .iter()
            .map(|&id| v.token(id).unwrap().to_owned())
            .collect()
    }

    #[test]
    fn flat_encoding_is_syllables() {
        let v = vocab();
        let enc = encode("atasözleri geçmişten", &v, Mode::Flat);
        assert_eq!(
            texts(&enc, &v),
            ["a", "ta", "söz", "le", "ri", "geç", "miş", "ten"]
        );
        assert_eq!(enc.sources[5], Some(TokenSource { unit: 1, piece: 0 }));
    }

    #[test]
    fn lossless_inserts_word_boundaries() {
        let v = vocab();
        let enc = encode("atasözleri geçmişten", &v, Mode::Lossless);
        assert_eq!(
            texts(&enc, &v),
            ["a", "ta", "söz", "le", "ri", "[WB]", "geç", "miş", "ten"]
        );
        assert_eq!(enc.sources[5], None);
        assert_eq!(
            decode(&enc.ids, &v, Mode::Lossless).unwrap(),
            "atasözleri geçmişten"
        );
        assert_eq!(
            decode(&enc.ids, &v, Mode::Flat).unwrap(),
            "atasözlerigeçmişten"
        );
    }

    #[test]
    fn empty_text_encodes_to_nothing() {
        let v = vocab();
        assert!(encode("", &v, Mode::Flat).is_empty());
        assert!(encode("   ", &v, Mode::Lossless).is_empty());
    }

    #[test]
    fn unknown_tokens_become_unk() {
        let v = vocab();
        let enc = encode("kadar zor", &v, Mode::Lossless);
        assert_eq!(texts(&enc, &v), ["ka", "dar", "[WB]", "[UNK]"]);
        assert_eq!(enc.unk_count(), 1);
        assert_eq!(decode(&enc.ids, &v, Mode::Lossless).unwrap(), "kadar [UNK]");
    }

    #[test]
    fn no_boundary_inside_a_whitespace_group() {
        let v = Vocab::build(["ankara'da 1923"]).unwrap();
        let enc = encode("Ankara'da 1923", &v, Mode::Lossless);
        assert_eq!(
            texts(&enc, &v),
            ["an", "ka", "ra", "'", "da", "[WB]", "1", "9", "2", "3"]
        );
        assert_eq!(
            decode(&enc.ids, &v, Mode::Lossless).unwrap(),
            "ankara'da 1923"
        );
    }

    #[test]
    fn decode_skips_structural_specials() {
        let v = vocab();
        let ka = v.id("ka").unwrap();
        let ids = [
            Special::Cls.id(),
            ka,
            Special::Pad.id(),
            Special::Mask.id(),
            Special::Sep.id(),
        ];
        assert_eq!(decode(&ids, &v, Mode::Lossless).unwrap(), "ka");
    }

    #[test]
    fn decode_rejects_out_of_range_ids() {
        let v = vocab();
        let bad = v.len() as TokenId;
        assert_eq!(
            decode(&[bad], &v, Mode::Flat),
            Err(CodecError::IdOutOfRange {
                id: bad,
                vocab_len: v.len()
            })
        );
    }

    #[test]
    fn model_input_is_wrapped() {
        let v = vocab();
        let enc = encode_for_model("kadar", &v, DEFAULT_MAX_LEN);
        assert_eq!(texts(&enc, &v), ["[CLS]", "ka", "dar", "[SEP]"]);
        let empty = encode_for_model("", &v, DEFAULT_MAX_LEN);
        assert_eq!(texts(&empty, &v), ["[CLS]", "[SEP]"]);
    }

    #[test]
    fn model_input_is_truncated_keeping_sep() {
        let v = Vocab::build(["ka"]).unwrap();
        // 300 words of two syllables each: 600 body tokens
        let text = vec!["kaka"; 300].join(" ");
        assert_eq!(encode(&text, &v, Mode::Flat).len(), 600);
        let enc = encode_for_model(&text, &v, 512);
        assert_eq!(enc.len(), 512);
        assert_eq!(enc.ids[0], Special::Cls.id());
        assert_eq!(*enc.ids.last().unwrap(), Special::Sep.id());
        assert_eq!(enc.sources.len(), enc.ids.len());
        assert_eq!(
            encode_for_model(&text, &v, 0).ids,
            [Special::Cls.id(), Special::Sep.id()]
        );
    }
}
