//! Letter classification and right-to-left greedy syllabification.
//!
//! A word is scanned from its last letter towards its first. At each position
//! the templates are tried longest-first in a fixed order
//! (CVCC, VCC, CVC, VC, CV, V); the first one whose letter classes match the
//! window ending at the current position is taken. A consonant that starts no
//! template is emitted on its own as a [`PatternTag::LoneC`] token.
//!
//! The matcher is purely positional. It does not consult a lexicon, so
//! consonant clusters inside loanwords are split wherever the templates fall,
//! e.g. `elektrik` becomes `e-lekt-rik`.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

/// Phonological class of a single codepoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LetterClass {
    Vowel,
    Consonant,
    Other,
}

/// Lowercase Turkish vowels.
pub const VOWELS: [char; 8] = ['a', 'e', 'ı', 'i', 'o', 'ö', 'u', 'ü'];

/// Lowercase Turkish consonants followed by the loanword letters q, w, x.
pub const CONSONANTS: [char; 24] = [
    'b', 'c', 'ç', 'd', 'f', 'g', 'ğ', 'h', 'j', 'k', 'l', 'm', 'n', 'p', 'r', 's', 'ş', 't', 'v',
    'y', 'z', 'q', 'w', 'x',
];

/// Classifies a codepoint. Only lowercase letters are recognised; callers are
/// expected to normalise first.
pub fn classify_char(c: char) -> LetterClass {
    match c {
        'a' | 'e' | 'ı' | 'i' | 'o' | 'ö' | 'u' | 'ü' => LetterClass::Vowel,
        'b' | 'c' | 'ç' | 'd' | 'f' | 'g' | 'ğ' | 'h' | 'j' | 'k' | 'l' | 'm' | 'n' | 'p' | 'r'
        | 's' | 'ş' | 't' | 'v' | 'y' | 'z' | 'q' | 'w' | 'x' => LetterClass::Consonant,
        _ => LetterClass::Other,
    }
}

/// True for codepoints that may appear inside a word.
pub fn is_letter(c: char) -> bool {
    classify_char(c) != LetterClass::Other
}

/// Syllable template, plus the fallback for an unattached consonant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTag {
    V,
    CV,
    VC,
    CVC,
    VCC,
    CVCC,
    LoneC,
}

use LetterClass::{Consonant as C, Vowel as V};

/// Templates in the order the matcher tries them.
const MATCH_ORDER: [(PatternTag, &[LetterClass]); 6] = [
    (PatternTag::CVCC, &[C, V, C, C]),
    (PatternTag::VCC, &[V, C, C]),
    (PatternTag::CVC, &[C, V, C]),
    (PatternTag::VC, &[V, C]),
    (PatternTag::CV, &[C, V]),
    (PatternTag::V, &[V]),
];

impl PatternTag {
    pub const ALL: [PatternTag; 7] = [
        PatternTag::V,
        PatternTag::CV,
        PatternTag::VC,
        PatternTag::CVC,
        PatternTag::VCC,
        PatternTag::CVCC,
        PatternTag::LoneC,
    ];

    /// Letter-class sequence of the template.
    pub fn classes(self) -> &'static [LetterClass] {
        match self {
            PatternTag::V => &[V],
            PatternTag::CV => &[C, V],
            PatternTag::VC => &[V, C],
            PatternTag::CVC => &[C, V, C],
            PatternTag::VCC => &[V, C, C],
            PatternTag::CVCC => &[C, V, C, C],
            PatternTag::LoneC => &[C],
        }
    }

    /// Number of letters a syllable with this tag spans; never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.classes().len()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PatternTag::V => "V",
            PatternTag::CV => "CV",
            PatternTag::VC => "VC",
            PatternTag::CVC => "CVC",
            PatternTag::VCC => "VCC",
            PatternTag::CVCC => "CVCC",
            PatternTag::LoneC => "C",
        }
    }
}

impl fmt::Display for PatternTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One syllable of a word together with the template it matched.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syllable {
    text: String,
    pattern: PatternTag,
}

impl Syllable {
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn pattern(&self) -> PatternTag {
        self.pattern
    }

    pub fn into_text(self) -> String {
        self.text
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyllabifyError {
    #[error("cannot syllabify an empty word")]
    Empty,
    #[error("character {ch:?} at position {position} is not a Turkish letter")]
    NotALetter { ch: char, position: usize },
}

/// Returns the template whose class sequence equals that of `s`.
///
/// A single consonant yields [`PatternTag::LoneC`]; anything else that fits no
/// template (clusters, non-letters, empty input) yields `None`.
pub fn match_pattern(s: &str) -> Option<PatternTag> {
    let mut classes = [LetterClass::Other; 4];
    let mut n = 0;
    for c in s.chars() {
        if n == 4 {
            return None;
        }
        classes[n] = classify_char(c);
        n += 1;
    }
    let classes = &classes[..n];
    if classes == [C] {
        return Some(PatternTag::LoneC);
    }
    MATCH_ORDER
        .iter()
        .find(|(_, pattern)| *pattern == classes)
        .map(|(tag, _)| *tag)
}

/// Splits `word` into syllable spans: byte ranges into `word`, in reading order.
pub fn syllable_spans(word: &str) -> Result<Vec<(Range<usize>, PatternTag)>, SyllabifyError> {
    if word.is_empty() {
        return Err(SyllabifyError::Empty);
    }

    // (byte offset, class) per char, plus a sentinel end offset.
    let mut offsets = Vec::with_capacity(word.len() + 1);
    let mut classes = Vec::with_capacity(word.len());
    for (position, (offset, ch)) in word.char_indices().enumerate() {
        let class = classify_char(ch);
        if class == LetterClass::Other {
            return Err(SyllabifyError::NotALetter { ch, position });
        }
        offsets.push(offset);
        classes.push(class);
    }
    offsets.push(word.len());

    let mut spans = Vec::with_capacity(classes.len() / 2 + 1);
    // `end` is one past the current position, so the window is [end - len, end).
    let mut end = classes.len();
    while end > 0 {
        let matched = MATCH_ORDER.iter().find(|(tag, pattern)| {
            let len = tag.len();
            len <= end && classes[end - len..end] == **pattern
        });
        let (tag, len) = match matched {
            Some((tag, _)) => (*tag, tag.len()),
            None => (PatternTag::LoneC, 1),
        };
        spans.push((offsets[end - len]..offsets[end], tag));
        end -= len;
    }
    spans.reverse();
    Ok(spans)
}

/// Decomposes a lowercase word into syllables.
///
/// The concatenation of the returned syllable texts is always `word`.
pub fn syllabify_word(word: &str) -> Result<Vec<Syllable>, SyllabifyError> {
    Ok(syllable_spans(word)?
        .into_iter()
        .map(|(range, pattern)| Syllable {
            text: word[range].to_owned(),
            pattern,
        })
        .collect())
}

/// Number of distinct strings that match some template over the full alphabet.
///
/// Any vocabulary built from syllabified text is bounded by this count.
pub fn template_syllable_count() -> usize {
    PatternTag::ALL
        .iter()
        .map(|tag| {
            tag.classes()
                .iter()
                .map(|class| match class {
                    LetterClass::Vowel => VOWELS.len(),
                    _ => CONSONANTS.len(),
                })
                .product::<usize>()
        })
        .sum()
}
