//! Text normalisation and segmentation into words, digit runs and
//! punctuation.

use unicode_normalization::UnicodeNormalization;

use crate::syllabifier::is_letter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitKind {
    Word,
    DigitRun,
    PunctChar,
}

/// A segment of normalised text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextUnit {
    pub kind: UnitKind,
    pub text: String,
    /// Codepoint index of the unit's first character in the normalised text.
    pub char_offset: usize,
}

impl TextUnit {
    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }

    /// True if `next` starts right where this unit ends, with no whitespace
    /// in between.
    pub fn is_joined_to(&self, next: &TextUnit) -> bool {
        self.char_offset + self.char_len() == next.char_offset
    }
}

/// Lowercases with the Turkish dotted/dotless I mapping.
fn push_turkish_lower(out: &mut String, c: char) {
    match c {
        'I' => out.push('ı'),
        'İ' => out.push('i'),
        c => out.extend(c.to_lowercase()),
    }
}

/// NFC-composes, applies Turkish lowercasing, collapses whitespace runs to a
/// single space and trims both ends.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for c in text.nfc() {
        if c.is_whitespace() {
            pending_space = !out.is_empty();
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        push_turkish_lower(&mut out, c);
    }
    out
}

fn kind_of(c: char) -> UnitKind {
    if is_letter(c) {
        UnitKind::Word
    } else if c.is_ascii_digit() {
        UnitKind::DigitRun
    } else {
        UnitKind::PunctChar
    }
}

/// Segments normalised text.
///
/// Maximal runs of letters and of ASCII digits become one unit each; every
/// other non-whitespace codepoint is a unit of its own.
pub fn split_units(normalized: &str) -> Vec<TextUnit> {
    let mut units: Vec<TextUnit> = Vec::new();
    let mut current: Option<TextUnit> = None;
    for (index, c) in normalized.chars().enumerate() {
        if c.is_whitespace() {
            units.extend(current.take());
            continue;
        }
        let kind = kind_of(c);
        match current.as_mut() {
            Some(unit) if unit.kind == kind && kind != UnitKind::PunctChar => unit.text.push(c),
            _ => {
                units.extend(current.take());
                current = Some(TextUnit {
                    kind,
                    text: c.to_string(),
                    char_offset: index,
                });
            }
        }
    }
    units.extend(current);
    units
}

/// Inverse of [`split_units`] for normalised input: joins units, inserting a
/// single space wherever the original had whitespace.
pub fn join_units(units: &[TextUnit]) -> String {
    let mut out = String::new();
    for (i, unit) in units.iter().enumerate() {
        if i > 0 && !units[i - 1].is_joined_to(unit) {
            out.push(' ');
        }
        out.push_str(&unit.text);
    }
    out
}
