//! Hasanta-aware segmentation of Bengali words.
//!
//! A word is split into grapheme units. Every run of consonants linked by
//! hasanta (U+09CD) becomes one [`UnitKind::Conjunct`] unit; every other
//! codepoint becomes its own [`UnitKind::Simple`] unit. Combining marks that
//! never stand alone (nukta, ZWJ, ZWNJ) ride on the unit before them, so the
//! concatenation of all unit texts is always the input string.

use std::fmt;

pub const HASANTA: char = '\u{09CD}';
pub const NUKTA: char = '\u{09BC}';
pub const ZWJ: char = '\u{200D}';
pub const ZWNJ: char = '\u{200C}';

/// Base consonants that can take part in a conjunct.
pub fn is_consonant(c: char) -> bool {
    matches!(c, '\u{0995}'..='\u{09B9}' | '\u{09DC}' | '\u{09DD}' | '\u{09DF}')
}

/// Dependent vowel signs (kar forms), including the au length mark.
pub fn is_vowel_sign(c: char) -> bool {
    matches!(
        c,
        '\u{09BE}'
            ..='\u{09C4}' | '\u{09C7}' | '\u{09C8}' | '\u{09CB}' | '\u{09CC}' | '\u{09D7}' | '\u{09E2}' | '\u{09E3}'
    )
}

pub fn is_bengali(c: char) -> bool {
    matches!(c, '\u{0980}'..='\u{09FF}')
}

fn is_joiner(c: char) -> bool {
    c == ZWJ || c == ZWNJ
}

/// Marks that are glued to whatever unit precedes them.
fn is_attached_mark(c: char) -> bool {
    is_joiner(c) || c == NUKTA
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitKind {
    Simple,
    Conjunct,
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitKind::Simple => f.write_str("simple"),
            UnitKind::Conjunct => f.write_str("conjunct"),
        }
    }
}

/// One logical letter of a word.
///
/// A simple unit holds one base codepoint, optionally followed by a nukta or
/// joiners. A conjunct holds two or more consonants separated by hasanta.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphemeUnit {
    kind: UnitKind,
    text: String,
    is_vowel_sign: bool,
}

impl GraphemeUnit {
    fn simple(c: char) -> Self {
        GraphemeUnit {
            kind: UnitKind::Simple,
            text: c.to_string(),
            is_vowel_sign: is_vowel_sign(c),
        }
    }

    pub fn kind(&self) -> UnitKind {
        self.kind
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn is_vowel_sign(&self) -> bool {
        self.is_vowel_sign
    }

    pub fn is_conjunct(&self) -> bool {
        self.kind == UnitKind::Conjunct
    }

    /// First codepoint of the unit.
    pub fn base(&self) -> char {
        self.text.chars().next().expect("units are never empty")
    }

    /// True when the unit is Bengali script and so may carry an error.
    pub fn is_bengali(&self) -> bool {
        is_bengali(self.base())
    }

    /// The member letters of a conjunct, hasanta and joiners removed.
    /// A simple unit yields its own text.
    pub fn letters(&self) -> Vec<String> {
        match self.kind {
            UnitKind::Simple => vec![self.text.clone()],
            UnitKind::Conjunct => self
                .text
                .split(HASANTA)
                .map(|part| part.chars().filter(|c| !is_joiner(*c)).collect::<String>())
                .filter(|part| !part.is_empty())
                .collect(),
        }
    }
}

/// A word split into grapheme units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentedWord {
    source: String,
    units: Vec<GraphemeUnit>,
    irregular: bool,
}

impl SegmentedWord {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn units(&self) -> &[GraphemeUnit] {
        &self.units
    }

    pub fn unit(&self, index: usize) -> Option<&GraphemeUnit> {
        self.units.get(index)
    }

    /// Number of units, each conjunct counted as one letter.
    pub fn effective_length(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Set when a hasanta appeared where it could not join two consonants.
    pub fn is_irregular(&self) -> bool {
        self.irregular
    }

    pub fn conjunct_count(&self) -> usize {
        self.units.iter().filter(|u| u.is_conjunct()).count()
    }

    /// Concatenation of all unit texts. Always equal to [`Self::source`].
    pub fn concat(&self) -> String {
        self.units.iter().map(|u| u.text.as_str()).collect()
    }
}

/// Splits `word` into grapheme units. Total: never fails.
pub fn segment(word: &str) -> SegmentedWord {
    let chars: Vec<char> = word.chars().collect();
    let mut units: Vec<GraphemeUnit> = Vec::new();
    let mut irregular = false;
    let mut i = 0;

    while i < chars.len() {
        let c = chars[i];

        if c == HASANTA {
            // Find the next consonant, allowing joiners in between.
            let mut j = i + 1;
            while j < chars.len() && is_joiner(chars[j]) {
                j += 1;
            }
            let joins = j < chars.len() && is_consonant(chars[j]) && units.last().is_some_and(ends_in_consonant);
            match units.last_mut() {
                Some(prev) if joins => {
                    prev.text.extend(&chars[i..=j]);
                    prev.kind = UnitKind::Conjunct;
                    prev.is_vowel_sign = false;
                    i = j + 1;
                }
                Some(prev) => {
                    prev.text.push(c);
                    irregular = true;
                    i += 1;
                }
                None => {
                    units.push(GraphemeUnit::simple(c));
                    irregular = true;
                    i += 1;
                }
            }
            continue;
        }

        if is_attached_mark(c) {
            if let Some(prev) = units.last_mut() {
                prev.text.push(c);
            } else {
                units.push(GraphemeUnit::simple(c));
            }
            i += 1;
            continue;
        }

        units.push(GraphemeUnit::simple(c));
        i += 1;
    }

    SegmentedWord {
        source: word.to_string(),
        units,
        irregular,
    }
}

fn ends_in_consonant(unit: &GraphemeUnit) -> bool {
    unit.text
        .chars()
        .rev()
        .find(|c| !is_attached_mark(*c))
        .is_some_and(is_consonant)
}

/// Number of units in `word` after segmentation.
pub fn effective_length(word: &SegmentedWord) -> usize {
    word.effective_length()
}
