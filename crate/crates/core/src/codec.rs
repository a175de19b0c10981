//! Subword-level sentence representation.
//!
//! Words are segmented independently and a standalone marker token (default
//! `_`) is placed between consecutive words:
//!
//! ```text
//! word:    Childhood means simplicity .
//! subword: Chi ldhoo d _ mea ns _ si mpli ci ty _ .
//! ```
//!
//! Desegmentation concatenates the units between markers and tolerates
//! leading, trailing and repeated markers, since decoder output is not
//! guaranteed to be well formed.

use std::fmt;

use crate::bpe::BpeModel;
use crate::corpus::{Corpus, Sentence, DEFAULT_MARKER};
use crate::error::{Error, Result};
use crate::ortho::ScriptSpec;

/// Splits one word into subword units.
pub trait Segmenter {
    fn segment_word(&self, word: &str) -> Result<Vec<String>>;
}

impl Segmenter for BpeModel {
    fn segment_word(&self, word: &str) -> Result<Vec<String>> {
        Ok(self.apply(word))
    }
}

impl Segmenter for ScriptSpec {
    fn segment_word(&self, word: &str) -> Result<Vec<String>> {
        Ok(self.syllabify(word))
    }
}

/// One unit per character.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CharSplitter;

impl Segmenter for CharSplitter {
    fn segment_word(&self, word: &str) -> Result<Vec<String>> {
        Ok(word.chars().map(String::from).collect())
    }
}

/// Keeps every word whole.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WordSplitter;

impl Segmenter for WordSplitter {
    fn segment_word(&self, word: &str) -> Result<Vec<String>> {
        Ok(vec![word.to_owned()])
    }
}

impl<S: Segmenter + ?Sized> Segmenter for &S {
    fn segment_word(&self, word: &str) -> Result<Vec<String>> {
        (**self).segment_word(word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SegmentedText {
    units: Vec<String>,
}

impl SegmentedText {
    pub fn new(units: Vec<String>) -> Self {
        SegmentedText { units }
    }

    /// Splits a line of subword text on ASCII whitespace.
    pub fn from_line(line: &str) -> Self {
        SegmentedText {
            units: line.split_ascii_whitespace().map(str::to_owned).collect(),
        }
    }

    pub fn units(&self) -> &[String] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Canonical: no empty unit, and the marker is never first, last or
    /// repeated.
    pub fn is_canonical(&self, marker: char) -> bool {
        let is_marker = |u: &String| is_marker_unit(u, marker);
        if self.units.iter().any(String::is_empty) {
            return false;
        }
        if self.units.first().is_some_and(is_marker) || self.units.last().is_some_and(is_marker) {
            return false;
        }
        !self
            .units
            .windows(2)
            .any(|w| is_marker(&w[0]) && is_marker(&w[1]))
    }
}

impl fmt::Display for SegmentedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.units.join(" "))
    }
}

fn is_marker_unit(unit: &str, marker: char) -> bool {
    let mut chars = unit.chars();
    chars.next() == Some(marker) && chars.next().is_none()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Codec {
    marker: char,
}

impl Default for Codec {
    fn default() -> Self {
        Codec {
            marker: DEFAULT_MARKER,
        }
    }
}

impl Codec {
    pub fn new(marker: char) -> Self {
        Codec { marker }
    }

    pub fn marker(&self) -> char {
        self.marker
    }

    pub fn segment<S: Segmenter + ?Sized>(
        &self,
        sentence: &Sentence,
        segmenter: &S,
    ) -> Result<SegmentedText> {
        let mut units = Vec::new();
        for (index, word) in sentence.tokens().iter().enumerate() {
            let fail = |message: String| Error::Segment {
                index,
                word: word.clone(),
                message,
            };
            if word.contains(self.marker) {
                return Err(fail(format!(
                    "contains the boundary marker {:?}",
                    self.marker
                )));
            }
            let pieces = segmenter
                .segment_word(word)
                .map_err(|e| fail(e.to_string()))?;
            if pieces.iter().any(String::is_empty) || pieces.concat() != *word {
                return Err(fail(format!(
                    "segmenter output {pieces:?} does not concatenate to the word"
                )));
            }
            if index > 0 {
                units.push(self.marker.to_string());
            }
            units.extend(pieces);
        }
        Ok(SegmentedText { units })
    }

    pub fn segment_corpus<S: Segmenter + ?Sized>(
        &self,
        corpus: &Corpus,
        segmenter: &S,
    ) -> Result<Vec<SegmentedText>> {
        corpus
            .sentences()
            .iter()
            .map(|s| self.segment(s, segmenter))
            .collect()
    }

    pub fn desegment(&self, units: &[impl AsRef<str>]) -> Sentence {
        let mut words = Vec::new();
        let mut current = String::new();
        for unit in units {
            let unit = unit.as_ref();
            if is_marker_unit(unit, self.marker) {
                if !current.is_empty() {
                    words.push(std::mem::take(&mut current));
                }
            } else {
                current.push_str(unit);
            }
        }
        if !current.is_empty() {
            words.push(current);
        }
        Sentence::from_tokens_unchecked(words)
    }

    /// Desegments one line of subword text.
    pub fn desegment_line(&self, line: &str) -> Sentence {
        self.desegment(SegmentedText::from_line(line).units())
    }
}

/// Segments with the default marker.
pub fn segment<S: Segmenter + ?Sized>(sentence: &Sentence, segmenter: &S) -> Result<SegmentedText> {
    Codec::default().segment(sentence, segmenter)
}

/// Desegments with the default marker.
pub fn desegment(seg: &SegmentedText) -> Sentence {
    Codec::default().desegment(seg.units())
}
