//! Line-aligned corpora of whitespace-tokenized sentences.
//!
//! Tokens are split on runs of ASCII whitespace only; the toolkit applies no
//! language-specific tokenization, casing or punctuation normalization. Blank
//! lines are kept as empty sentences so parallel files stay aligned.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// Default word-boundary marker used in subword-level text.
pub const DEFAULT_MARKER: char = '_';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    #[default]
    Nfc,
    None,
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nfc" => Ok(Normalization::Nfc),
            "none" => Ok(Normalization::None),
            other => Err(Error::InvalidConfig(format!(
                "unknown normalization {other:?} (expected nfc or none)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    pub normalization: Normalization,
    /// Character that may not occur in any token.
    pub marker: char,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            normalization: Normalization::Nfc,
            marker: DEFAULT_MARKER,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Word,
    Char,
}

/// One line of text as a list of whitespace-free tokens.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Sentence {
    tokens: Vec<String>,
}

impl Sentence {
    /// Builds a sentence from tokens, rejecting empty tokens, tokens with
    /// whitespace and tokens containing `marker`.
    pub fn from_tokens<I, S>(tokens: I, marker: char) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        for token in &tokens {
            if token.is_empty() || token.chars().any(|c| c.is_ascii_whitespace()) {
                return Err(Error::InvalidConfig(format!(
                    "token {token:?} is empty or contains whitespace"
                )));
            }
            if token.contains(marker) {
                return Err(Error::ReservedMarker {
                    line: 0,
                    token: token.clone(),
                    marker,
                });
            }
        }
        Ok(Sentence { tokens })
    }

    /// Splits a line on ASCII whitespace; no validation against a marker.
    pub fn from_line(line: &str) -> Self {
        Sentence {
            tokens: line.split_ascii_whitespace().map(str::to_owned).collect(),
        }
    }

    pub(crate) fn from_tokens_unchecked(tokens: Vec<String>) -> Self {
        Sentence { tokens }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Tokens joined by single spaces.
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, token) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(token)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    sentences: Vec<Sentence>,
}

impl Corpus {
    pub fn new(sentences: Vec<Sentence>) -> Self {
        Corpus { sentences }
    }

    /// Parses in-memory text. CR before LF is stripped; a final newline does
    /// not produce an extra empty sentence.
    pub fn parse(text: &str, options: LoadOptions) -> Result<Self> {
        if text.is_empty() {
            return Ok(Corpus::default());
        }
        let body = text.strip_suffix('\n').unwrap_or(text);
        let mut sentences = Vec::new();
        for (idx, raw) in body.split('\n').enumerate() {
            let raw = raw.strip_suffix('\r').unwrap_or(raw);
            let line: String = match options.normalization {
                Normalization::Nfc => raw.nfc().collect(),
                Normalization::None => raw.to_owned(),
            };
            let sentence = Sentence::from_line(&line);
            if let Some(token) = sentence.tokens.iter().find(|t| t.contains(options.marker)) {
                return Err(Error::ReservedMarker {
                    line: idx + 1,
                    token: token.clone(),
                    marker: options.marker,
                });
            }
            sentences.push(sentence);
        }
        Ok(Corpus { sentences })
    }

    pub fn from_bytes(bytes: &[u8], options: LoadOptions) -> Result<Self> {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::InvalidUtf8 {
            offset: e.valid_up_to(),
        })?;
        Corpus::parse(text, options)
    }

    pub fn load(path: impl AsRef<Path>, options: LoadOptions) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Corpus::from_bytes(&bytes, options)
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn line_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.sentences
            .iter()
            .flat_map(|s| s.tokens.iter().map(String::as_str))
    }

    /// Renders the corpus back to text, one sentence per line, each line
    /// terminated by `\n`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for sentence in &self.sentences {
            out.push_str(&sentence.text());
            out.push('\n');
        }
        out
    }

    /// Applies `f` to every token, keeping sentence structure.
    pub fn map_tokens(&self, mut f: impl FnMut(&str) -> String) -> Corpus {
        Corpus {
            sentences: self
                .sentences
                .iter()
                .map(|s| Sentence {
                    tokens: s.tokens.iter().map(|t| f(t)).collect(),
                })
                .collect(),
        }
    }

    /// Concatenation of two corpora, `self` first.
    pub fn concat(&self, other: &Corpus) -> Corpus {
        let mut sentences = self.sentences.clone();
        sentences.extend(other.sentences.iter().cloned());
        Corpus { sentences }
    }

    /// Subset of sentences by index, repetitions allowed.
    pub fn select(&self, indices: &[usize]) -> Corpus {
        Corpus {
            sentences: indices.iter().map(|&i| self.sentences[i].clone()).collect(),
        }
    }
}

impl FromIterator<Sentence> for Corpus {
    fn from_iter<T: IntoIterator<Item = Sentence>>(iter: T) -> Self {
        Corpus {
            sentences: iter.into_iter().collect(),
        }
    }
}

pub fn load_corpus(path: impl AsRef<Path>, normalization: Normalization) -> Result<Corpus> {
    Corpus::load(
        path,
        LoadOptions {
            normalization,
            ..LoadOptions::default()
        },
    )
}

/// Counts units across the corpus. Word level counts tokens; char level counts
/// Unicode scalar values inside tokens.
pub fn vocabulary(corpus: &Corpus, level: Level) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for word in corpus.words() {
        match level {
            Level::Word => *counts.entry(word.to_owned()).or_insert(0) += 1,
            Level::Char => {
                for c in word.chars() {
                    *counts.entry(c.to_string()).or_insert(0) += 1;
                }
            }
        }
    }
    counts
}

/// Word-type frequency table.
pub fn word_frequencies(corpus: &Corpus) -> BTreeMap<&str, u64> {
    let mut counts = BTreeMap::new();
    for word in corpus.words() {
        *counts.entry(word).or_insert(0) += 1;
    }
    counts
}

/// Two sentence-aligned corpora.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelCorpus {
    source: Corpus,
    target: Corpus,
}

impl ParallelCorpus {
    pub fn new(source: Corpus, target: Corpus) -> Result<Self> {
        if source.line_count() != target.line_count() {
            return Err(Error::Misaligned {
                left: "source",
                left_len: source.line_count(),
                right: "target",
                right_len: target.line_count(),
            });
        }
        Ok(ParallelCorpus { source, target })
    }

    pub fn source(&self) -> &Corpus {
        &self.source
    }

    pub fn target(&self) -> &Corpus {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.source.line_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Sentence, &Sentence)> {
        self.source
            .sentences
            .iter()
            .zip(self.target.sentences.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Corpus {
        Corpus::parse(text, LoadOptions::default()).unwrap()
    }

    #[test]
    fn two_lines() {
        let c = parse("a b\nc");
        assert_eq!(c.line_count(), 2);
        assert_eq!(c.sentences()[0].tokens(), ["a", "b"]);
        assert_eq!(c.sentences()[1].tokens(), ["c"]);
    }

    #[test]
    fn empty_file() {
        assert_eq!(parse("").line_count(), 0);
    }

    #[test]
    fn blank_lines_are_kept() {
        let c = parse("a\n\n  \nb\n");
        assert_eq!(c.line_count(), 4);
        assert!(c.sentences()[1].is_empty());
        assert!(c.sentences()[2].is_empty());
    }

    #[test]
    fn crlf_is_stripped() {
        let c = parse("a b\r\nc\r\n");
        assert_eq!(c.line_count(), 2);
        assert_eq!(c.sentences()[0].tokens(), ["a", "b"]);
        assert_eq!(c.sentences()[1].tokens(), ["c"]);
    }

    #[test]
    fn nfc_composes() {
        // Reference NFC table: U+0065 U+0301 -> U+00E9; U+0078 U+0301 has no
        // precomposed form and stays two scalars; U+0915 U+093C -> U+0915 U+093C
        // (KA+NUKTA is a composition exclusion, QA U+0958 decomposes).
        let c = parse("e\u{0301} x\u{0301} \u{0958}");
        let t = c.sentences()[0].tokens();
        assert_eq!(t[0], "\u{00E9}");
        assert_eq!(t[1], "x\u{0301}");
        assert_eq!(t[2], "\u{0915}\u{093C}");

        let raw = Corpus::parse(
            "e\u{0301}",
            LoadOptions {
                normalization: Normalization::None,
                ..LoadOptions::default()
            },
        )
        .unwrap();
        assert_eq!(raw.sentences()[0].tokens()[0], "e\u{0301}");
    }

    #[test]
    fn marker_in_token_is_rejected_with_line() {
        let err = Corpus::parse("ok\nsnake_case", LoadOptions::default()).unwrap_err();
        match err {
            Error::ReservedMarker { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_utf8_reports_offset() {
        let err = Corpus::from_bytes(b"ab\xffcd", LoadOptions::default()).unwrap_err();
        match err {
            Error::InvalidUtf8 { offset } => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_corpus("/nonexistent/corpus.txt", Normalization::Nfc).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn vocabulary_levels() {
        let c = parse("ab ab b");
        let words = vocabulary(&c, Level::Word);
        assert_eq!(words.len(), 2);
        assert_eq!(words["ab"], 2);
        assert_eq!(words["b"], 1);
        let chars = vocabulary(&c, Level::Char);
        assert_eq!(chars.len(), 2);
        assert_eq!(chars["a"], 2);
        assert_eq!(chars["b"], 3);
        assert!(vocabulary(&Corpus::default(), Level::Word).is_empty());
    }

    #[test]
    fn write_back_is_idempotent() {
        let c = parse("  a\tb \n\nc  d\r\ne\u{0301}");
        let again = parse(&c.to_text());
        assert_eq!(c, again);
    }

    #[test]
    fn parallel_requires_alignment() {
        let err = ParallelCorpus::new(parse("a\nb"), parse("a")).unwrap_err();
        assert!(matches!(err, Error::Misaligned { .. }));
    }
}
