//! One-to-one character mapping between Indic scripts.
//!
//! The Brahmi-derived scripts encoded in Unicode share a parallel layout:
//! each occupies a 128-codepoint block and places the same letter at the same
//! offset (KA is always at base + 0x15). Mapping therefore shifts codepoints
//! by the difference of block bases. Explicit exceptions override the shift.
//!
//! An in-block character is shifted only when both it and its target slot are
//! assigned code points. Anything else is kept unchanged and counted as
//! unmappable, which keeps the mapping injective and reversible.

use std::collections::BTreeMap;
use std::path::Path;

use unicode_general_category::{get_general_category, GeneralCategory};

use crate::corpus::Corpus;
use crate::error::{Error, Result};

pub const INDIC_BLOCK_SIZE: u32 = 0x80;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndicScript {
    Devanagari,
    Bengali,
    Gurmukhi,
    Gujarati,
    Oriya,
    Tamil,
    Telugu,
    Kannada,
    Malayalam,
}

impl IndicScript {
    pub const ALL: [IndicScript; 9] = [
        IndicScript::Devanagari,
        IndicScript::Bengali,
        IndicScript::Gurmukhi,
        IndicScript::Gujarati,
        IndicScript::Oriya,
        IndicScript::Tamil,
        IndicScript::Telugu,
        IndicScript::Kannada,
        IndicScript::Malayalam,
    ];

    pub fn block_base(self) -> u32 {
        match self {
            IndicScript::Devanagari => 0x0900,
            IndicScript::Bengali => 0x0980,
            IndicScript::Gurmukhi => 0x0A00,
            IndicScript::Gujarati => 0x0A80,
            IndicScript::Oriya => 0x0B00,
            IndicScript::Tamil => 0x0B80,
            IndicScript::Telugu => 0x0C00,
            IndicScript::Kannada => 0x0C80,
            IndicScript::Malayalam => 0x0D00,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IndicScript::Devanagari => "devanagari",
            IndicScript::Bengali => "bengali",
            IndicScript::Gurmukhi => "gurmukhi",
            IndicScript::Gujarati => "gujarati",
            IndicScript::Oriya => "oriya",
            IndicScript::Tamil => "tamil",
            IndicScript::Telugu => "telugu",
            IndicScript::Kannada => "kannada",
            IndicScript::Malayalam => "malayalam",
        }
    }

    /// Parses a script name; a few language names are accepted as aliases.
    pub fn from_name(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        let script = match lower.as_str() {
            "devanagari" | "hindi" | "marathi" | "nepali" | "konkani" => IndicScript::Devanagari,
            "bengali" | "bangla" | "assamese" => IndicScript::Bengali,
            "gurmukhi" | "punjabi" => IndicScript::Gurmukhi,
            "gujarati" => IndicScript::Gujarati,
            "oriya" | "odia" => IndicScript::Oriya,
            "tamil" => IndicScript::Tamil,
            "telugu" => IndicScript::Telugu,
            "kannada" => IndicScript::Kannada,
            "malayalam" => IndicScript::Malayalam,
            _ => return Err(Error::UnknownScript(name.to_owned())),
        };
        Ok(script)
    }
}

fn is_assigned(c: char) -> bool {
    get_general_category(c) != GeneralCategory::Unassigned
}

fn parse_codepoint(s: &str) -> Option<u32> {
    let hex = s
        .strip_prefix("U+")
        .or_else(|| s.strip_prefix("u+"))
        .or_else(|| s.strip_prefix("0x"))
        .or_else(|| s.strip_prefix("0X"))?;
    u32::from_str_radix(hex, 16).ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransliterationTable {
    source_block_base: u32,
    target_block_base: u32,
    block_size: u32,
    exceptions: BTreeMap<char, char>,
}

impl TransliterationTable {
    pub fn new(
        source_block_base: u32,
        target_block_base: u32,
        block_size: u32,
        exceptions: BTreeMap<char, char>,
    ) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::Translit("block size must be positive".into()));
        }
        for base in [source_block_base, target_block_base] {
            let last = base.checked_add(block_size - 1);
            if last.and_then(char::from_u32).is_none() || char::from_u32(base).is_none() {
                return Err(Error::Translit(format!(
                    "block U+{base:04X}+{block_size:#x} is not a valid scalar range"
                )));
            }
        }
        let table = TransliterationTable {
            source_block_base,
            target_block_base,
            block_size,
            exceptions: BTreeMap::new(),
        };
        let mut outputs: BTreeMap<char, char> = BTreeMap::new();
        for (&from, &to) in &exceptions {
            if let Some(prev) = outputs.insert(to, from) {
                return Err(Error::Translit(format!(
                    "exceptions U+{:04X} and U+{:04X} both map to U+{:04X}",
                    prev as u32, from as u32, to as u32
                )));
            }
        }
        for offset in 0..block_size {
            let c = char::from_u32(source_block_base + offset).expect("checked above");
            if exceptions.contains_key(&c) {
                continue;
            }
            if let Some(mapped) = table.shift(c) {
                if let Some(&from) = outputs.get(&mapped) {
                    return Err(Error::Translit(format!(
                        "exception U+{:04X} -> U+{:04X} collides with the offset mapping of U+{:04X}",
                        from as u32, mapped as u32, c as u32
                    )));
                }
            }
        }
        Ok(TransliterationTable {
            exceptions,
            ..table
        })
    }

    pub fn between(from: IndicScript, to: IndicScript) -> Self {
        TransliterationTable::new(
            from.block_base(),
            to.block_base(),
            INDIC_BLOCK_SIZE,
            BTreeMap::new(),
        )
        .expect("Indic blocks are valid")
    }

    /// Same table with exceptions from a file of `U+XXXX U+YYYY` lines.
    pub fn with_exceptions_file(self, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut exceptions = self.exceptions.clone();
        exceptions.extend(parse_exceptions(&text)?);
        TransliterationTable::new(
            self.source_block_base,
            self.target_block_base,
            self.block_size,
            exceptions,
        )
    }

    /// Parses a map file: `from = SCRIPT` / `to = SCRIPT` (or `source_base` /
    /// `target_base` as `U+XXXX`), optional `block_size`, and exception lines.
    pub fn from_map_text(text: &str) -> Result<Self> {
        let mut source = None;
        let mut target = None;
        let mut block_size = INDIC_BLOCK_SIZE;
        let mut exception_lines = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::Translit(format!("line {}: {message}", idx + 1));
            if let Some((key, value)) = line.split_once('=') {
                let (key, value) = (key.trim(), value.trim());
                let base = || {
                    parse_codepoint(value).ok_or_else(|| bad(format!("bad codepoint {value:?}")))
                };
                match key {
                    "from" => source = Some(IndicScript::from_name(value)?.block_base()),
                    "to" => target = Some(IndicScript::from_name(value)?.block_base()),
                    "source_base" => source = Some(base()?),
                    "target_base" => target = Some(base()?),
                    "block_size" => {
                        block_size = parse_codepoint(value)
                            .or_else(|| value.parse().ok())
                            .ok_or_else(|| bad(format!("bad block size {value:?}")))?
                    }
                    other => return Err(bad(format!("unknown key {other:?}"))),
                }
            } else {
                exception_lines.push_str(line);
                exception_lines.push('\n');
            }
        }
        let source =
            source.ok_or_else(|| Error::Translit("map file has no source script".into()))?;
        let target =
            target.ok_or_else(|| Error::Translit("map file has no target script".into()))?;
        TransliterationTable::new(
            source,
            target,
            block_size,
            parse_exceptions(&exception_lines)?,
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_map_text(&text)
    }

    pub fn source_block_base(&self) -> u32 {
        self.source_block_base
    }

    pub fn target_block_base(&self) -> u32 {
        self.target_block_base
    }

    pub fn block_size(&self) -> u32 {
        self.block_size
    }

    pub fn exceptions(&self) -> &BTreeMap<char, char> {
        &self.exceptions
    }

    /// Table for the opposite direction.
    pub fn reverse(&self) -> Result<Self> {
        TransliterationTable::new(
            self.target_block_base,
            self.source_block_base,
            self.block_size,
            self.exceptions.iter().map(|(&a, &b)| (b, a)).collect(),
        )
    }

    pub fn in_source_block(&self, c: char) -> bool {
        let cp = c as u32;
        cp >= self.source_block_base && cp - self.source_block_base < self.block_size
    }

    fn shift(&self, c: char) -> Option<char> {
        let offset = (c as u32).checked_sub(self.source_block_base)?;
        if offset >= self.block_size || !is_assigned(c) {
            return None;
        }
        char::from_u32(self.target_block_base + offset).filter(|&t| is_assigned(t))
    }

    /// Maps one character; `None` for an in-block character with no
    /// counterpart (it is then kept as-is).
    pub fn map_char(&self, c: char) -> Option<char> {
        if let Some(&mapped) = self.exceptions.get(&c) {
            return Some(mapped);
        }
        if !self.in_source_block(c) {
            return Some(c);
        }
        self.shift(c)
    }

    /// Transliterates text and reports how many in-block characters had no
    /// counterpart.
    pub fn transliterate_counted(&self, text: &str) -> (String, usize) {
        let mut unmappable = 0;
        let out = text
            .chars()
            .map(|c| {
                self.map_char(c).unwrap_or_else(|| {
                    unmappable += 1;
                    c
                })
            })
            .collect();
        (out, unmappable)
    }

    /// Every in-block character that is kept as-is.
    pub fn unmappable_chars(&self) -> Vec<char> {
        (0..self.block_size)
            .filter_map(|o| char::from_u32(self.source_block_base + o))
            .filter(|&c| self.map_char(c).is_none())
            .collect()
    }
}

fn parse_exceptions(text: &str) -> Result<BTreeMap<char, char>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let pair = (
            fields
                .next()
                .and_then(parse_codepoint)
                .and_then(char::from_u32),
            fields
                .next()
                .and_then(parse_codepoint)
                .and_then(char::from_u32),
            fields.next(),
        );
        match pair {
            (Some(from), Some(to), None) => {
                if map.insert(from, to).is_some() {
                    return Err(Error::Translit(format!(
                        "line {}: duplicate exception for U+{:04X}",
                        idx + 1,
                        from as u32
                    )));
                }
            }
            _ => {
                return Err(Error::Translit(format!(
                    "line {}: expected \"U+XXXX U+YYYY\", got {line:?}",
                    idx + 1
                )))
            }
        }
    }
    Ok(map)
}

pub fn transliterate(text: &str, table: &TransliterationTable) -> String {
    let (out, unmappable) = table.transliterate_counted(text);
    if unmappable > 0 {
        log::warn!("{unmappable} character(s) had no counterpart in the target script");
    }
    out
}

/// Transliterates every token of a corpus.
pub fn transliterate_corpus(corpus: &Corpus, table: &TransliterationTable) -> (Corpus, usize) {
    let mut unmappable = 0;
    let mapped = corpus.map_tokens(|t| {
        let (out, n) = table.transliterate_counted(t);
        unmappable += n;
        out
    });
    (mapped, unmappable)
}

/// Fraction of token characters that fall inside the table's source block;
/// 0 for a corpus without characters.
pub fn mappable_fraction(corpus: &Corpus, table: &TransliterationTable) -> f64 {
    let (mut inside, mut total) = (0usize, 0usize);
    for c in corpus.words().flat_map(str::chars) {
        total += 1;
        if table.in_source_block(c) {
            inside += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        inside as f64 / total as f64
    }
}
