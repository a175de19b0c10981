//! Script specification files.
//!
//! ```text
//! [meta]
//! name = devanagari
//! kind = abugida
//! block_base = U+0900
//!
//! [vowels]
//! U+0904..U+0914 U+093E
//!
//! [consonants]
//! क ख U+0917..U+0939
//!
//! [combining]
//! U+094D
//! ```
//!
//! Entries are whitespace separated: a literal character, `U+XXXX`, or an
//! inclusive range `U+XXXX..U+YYYY`. `#` starts a comment.

use std::collections::BTreeSet;
use std::path::Path;

use super::{ScriptKind, ScriptSpec};
use crate::error::{Error, Result};

const BUILTIN: &[(&str, &str)] = &[
    ("latin", include_str!("../../scripts/latin.spec")),
    ("cyrillic", include_str!("../../scripts/cyrillic.spec")),
    ("devanagari", include_str!("../../scripts/devanagari.spec")),
    ("bengali", include_str!("../../scripts/bengali.spec")),
    ("gurmukhi", include_str!("../../scripts/gurmukhi.spec")),
    ("gujarati", include_str!("../../scripts/gujarati.spec")),
    ("oriya", include_str!("../../scripts/oriya.spec")),
    ("tamil", include_str!("../../scripts/tamil.spec")),
    ("telugu", include_str!("../../scripts/telugu.spec")),
    ("kannada", include_str!("../../scripts/kannada.spec")),
    ("malayalam", include_str!("../../scripts/malayalam.spec")),
];

const ALIASES: &[(&str, &str)] = &[
    ("danish", "latin"),
    ("swedish", "latin"),
    ("malay", "latin"),
    ("indonesian", "latin"),
    ("bulgarian", "cyrillic"),
    ("macedonian", "cyrillic"),
    ("hindi", "devanagari"),
    ("marathi", "devanagari"),
    ("nepali", "devanagari"),
    ("konkani", "devanagari"),
    ("bangla", "bengali"),
    ("punjabi", "gurmukhi"),
    ("odia", "oriya"),
];

/// Names of the bundled specs (aliases excluded).
pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(n, _)| *n)
}

#[derive(Clone, Copy)]
enum Section {
    Meta,
    Vowels,
    Consonants,
    Combining,
}

fn codepoint(token: &str) -> Option<char> {
    let hex = token
        .strip_prefix("U+")
        .or_else(|| token.strip_prefix("u+"))?;
    u32::from_str_radix(hex, 16).ok().and_then(char::from_u32)
}

fn entry(token: &str) -> Option<Vec<char>> {
    if let Some((lo, hi)) = token.split_once("..") {
        let (lo, hi) = (codepoint(lo)?, codepoint(hi)?);
        if lo > hi {
            return None;
        }
        return Some((lo..=hi).collect());
    }
    if let Some(c) = codepoint(token) {
        return Some(vec![c]);
    }
    let mut chars = token.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(vec![c]),
        _ => None,
    }
}

impl ScriptSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut section = None;
        let mut name = None;
        let mut kind = None;
        let mut block_base = None;
        let mut vowels = BTreeSet::new();
        let mut consonants = BTreeSet::new();
        let mut combining = BTreeSet::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::ScriptSpec {
                line: line_no,
                message,
            };
            // '#' only starts a comment at the beginning of a token.
            let line = match raw.find(" #").or_else(|| raw.starts_with('#').then_some(0)) {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = Some(match header.trim() {
                    "meta" => Section::Meta,
                    "vowels" => Section::Vowels,
                    "consonants" => Section::Consonants,
                    "combining" => Section::Combining,
                    other => return Err(err(format!("unknown section [{other}]"))),
                });
                continue;
            }
            match section {
                None => return Err(err("entry before any section".into())),
                Some(Section::Meta) => {
                    let (key, value) = line
                        .split_once('=')
                        .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
                    let value = value.trim();
                    match key.trim() {
                        "name" => name = Some(value.to_owned()),
                        "kind" => {
                            kind = Some(match value {
                                "alphabet" => ScriptKind::Alphabet,
                                "abugida" => ScriptKind::Abugida,
                                other => return Err(err(format!("unknown kind {other:?}"))),
                            })
                        }
                        "block_base" => {
                            let hex = value
                                .strip_prefix("U+")
                                .or_else(|| value.strip_prefix("0x"))
                                .unwrap_or(value);
                            block_base = Some(
                                u32::from_str_radix(hex, 16)
                                    .map_err(|_| err(format!("bad block_base {value:?}")))?,
                            );
                        }
                        other => return Err(err(format!("unknown meta key {other:?}"))),
                    }
                }
                Some(set) => {
                    let target = match set {
                        Section::Vowels => &mut vowels,
                        Section::Consonants => &mut consonants,
                        Section::Combining => &mut combining,
                        Section::Meta => unreachable!(),
                    };
                    for token in line.split_whitespace() {
                        let chars =
                            entry(token).ok_or_else(|| err(format!("bad entry {token:?}")))?;
                        target.extend(chars);
                    }
                }
            }
        }

        let name = name.ok_or_else(|| Error::ScriptSpec {
            line: 0,
            message: "missing meta name".into(),
        })?;
        let kind = kind.ok_or_else(|| Error::ScriptSpec {
            line: 0,
            message: "missing meta kind".into(),
        })?;
        ScriptSpec::new(name, kind, vowels, consonants, combining, block_base)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ScriptSpec::parse(&text)
    }

    /// A bundled spec by script or language name.
    pub fn builtin(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        let canonical = ALIASES
            .iter()
            .find(|(alias, _)| *alias == lower)
            .map_or(lower.as_str(), |(_, target)| target);
        let (_, text) = BUILTIN
            .iter()
            .find(|(n, _)| *n == canonical)
            .ok_or_else(|| Error::UnknownScript(name.to_owned()))?;
        ScriptSpec::parse(text)
    }

    /// Builtin name, or a path to a spec file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        match ScriptSpec::builtin(name_or_path) {
            Ok(spec) => Ok(spec),
            Err(Error::UnknownScript(_)) if Path::new(name_or_path).is_file() => {
                ScriptSpec::load(name_or_path)
            }
            Err(e) => Err(e),
        }
    }
}
