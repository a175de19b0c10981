//! Plain-text model files.
//!
//! ```text
//! #subseg-bpe v1 num_merges=2
//! #alphabet<TAB>a<TAB>b
//! a<TAB>a
//! aa<TAB>b
//! ```
//!
//! Merge lines follow the header in rank order.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use super::{BpeModel, MergeRule};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "#subseg-bpe";
const ALPHABET_TAG: &str = "#alphabet";

impl BpeModel {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{MAGIC} v{FORMAT_VERSION} num_merges={}",
            self.num_merges()
        );
        out.push_str(ALPHABET_TAG);
        for c in &self.alphabet {
            out.push('\t');
            out.push(*c);
        }
        out.push('\n');
        for rule in &self.merges {
            let _ = writeln!(out, "{}\t{}", rule.left, rule.right);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::ModelFormat("empty model file".into()))?;
        let mut fields = header.split(' ');
        if fields.next() != Some(MAGIC) {
            return Err(Error::ModelLine {
                line: 1,
                message: format!("expected header starting with {MAGIC}"),
            });
        }
        let version = fields
            .next()
            .and_then(|v| v.strip_prefix('v'))
            .and_then(|v| v.parse::<u32>().ok())
            .ok_or_else(|| Error::ModelLine {
                line: 1,
                message: "missing format version".into(),
            })?;
        if version != FORMAT_VERSION {
            return Err(Error::ModelFormat(format!(
                "unsupported format version {version} (this build reads v{FORMAT_VERSION})"
            )));
        }
        let declared = fields
            .next()
            .and_then(|f| f.strip_prefix("num_merges="))
            .and_then(|n| n.parse::<usize>().ok())
            .ok_or_else(|| Error::ModelLine {
                line: 1,
                message: "missing num_merges".into(),
            })?;

        let (_, alphabet_line) = lines.next().ok_or_else(|| Error::ModelLine {
            line: 2,
            message: "missing alphabet line".into(),
        })?;
        let mut parts = alphabet_line.split('\t');
        if parts.next() != Some(ALPHABET_TAG) {
            return Err(Error::ModelLine {
                line: 2,
                message: format!("expected {ALPHABET_TAG}"),
            });
        }
        let mut alphabet = BTreeSet::new();
        for part in parts {
            let mut chars = part.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => {
                    if !alphabet.insert(c) {
                        return Err(Error::ModelLine {
                            line: 2,
                            message: format!("duplicate alphabet symbol {c:?}"),
                        });
                    }
                }
                _ => {
                    return Err(Error::ModelLine {
                        line: 2,
                        message: format!("alphabet entry {part:?} is not a single character"),
                    })
                }
            }
        }

        let mut merges = Vec::new();
        for (line, content) in lines {
            let mut sides = content.split('\t');
            match (sides.next(), sides.next(), sides.next()) {
                (Some(l), Some(r), None) if !l.is_empty() && !r.is_empty() => {
                    merges.push((line, l.to_owned(), r.to_owned()));
                }
                _ => {
                    return Err(Error::ModelLine {
                        line,
                        message: "expected \"left<TAB>right\"".into(),
                    })
                }
            }
        }
        if merges.len() != declared {
            return Err(Error::ModelFormat(format!(
                "header declares {declared} merges, file has {}",
                merges.len()
            )));
        }

        let mut known: HashSet<String> = alphabet.iter().map(|c| c.to_string()).collect();
        let mut seen = HashSet::new();
        let mut rules = Vec::with_capacity(merges.len());
        for (rank, (line, left, right)) in merges.into_iter().enumerate() {
            for side in [&left, &right] {
                if !known.contains(side) {
                    return Err(Error::ModelLine {
                        line,
                        message: format!(
                            "{side:?} is not built from the alphabet and earlier merges"
                        ),
                    });
                }
            }
            if !seen.insert((left.clone(), right.clone())) {
                return Err(Error::ModelLine {
                    line,
                    message: format!("duplicate rule {left:?} {right:?}"),
                });
            }
            let rule = MergeRule { left, right, rank };
            known.insert(rule.merged());
            rules.push(rule);
        }
        Ok(BpeModel::from_parts_unchecked(alphabet, rules))
    }
}

pub fn save_model(model: &BpeModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, model.to_text()).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<BpeModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    BpeModel::from_text(&text)
}
