//! `key = value` pipeline configuration files.
//!
//! ```text
//! # one pipeline per file
//! scheme = bpe            # bpe | bpe_joint | os | char | word
//! merges = 500            # or: target_vocab = 1200
//! input = train.src
//! input_tgt = train.tgt   # bpe_joint only
//! script = latin          # os: builtin name or spec file path
//! translit_map = bn-hi.map
//! normalization = nfc
//! marker = _
//! hyp = hyp.txt           # optional, scored by `sweep`
//! ref = ref.txt
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::corpus::{Normalization, DEFAULT_MARKER};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Bpe,
    BpeJoint,
    Os,
    Char,
    Word,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Bpe => "bpe",
            Scheme::BpeJoint => "bpe_joint",
            Scheme::Os => "os",
            Scheme::Char => "char",
            Scheme::Word => "word",
        }
    }

    pub fn is_bpe(self) -> bool {
        matches!(self, Scheme::Bpe | Scheme::BpeJoint)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bpe" => Ok(Scheme::Bpe),
            "bpe_joint" | "bpe-joint" => Ok(Scheme::BpeJoint),
            "os" => Ok(Scheme::Os),
            "char" => Ok(Scheme::Char),
            "word" => Ok(Scheme::Word),
            other => Err(Error::InvalidConfig(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub scheme: Scheme,
    pub merges: Option<usize>,
    pub target_vocab: Option<usize>,
    pub input: PathBuf,
    pub input_tgt: Option<PathBuf>,
    pub script: Option<String>,
    pub translit_map: Option<PathBuf>,
    pub normalization: Normalization,
    pub marker: char,
    pub hyp: Option<PathBuf>,
    pub reference: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    /// Directory relative paths are resolved against.
    pub base_dir: PathBuf,
}

impl PipelineConfig {
    pub fn new(scheme: Scheme, input: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            scheme,
            merges: None,
            target_vocab: None,
            input: input.into(),
            input_tgt: None,
            script: None,
            translit_map: None,
            normalization: Normalization::Nfc,
            marker: DEFAULT_MARKER,
            hyp: None,
            reference: None,
            output_dir: None,
            base_dir: PathBuf::new(),
        }
    }

    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut scheme = None;
        let mut config = PipelineConfig::new(Scheme::Char, PathBuf::new());
        let mut input = None;
        config.base_dir = base_dir.into();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Config {
                line: line_no,
                message,
            };
            let line = raw.split(" #").next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let number = || {
                value
                    .parse::<usize>()
                    .map_err(|_| err(format!("{key}: {value:?} is not a non-negative integer")))
            };
            match key {
                "scheme" => scheme = Some(value.parse().map_err(|e: Error| err(e.to_string()))?),
                "merges" => config.merges = Some(number()?),
                "target_vocab" => config.target_vocab = Some(number()?),
                "input" => input = Some(PathBuf::from(value)),
                "input_tgt" => config.input_tgt = Some(PathBuf::from(value)),
                "script" => config.script = Some(value.to_owned()),
                "translit_map" => config.translit_map = Some(PathBuf::from(value)),
                "normalization" => {
                    config.normalization = value.parse().map_err(|e: Error| err(e.to_string()))?
                }
                "marker" => {
                    let mut chars = value.chars();
                    config.marker = match (chars.next(), chars.next()) {
                        (Some(c), None) if !c.is_whitespace() => c,
                        _ => {
                            return Err(err(format!("marker must be one character, got {value:?}")))
                        }
                    };
                }
                "hyp" => config.hyp = Some(PathBuf::from(value)),
                "ref" => config.reference = Some(PathBuf::from(value)),
                "output_dir" => config.output_dir = Some(PathBuf::from(value)),
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        config.scheme = scheme.ok_or_else(|| Error::InvalidConfig("missing scheme".into()))?;
        config.input = input.ok_or_else(|| Error::InvalidConfig("missing input".into()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        PipelineConfig::parse(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |m: &str| Err(Error::InvalidConfig(m.to_owned()));
        if self.scheme.is_bpe() {
            match (self.merges, self.target_vocab) {
                (Some(_), Some(_)) => {
                    return invalid("merges and target_vocab are mutually exclusive")
                }
                (None, None) => return invalid("bpe schemes need merges or target_vocab"),
                (_, Some(0)) => return invalid("target_vocab must be positive"),
                _ => {}
            }
        } else if self.merges.is_some() || self.target_vocab.is_some() {
            return invalid("merges/target_vocab only apply to bpe schemes");
        }
        if self.scheme == Scheme::Os && self.script.is_none() {
            return invalid("os scheme needs a script");
        }
        if self.scheme == Scheme::BpeJoint && self.input_tgt.is_none() {
            return invalid("bpe_joint needs input_tgt");
        }
        if self.hyp.is_some() != self.reference.is_some() {
            return invalid("hyp and ref must be given together");
        }
        Ok(())
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    /// Canonical `key=value` rendering of the settings that affect outputs,
    /// with paths as written. Output location is excluded.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out = vec![("scheme".to_owned(), self.scheme.to_string())];
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k.to_owned(), v));
            }
        };
        let show = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        push("merges", self.merges.map(|m| m.to_string()));
        push("target_vocab", self.target_vocab.map(|m| m.to_string()));
        push("input", Some(self.input.display().to_string()));
        push("input_tgt", show(&self.input_tgt));
        push("script", self.script.clone());
        push("translit_map", show(&self.translit_map));
        push(
            "normalization",
            Some(match self.normalization {
                Normalization::Nfc => "nfc".to_owned(),
                Normalization::None => "none".to_owned(),
            }),
        );
        push("marker", Some(self.marker.to_string()));
        push("hyp", show(&self.hyp));
        push("ref", show(&self.reference));
        out
    }
}
