use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use sha2::{Digest, Sha256};

use super::config::{PipelineConfig, Scheme};
use crate::bpe::{joint_corpus, BpeLearner, BpeModel, JointOptions, LearnOptions};
use crate::codec::{CharSplitter, Codec, SegmentedText, Segmenter};
use crate::corpus::{Corpus, LoadOptions};
use crate::error::{Error, Result};
use crate::ortho::ScriptSpec;
use crate::translit::{transliterate_corpus, TransliterationTable};

pub const MANIFEST_FILE: &str = "manifest.txt";
const MODEL_FILE: &str = "model.bpe";
const SEGMENTED_FILE: &str = "segmented.txt";
const SEGMENTED_TGT_FILE: &str = "segmented.tgt.txt";
const VOCAB_FILE: &str = "vocab.tsv";

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    pub output_dir: PathBuf,
    /// Distinct subwords across all segmented output (marker excluded).
    pub vocab_size: usize,
    pub merges_learned: Option<usize>,
    pub stopped_early: bool,
    pub target_vocab: Option<usize>,
    pub manifest: String,
}

impl PipelineOutcome {
    pub fn manifest_sha256(&self) -> String {
        sha256_hex(self.manifest.as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

struct Learned {
    model: BpeModel,
    stopped_early: bool,
}

fn learn(union: &Corpus, config: &PipelineConfig) -> Result<Learned> {
    let mut learner = BpeLearner::from_corpus(union, LearnOptions::default())?;
    match (config.merges, config.target_vocab) {
        (Some(n), _) => {
            while learner.merges().len() < n && learner.step().is_some() {}
            let stopped_early = learner.merges().len() < n;
            Ok(Learned {
                model: learner.into_model(),
                stopped_early,
            })
        }
        (None, Some(target)) => {
            while learner.vocab_size() < target && learner.step().is_some() {}
            let stopped_early = learner.vocab_size() < target;
            Ok(Learned {
                model: learner.into_model(),
                stopped_early,
            })
        }
        (None, None) => Err(Error::InvalidConfig(
            "bpe schemes need merges or target_vocab".into(),
        )),
    }
}

fn segment_lines(
    codec: &Codec,
    corpus: &Corpus,
    segmenter: &dyn Segmenter,
) -> Result<Vec<SegmentedText>> {
    codec.segment_corpus(corpus, segmenter)
}

fn render(lines: &[SegmentedText]) -> String {
    let mut out = String::new();
    for line in lines {
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

/// Runs the pipeline into `config.output_dir`.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineOutcome> {
    let out = config
        .output_dir
        .as_ref()
        .map(|p| config.resolve(p))
        .ok_or_else(|| Error::InvalidConfig("no output directory".into()))?;
    run_pipeline_into(config, &out)
}

/// Runs the pipeline, writing artifacts to a private directory that is
/// renamed to `output_dir` once everything is written.
pub fn run_pipeline_into(config: &PipelineConfig, output_dir: &Path) -> Result<PipelineOutcome> {
    config.validate()?;
    let options = LoadOptions {
        normalization: config.normalization,
        marker: config.marker,
    };
    let codec = Codec::new(config.marker);
    let mut inputs: Vec<(&str, String)> = Vec::new();

    let input_path = config.resolve(&config.input);
    let input_bytes = read(&input_path)?;
    inputs.push(("input", sha256_hex(&input_bytes)));
    let src = Corpus::from_bytes(&input_bytes, options)?;

    let table = match &config.translit_map {
        Some(p) => {
            let path = config.resolve(p);
            inputs.push(("translit_map", sha256_hex(&read(&path)?)));
            Some(TransliterationTable::load(path)?)
        }
        None => None,
    };

    let tgt = match &config.input_tgt {
        Some(p) => {
            let path = config.resolve(p);
            let bytes = read(&path)?;
            inputs.push(("input_tgt", sha256_hex(&bytes)));
            Some(Corpus::from_bytes(&bytes, options)?)
        }
        None => None,
    };

    let mut results: Vec<(&str, String)> = Vec::new();
    let mut artifacts: BTreeMap<&str, Vec<u8>> = BTreeMap::new();
    let mut merges_learned = None;
    let mut stopped_early = false;

    let (src_lines, tgt_lines) = match config.scheme {
        Scheme::Bpe | Scheme::BpeJoint => {
            let (union, mapped_tgt) = if config.scheme == Scheme::BpeJoint {
                let tgt = tgt.as_ref().expect("validated: bpe_joint has input_tgt");
                let union = joint_corpus(
                    &src,
                    tgt,
                    table.as_ref(),
                    JointOptions::default().min_alphabet_overlap,
                )?;
                let mapped = match &table {
                    Some(t) => transliterate_corpus(tgt, t).0,
                    None => tgt.clone(),
                };
                (union, Some(mapped))
            } else {
                (src.clone(), None)
            };
            let learned = learn(&union, config)?;
            merges_learned = Some(learned.model.num_merges());
            stopped_early = learned.stopped_early;
            artifacts.insert(MODEL_FILE, learned.model.to_text().into_bytes());
            let src_lines = segment_lines(&codec, &src, &learned.model)?;
            let tgt_lines = match mapped_tgt {
                Some(t) => Some(segment_lines(&codec, &t, &learned.model)?),
                None => None,
            };
            (src_lines, tgt_lines)
        }
        Scheme::Os => {
            let script = config.script.as_deref().expect("validated: os has script");
            let spec = match ScriptSpec::builtin(script) {
                Ok(spec) => spec,
                Err(Error::UnknownScript(_)) => {
                    let path = config.resolve(Path::new(script));
                    if !path.is_file() {
                        return Err(Error::UnknownScript(script.to_owned()));
                    }
                    inputs.push(("script", sha256_hex(&read(&path)?)));
                    ScriptSpec::load(path)?
                }
                Err(e) => return Err(e),
            };
            (segment_lines(&codec, &src, &spec)?, None)
        }
        Scheme::Char => (segment_lines(&codec, &src, &CharSplitter)?, None),
        Scheme::Word => {
            // Word-level text carries no boundary markers.
            let lines = src
                .sentences()
                .iter()
                .map(|s| SegmentedText::new(s.tokens().to_vec()))
                .collect();
            (lines, None)
        }
    };

    let mut vocab: BTreeMap<&str, usize> = BTreeMap::new();
    let marker = config.marker.to_string();
    for line in src_lines.iter().chain(tgt_lines.iter().flatten()) {
        for unit in line.units() {
            if config.scheme == Scheme::Word || *unit != marker {
                *vocab.entry(unit.as_str()).or_insert(0) += 1;
            }
        }
    }
    let mut vocab_tsv = String::from("subword\tcount\n");
    for (unit, count) in &vocab {
        let _ = writeln!(vocab_tsv, "{unit}\t{count}");
    }
    artifacts.insert(SEGMENTED_FILE, render(&src_lines).into_bytes());
    if let Some(t) = &tgt_lines {
        artifacts.insert(SEGMENTED_TGT_FILE, render(t).into_bytes());
    }
    artifacts.insert(VOCAB_FILE, vocab_tsv.into_bytes());

    if let Some(m) = merges_learned {
        results.push(("merges", m.to_string()));
        results.push(("stopped_early", stopped_early.to_string()));
    }
    if let Some(t) = config.target_vocab {
        results.push(("target_vocab", t.to_string()));
    }
    results.push(("sentences", src.line_count().to_string()));
    results.push(("vocab_size", vocab.len().to_string()));

    let mut manifest = String::from("# subseg manifest v1\n");
    for (k, v) in config.echo() {
        let _ = writeln!(manifest, "config.{k}={v}");
    }
    for (k, v) in &results {
        let _ = writeln!(manifest, "result.{k}={v}");
    }
    for (k, v) in &inputs {
        let _ = writeln!(manifest, "input.{k}.sha256={v}");
    }
    for (name, bytes) in &artifacts {
        let _ = writeln!(manifest, "artifact.{name}.sha256={}", sha256_hex(bytes));
    }

    write_atomically(output_dir, &artifacts, &manifest)?;
    Ok(PipelineOutcome {
        output_dir: output_dir.to_path_buf(),
        vocab_size: vocab.len(),
        merges_learned,
        stopped_early,
        target_vocab: config.target_vocab,
        manifest,
    })
}

fn write_atomically(
    output_dir: &Path,
    artifacts: &BTreeMap<&str, Vec<u8>>,
    manifest: &str,
) -> Result<()> {
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let parent = output_dir
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    let name = output_dir
        .file_name()
        .ok_or_else(|| {
            Error::InvalidConfig(format!("bad output directory {}", output_dir.display()))
        })?
        .to_string_lossy();
    let staging = parent.join(format!(
        ".{name}.tmp-{}-{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir(&staging).map_err(|e| Error::io(&staging, e))?;

    let result = (|| {
        for (file, bytes) in artifacts {
            let path = staging.join(file);
            std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        }
        let path = staging.join(MANIFEST_FILE);
        std::fs::write(&path, manifest).map_err(|e| Error::io(&path, e))?;

        if output_dir.exists() {
            let is_previous_run = output_dir.join(MANIFEST_FILE).is_file();
            let is_empty = std::fs::read_dir(output_dir)
                .map_err(|e| Error::io(output_dir, e))?
                .next()
                .is_none();
            if !is_previous_run && !is_empty {
                return Err(Error::InvalidConfig(format!(
                    "{} exists and is not a previous pipeline output",
                    output_dir.display()
                )));
            }
            std::fs::remove_dir_all(output_dir).map_err(|e| Error::io(output_dir, e))?;
        }
        std::fs::rename(&staging, output_dir).map_err(|e| Error::io(output_dir, e))
    })();
    if result.is_err() {
        let _ = std::fs::remove_dir_all(&staging);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn char_scheme_on_toy_corpus() {
        let dir = tempfile::tempdir().unwrap();
        let input = write(dir.path(), "in.txt", "ab c\nd\nef gh ij\n");
        let config = PipelineConfig::new(Scheme::Char, input);
        let out = run_pipeline_into(&config, &dir.path().join("out")).unwrap();
        let seg = std::fs::read_to_string(dir.path().join("out/segmented.txt")).unwrap();
        assert_eq!(seg, "a b _ c\nd\ne f _ g h _ i j\n");
        assert_eq!(out.vocab_size, 10);
        assert!(out.manifest.contains("result.vocab_size=10\n"));
    }

    #[test]
    fn rerun_replaces_previous_output() {
        let dir = tempfile::tempdir().unwrap();
        let input = write(dir.path(), "in.txt", "low lower lowest\nlow low\n");
        let mut config = PipelineConfig::new(Scheme::Bpe, input);
        config.merges = Some(3);
        let out_dir = dir.path().join("out");
        let first = run_pipeline_into(&config, &out_dir).unwrap();
        let second = run_pipeline_into(&config, &out_dir).unwrap();
        assert_eq!(first.manifest, second.manifest);
        assert!(out_dir.join("model.bpe").is_file());
    }

    #[test]
    fn refuses_to_clobber_foreign_directory() {
        let dir = tempfile::tempdir().unwrap();
        let input = write(dir.path(), "in.txt", "a b\n");
        let out_dir = dir.path().join("out");
        std::fs::create_dir(&out_dir).unwrap();
        write(&out_dir, "precious.txt", "keep");
        let config = PipelineConfig::new(Scheme::Char, input);
        assert!(run_pipeline_into(&config, &out_dir).is_err());
        assert!(out_dir.join("precious.txt").is_file());
    }

    #[test]
    fn joint_without_map_across_scripts_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let src = write(dir.path(), "src.txt", "भारत नमस्ते भारत\n");
        let tgt = write(dir.path(), "tgt.txt", "ভারত নমস্কার ভারত\n");
        let mut config = PipelineConfig::new(Scheme::BpeJoint, src);
        config.input_tgt = Some(tgt);
        config.merges = Some(5);
        let err = run_pipeline_into(&config, &dir.path().join("out")).unwrap_err();
        assert!(matches!(err, Error::DisjointAlphabets { .. }));
        assert!(!dir.path().join("out").exists());
    }

    #[test]
    fn joint_with_map_writes_both_sides() {
        let dir = tempfile::tempdir().unwrap();
        let src = write(dir.path(), "src.txt", "भारत नमस्ते भारत\n");
        let tgt = write(dir.path(), "tgt.txt", "ভারত নমস্কার ভারত\n");
        let map = write(dir.path(), "bn-hi.map", "from = bengali\nto = devanagari\n");
        let mut config = PipelineConfig::new(Scheme::BpeJoint, src);
        config.input_tgt = Some(tgt);
        config.translit_map = Some(map);
        config.merges = Some(5);
        let out = run_pipeline_into(&config, &dir.path().join("out")).unwrap();
        let tgt_seg = std::fs::read_to_string(dir.path().join("out/segmented.tgt.txt")).unwrap();
        assert!(tgt_seg
            .chars()
            .all(|c| !(0x980..0xA00).contains(&(c as u32))));
        assert!(out.manifest.contains("input.translit_map.sha256="));
    }

    #[test]
    fn os_scheme_with_builtin_script() {
        let dir = tempfile::tempdir().unwrap();
        let input = write(dir.path(), "in.txt", "spacious rooms\n");
        let mut config = PipelineConfig::new(Scheme::Os, input);
        config.script = Some("latin".into());
        run_pipeline_into(&config, &dir.path().join("out")).unwrap();
        let seg = std::fs::read_to_string(dir.path().join("out/segmented.txt")).unwrap();
        assert_eq!(seg, "spa ciou s _ roo ms\n");
    }
}
