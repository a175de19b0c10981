use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::PipelineConfig;
use super::run::run_pipeline_into;
use crate::corpus::{Corpus, LoadOptions};
use crate::error::{Error, Result};
use crate::eval::{bleu, soft_bleu, DEFAULT_MAX_N, DEFAULT_SOFT_THRESHOLD};

pub const TSV_HEADER: &str = "name\tscheme\tmerges\tvocab_size\tbleu\tsoft_bleu\tstatus";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub name: String,
    pub scheme: Option<String>,
    pub merges: Option<usize>,
    pub vocab_size: Option<usize>,
    pub bleu: Option<f64>,
    pub soft_bleu: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    fn failed(name: String, scheme: Option<String>, error: &Error) -> Self {
        SweepRow {
            name,
            scheme,
            merges: None,
            vocab_size: None,
            bleu: None,
            soft_bleu: None,
            error: Some(error.to_string()),
        }
    }

    fn tsv(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".to_owned());
        let status = match &self.error {
            None => "ok".to_owned(),
            Some(e) => format!("failed: {}", e.replace(['\t', '\n', '\r'], " ")),
        };
        [
            self.name.clone(),
            opt(self.scheme.clone()),
            opt(self.merges.map(|m| m.to_string())),
            opt(self.vocab_size.map(|v| v.to_string())),
            opt(self.bleu.map(|b| format!("{b:.6}"))),
            opt(self.soft_bleu.map(|b| format!("{b:.6}"))),
            status,
        ]
        .join("\t")
    }
}

fn run_row(name: &str, config: &PipelineConfig, out_dir: &Path) -> Result<SweepRow> {
    let outcome = run_pipeline_into(config, &out_dir.join(name))?;
    let (mut bleu_score, mut soft_score) = (None, None);
    if let (Some(h), Some(r)) = (&config.hyp, &config.reference) {
        let options = LoadOptions {
            normalization: config.normalization,
            marker: config.marker,
        };
        let hyps = Corpus::load(config.resolve(h), options)?;
        let refs = Corpus::load(config.resolve(r), options)?;
        bleu_score = Some(bleu(&hyps, &refs, DEFAULT_MAX_N)?.score);
        soft_score = Some(soft_bleu(&hyps, &refs, DEFAULT_MAX_N, DEFAULT_SOFT_THRESHOLD)?.score);
    }
    Ok(SweepRow {
        name: name.to_owned(),
        scheme: Some(config.scheme.to_string()),
        merges: outcome.merges_learned,
        vocab_size: Some(outcome.vocab_size),
        bleu: bleu_score,
        soft_bleu: soft_score,
        error: None,
    })
}

/// Runs every named config, each into `out_dir/<name>`. Failures are
/// reported per row; the remaining rows still run. Rows keep grid order.
pub fn sweep(grid: &[(String, Result<PipelineConfig>)], out_dir: &Path) -> Vec<SweepRow> {
    grid.par_iter()
        .map(|(name, config)| match config {
            Ok(config) => run_row(name, config, out_dir).unwrap_or_else(|e| {
                SweepRow::failed(name.clone(), Some(config.scheme.to_string()), &e)
            }),
            Err(e) => SweepRow::failed(name.clone(), None, e),
        })
        .collect()
}

/// Loads every `*.conf` file in `dir`, sorted by file name. A file that fails
/// to parse is kept as an error entry.
pub fn load_grid(dir: &Path) -> Result<Vec<(String, Result<PipelineConfig>)>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "conf"))
        .collect();
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            (name, PipelineConfig::load(&p))
        })
        .collect())
}

pub fn sweep_dir(config_dir: &Path, out_dir: &Path) -> Result<Vec<SweepRow>> {
    let grid = load_grid(config_dir)?;
    if grid.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "no *.conf files in {}",
            config_dir.display()
        )));
    }
    Ok(sweep(&grid, out_dir))
}

pub fn rows_to_tsv(rows: &[SweepRow]) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.tsv());
        out.push('\n');
    }
    out
}
