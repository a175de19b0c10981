//! Corpus-level BLEU, a soft-matching variant, and paired bootstrap
//! significance tests.
//!
//! Scores are computed from per-sentence sufficient statistics (matched and
//! total n-grams, hypothesis and reference lengths) that are summed over the
//! corpus, so a bootstrap resample only re-sums precomputed statistics.
//!
//! No smoothing is applied: a corpus with any zero n-gram precision scores 0.

mod bootstrap;
mod soft;

use std::collections::HashMap;

use crate::corpus::{Corpus, Sentence};
use crate::error::{Error, Result};

pub use bootstrap::{
    bootstrap_test, bootstrap_test_with, BootstrapOptions, SignificanceResult, MIN_SAMPLES,
};
pub use soft::{levenshtein, ngram_similarity};

pub const DEFAULT_MAX_N: usize = 4;
pub const DEFAULT_SOFT_THRESHOLD: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Bleu,
    /// n-gram matches earn fractional credit equal to their normalized edit
    /// similarity when it reaches `threshold`.
    SoftBleu {
        threshold: f64,
    },
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Bleu => "bleu",
            Metric::SoftBleu { .. } => "soft_bleu",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub score: f64,
    pub ngram_precisions: Vec<f64>,
    pub brevity_penalty: f64,
    pub hyp_length: usize,
    pub ref_length: usize,
}

impl EvalReport {
    /// One-line summary in the customary BLEU layout (values scaled by 100).
    pub fn summary(&self, label: &str) -> String {
        let precisions: Vec<String> = self
            .ngram_precisions
            .iter()
            .map(|p| format!("{:.1}", 100.0 * p))
            .collect();
        let ratio = if self.ref_length == 0 {
            0.0
        } else {
            self.hyp_length as f64 / self.ref_length as f64
        };
        format!(
            "{label} = {:.2}, {} (BP={:.3}, ratio={:.3}, hyp_len={}, ref_len={})",
            100.0 * self.score,
            precisions.join("/"),
            self.brevity_penalty,
            ratio,
            self.hyp_length,
            self.ref_length
        )
    }

    /// Tab-separated: score, precisions..., bp, hyp_len, ref_len.
    pub fn tsv(&self) -> String {
        let mut fields = vec![format!("{:.6}", self.score)];
        fields.extend(self.ngram_precisions.iter().map(|p| format!("{p:.6}")));
        fields.push(format!("{:.6}", self.brevity_penalty));
        fields.push(self.hyp_length.to_string());
        fields.push(self.ref_length.to_string());
        fields.join("\t")
    }
}

/// Per-sentence sufficient statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceStats {
    pub matches: Vec<f64>,
    pub totals: Vec<u64>,
    pub hyp_length: usize,
    pub ref_length: usize,
}

impl SentenceStats {
    fn zero(max_n: usize) -> Self {
        SentenceStats {
            matches: vec![0.0; max_n],
            totals: vec![0; max_n],
            hyp_length: 0,
            ref_length: 0,
        }
    }

    fn add(&mut self, other: &SentenceStats) {
        for (m, o) in self.matches.iter_mut().zip(&other.matches) {
            *m += o;
        }
        for (t, o) in self.totals.iter_mut().zip(&other.totals) {
            *t += o;
        }
        self.hyp_length += other.hyp_length;
        self.ref_length += other.ref_length;
    }

    pub fn report(&self) -> EvalReport {
        let ngram_precisions: Vec<f64> = self
            .matches
            .iter()
            .zip(&self.totals)
            .map(|(&m, &t)| if t == 0 { 0.0 } else { m / t as f64 })
            .collect();
        let brevity_penalty = if self.hyp_length == 0 {
            0.0
        } else if self.hyp_length < self.ref_length {
            (1.0 - self.ref_length as f64 / self.hyp_length as f64).exp()
        } else {
            1.0
        };
        let geometric_mean = if ngram_precisions.iter().all(|&p| p > 0.0) {
            let log_sum: f64 = ngram_precisions.iter().map(|p| p.ln()).sum();
            (log_sum / ngram_precisions.len() as f64).exp()
        } else {
            0.0
        };
        EvalReport {
            score: brevity_penalty * geometric_mean,
            ngram_precisions,
            brevity_penalty,
            hyp_length: self.hyp_length,
            ref_length: self.ref_length,
        }
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// Statistics for one hypothesis/reference pair.
pub fn sentence_stats(
    hyp: &Sentence,
    reference: &Sentence,
    max_n: usize,
    metric: Metric,
) -> SentenceStats {
    let (h, r) = (hyp.tokens(), reference.tokens());
    let mut stats = SentenceStats::zero(max_n);
    stats.hyp_length = h.len();
    stats.ref_length = r.len();
    for n in 1..=max_n {
        stats.totals[n - 1] = h.len().saturating_sub(n - 1) as u64;
        stats.matches[n - 1] = match metric {
            Metric::Bleu => {
                let ref_counts = ngram_counts(r, n);
                ngram_counts(h, n)
                    .into_iter()
                    .map(|(gram, count)| count.min(ref_counts.get(gram).copied().unwrap_or(0)))
                    .sum::<usize>() as f64
            }
            Metric::SoftBleu { threshold } => soft::soft_matches(h, r, n, threshold),
        };
    }
    stats
}

fn check_inputs(hyps: &Corpus, refs: &Corpus, max_n: usize) -> Result<()> {
    if hyps.line_count() != refs.line_count() {
        return Err(Error::Misaligned {
            left: "hypotheses",
            left_len: hyps.line_count(),
            right: "references",
            right_len: refs.line_count(),
        });
    }
    if hyps.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if max_n == 0 {
        return Err(Error::InvalidConfig(
            "max n-gram order must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Per-sentence statistics for a whole corpus.
pub fn corpus_stats(
    hyps: &Corpus,
    refs: &Corpus,
    max_n: usize,
    metric: Metric,
) -> Result<Vec<SentenceStats>> {
    check_inputs(hyps, refs, max_n)?;
    if let Metric::SoftBleu { threshold } = metric {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::InvalidConfig(format!(
                "soft match threshold {threshold} is outside [0, 1]"
            )));
        }
    }
    Ok(hyps
        .sentences()
        .iter()
        .zip(refs.sentences())
        .map(|(h, r)| sentence_stats(h, r, max_n, metric))
        .collect())
}

/// Sums statistics for the given sentence indices.
pub fn aggregate<'a>(
    stats: impl IntoIterator<Item = &'a SentenceStats>,
    max_n: usize,
) -> SentenceStats {
    let mut total = SentenceStats::zero(max_n);
    for s in stats {
        total.add(s);
    }
    total
}

pub fn evaluate(hyps: &Corpus, refs: &Corpus, max_n: usize, metric: Metric) -> Result<EvalReport> {
    let stats = corpus_stats(hyps, refs, max_n, metric)?;
    Ok(aggregate(&stats, max_n).report())
}

/// Corpus BLEU with clipped n-gram precision and a single reference.
pub fn bleu(hyps: &Corpus, refs: &Corpus, max_n: usize) -> Result<EvalReport> {
    evaluate(hyps, refs, max_n, Metric::Bleu)
}

pub fn soft_bleu(hyps: &Corpus, refs: &Corpus, max_n: usize, threshold: f64) -> Result<EvalReport> {
    evaluate(hyps, refs, max_n, Metric::SoftBleu { threshold })
}
