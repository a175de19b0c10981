//! Character-level lexical similarity (LCSR) and its correlation with
//! translation accuracy.
//!
//! Sentences are compared as their tokens joined by single spaces, so word
//! boundaries count as characters. Corpus similarity is the unweighted mean
//! of sentence LCSRs over pairs where at least one side is non-empty.

use rayon::prelude::*;

use crate::corpus::{Corpus, ParallelCorpus};
use crate::error::{Error, Result};
use crate::translit::TransliterationTable;

/// Sentences longer than this many characters are truncated before the
/// quadratic LCS computation.
pub const MAX_LCS_CHARS: usize = 10_000;

/// Length of the longest common subsequence of two character sequences.
pub fn lcs_length(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    lcs_chars(&a, &b)
}

fn lcs_chars(a: &[char], b: &[char]) -> usize {
    // Keep the row over the shorter sequence.
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; short.len() + 1];
    let mut curr = vec![0usize; short.len() + 1];
    for &x in long {
        for (j, &y) in short.iter().enumerate() {
            curr[j + 1] = if x == y {
                prev[j] + 1
            } else {
                curr[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[short.len()]
}

/// LCS length over the length of the longer string.
pub fn lcsr(a: &str, b: &str) -> Result<f64> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    lcsr_chars(&a, &b)
}

fn lcsr_chars(a: &[char], b: &[char]) -> Result<f64> {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return Err(Error::EmptyPair);
    }
    Ok(lcs_chars(a, b) as f64 / longest as f64)
}

fn truncated_chars(text: &str) -> (Vec<char>, bool) {
    let mut chars: Vec<char> = text.chars().collect();
    let cut = chars.len() > MAX_LCS_CHARS;
    chars.truncate(MAX_LCS_CHARS);
    (chars, cut)
}

/// Sentence LCSR, `None` when both sides are empty. The flag reports
/// truncation of either side.
fn sentence_lcsr(a: &str, b: &str) -> (Option<f64>, bool) {
    let (a, cut_a) = truncated_chars(a);
    let (b, cut_b) = truncated_chars(b);
    (lcsr_chars(&a, &b).ok(), cut_a || cut_b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityReport {
    /// One entry per sentence pair; `None` where both sides are empty.
    pub per_sentence: Vec<Option<f64>>,
    /// Unweighted mean of the defined sentence values.
    pub corpus_mean: Option<f64>,
    /// Sentence pairs cut to `MAX_LCS_CHARS`.
    pub truncated: usize,
    /// Target characters left untransliterated.
    pub unmappable: usize,
}

impl SimilarityReport {
    pub fn defined(&self) -> impl Iterator<Item = f64> + '_ {
        self.per_sentence.iter().flatten().copied()
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Sentence-wise LCSR between the two sides. With a mapping, the target side
/// is first transliterated into the source script.
pub fn corpus_lcsr(
    pc: &ParallelCorpus,
    mapping: Option<&TransliterationTable>,
) -> SimilarityReport {
    let (targets, unmappable): (Vec<String>, usize) = match mapping {
        Some(table) => {
            let mut total = 0;
            let texts = pc
                .target()
                .sentences()
                .iter()
                .map(|s| {
                    let (out, n) = table.transliterate_counted(&s.text());
                    total += n;
                    out
                })
                .collect();
            (texts, total)
        }
        None => (
            pc.target().sentences().iter().map(|s| s.text()).collect(),
            0,
        ),
    };
    let results: Vec<(Option<f64>, bool)> = pc
        .source()
        .sentences()
        .par_iter()
        .zip(targets.par_iter())
        .map(|(src, tgt)| sentence_lcsr(&src.text(), tgt))
        .collect();
    let truncated = results.iter().filter(|(_, cut)| *cut).count();
    if truncated > 0 {
        log::warn!("{truncated} sentence pair(s) truncated to {MAX_LCS_CHARS} characters");
    }
    let per_sentence: Vec<Option<f64>> = results.into_iter().map(|(v, _)| v).collect();
    let corpus_mean = mean(per_sentence.iter().flatten().copied());
    SimilarityReport {
        per_sentence,
        corpus_mean,
        truncated,
        unmappable,
    }
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Stats(format!(
            "series lengths differ ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::Stats("need at least two observations".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Stats("zero variance in a series".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Paired similarity and accuracy series behind a correlation.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlation {
    /// LCSR(source, reference) per kept sentence.
    pub similarity: Vec<f64>,
    /// LCSR(hypothesis, reference) per kept sentence.
    pub accuracy: Vec<f64>,
    /// Sentence indices where an LCSR was undefined.
    pub skipped: Vec<usize>,
    pub r: f64,
}

/// Correlates sentence similarity (source vs. reference) with sentence
/// accuracy (hypothesis vs. reference, also LCSR). Sentences where either
/// value is undefined are skipped.
pub fn correlate_similarity_accuracy(test: &ParallelCorpus, hyps: &Corpus) -> Result<Correlation> {
    if hyps.line_count() != test.len() {
        return Err(Error::Misaligned {
            left: "references",
            left_len: test.len(),
            right: "hypotheses",
            right_len: hyps.line_count(),
        });
    }
    let rows: Vec<(Option<f64>, Option<f64>)> = test
        .pairs()
        .zip(hyps.sentences())
        .collect::<Vec<_>>()
        .par_iter()
        .map(|((src, reference), hyp)| {
            let reference = reference.text();
            (
                sentence_lcsr(&src.text(), &reference).0,
                sentence_lcsr(&hyp.text(), &reference).0,
            )
        })
        .collect();
    let mut similarity = Vec::new();
    let mut accuracy = Vec::new();
    let mut skipped = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        match row {
            (Some(x), Some(y)) => {
                similarity.push(x);
                accuracy.push(y);
            }
            _ => skipped.push(i),
        }
    }
    let r = pearson(&similarity, &accuracy)?;
    Ok(Correlation {
        similarity,
        accuracy,
        skipped,
        r,
    })
}
