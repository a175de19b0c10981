//! Paired bootstrap resampling.
//!
//! Each resample draws sentence indices with replacement and scores both
//! systems on the same draw. The p-value is the fraction of resamples whose
//! score difference does not share the sign of the full-corpus difference
//! (ties count against), a one-sided paired test.
//!
//! Resample `i` uses a ChaCha stream selected by `i` under the master seed,
//! so the result does not depend on how resamples are scheduled.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{aggregate, corpus_stats, Metric, DEFAULT_MAX_N};
use crate::corpus::Corpus;
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapOptions {
    pub num_samples: usize,
    pub seed: u64,
    pub max_n: usize,
}

impl BootstrapOptions {
    pub fn new(seed: u64) -> Self {
        BootstrapOptions {
            num_samples: 1000,
            seed,
            max_n: DEFAULT_MAX_N,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceResult {
    pub p_value: f64,
    pub num_samples: usize,
    /// Mean of `metric(a) - metric(b)` over resamples.
    pub delta_mean: f64,
    /// `metric(a) - metric(b)` on the full corpus.
    pub observed_delta: f64,
    pub score_a: f64,
    pub score_b: f64,
}

pub fn bootstrap_test(
    hyps_a: &Corpus,
    hyps_b: &Corpus,
    refs: &Corpus,
    metric: Metric,
    num_samples: usize,
    seed: u64,
) -> Result<SignificanceResult> {
    bootstrap_test_with(
        hyps_a,
        hyps_b,
        refs,
        metric,
        BootstrapOptions {
            num_samples,
            ..BootstrapOptions::new(seed)
        },
    )
}

pub fn bootstrap_test_with(
    hyps_a: &Corpus,
    hyps_b: &Corpus,
    refs: &Corpus,
    metric: Metric,
    options: BootstrapOptions,
) -> Result<SignificanceResult> {
    if options.num_samples < MIN_SAMPLES {
        return Err(Error::InvalidConfig(format!(
            "bootstrap needs at least {MIN_SAMPLES} samples, got {}",
            options.num_samples
        )));
    }
    if hyps_a.line_count() != hyps_b.line_count() {
        return Err(Error::Misaligned {
            left: "system A",
            left_len: hyps_a.line_count(),
            right: "system B",
            right_len: hyps_b.line_count(),
        });
    }
    let max_n = options.max_n;
    let stats_a = corpus_stats(hyps_a, refs, max_n, metric)?;
    let stats_b = corpus_stats(hyps_b, refs, max_n, metric)?;
    let score_a = aggregate(&stats_a, max_n).report().score;
    let score_b = aggregate(&stats_b, max_n).report().score;
    let observed_delta = score_a - score_b;
    let n = stats_a.len();

    let deltas: Vec<f64> = (0..options.num_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            rng.set_stream(i as u64);
            let draw: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            let a = aggregate(draw.iter().map(|&j| &stats_a[j]), max_n)
                .report()
                .score;
            let b = aggregate(draw.iter().map(|&j| &stats_b[j]), max_n)
                .report()
                .score;
            a - b
        })
        .collect();

    let delta_mean = deltas.iter().sum::<f64>() / deltas.len() as f64;
    let p_value = if observed_delta == 0.0 {
        1.0
    } else {
        let sign = observed_delta.signum();
        let against = deltas.iter().filter(|&&d| d * sign <= 0.0).count();
        against as f64 / deltas.len() as f64
    };
    Ok(SignificanceResult {
        p_value,
        num_samples: options.num_samples,
        delta_mean,
        observed_delta,
        score_a,
        score_b,
    })
}
