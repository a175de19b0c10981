//! Reference implementations used to check the production code, written for
//! clarity rather than speed.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use subseg::corpus::{Corpus, Sentence, DEFAULT_MARKER};

/// Brute-force BPE learning: every step recounts all adjacent pairs over the
/// whole word table and merges the most frequent one, ties broken by the
/// smallest `(left, right)`.
pub struct OracleRun {
    pub merges: Vec<(String, String)>,
    /// Distinct symbols in use before the first merge and after each merge.
    pub vocab_trace: Vec<usize>,
    pub segmentation: BTreeMap<String, Vec<String>>,
}

pub fn oracle_learn(corpus: &Corpus, num_merges: usize, min_freq: u64) -> OracleRun {
    let mut words: BTreeMap<String, (u64, Vec<String>)> = BTreeMap::new();
    for w in corpus.words() {
        words
            .entry(w.to_owned())
            .or_insert_with(|| (0, w.chars().map(String::from).collect()))
            .0 += 1;
    }
    let distinct = |words: &BTreeMap<String, (u64, Vec<String>)>| {
        words
            .values()
            .flat_map(|(_, s)| s.iter().cloned())
            .collect::<BTreeSet<_>>()
            .len()
    };
    let mut merges = Vec::new();
    let mut vocab_trace = vec![distinct(&words)];
    while merges.len() < num_merges {
        let mut counts: BTreeMap<(String, String), u64> = BTreeMap::new();
        for (count, symbols) in words.values() {
            for pair in symbols.windows(2) {
                *counts
                    .entry((pair[0].clone(), pair[1].clone()))
                    .or_insert(0) += count;
            }
        }
        // BTreeMap iterates in ascending key order, so the first maximum wins ties.
        let mut best: Option<(&(String, String), u64)> = None;
        for (pair, &c) in &counts {
            if best.is_none_or(|(_, b)| c > b) {
                best = Some((pair, c));
            }
        }
        let Some((pair, count)) = best else { break };
        if count < min_freq {
            break;
        }
        let pair = pair.clone();
        for (_, symbols) in words.values_mut() {
            *symbols = merge_once(symbols, &pair);
        }
        merges.push(pair);
        vocab_trace.push(distinct(&words));
    }
    OracleRun {
        merges,
        vocab_trace,
        segmentation: words.into_iter().map(|(w, (_, s))| (w, s)).collect(),
    }
}

fn merge_once(symbols: &[String], (left, right): &(String, String)) -> Vec<String> {
    let mut out = Vec::with_capacity(symbols.len());
    let mut i = 0;
    while i < symbols.len() {
        if i + 1 < symbols.len() && symbols[i] == *left && symbols[i + 1] == *right {
            out.push(format!("{left}{right}"));
            i += 2;
        } else {
            out.push(symbols[i].clone());
            i += 1;
        }
    }
    out
}

/// Applies merges one rule at a time, in order.
pub fn oracle_apply(merges: &[(String, String)], word: &str) -> Vec<String> {
    let mut symbols: Vec<String> = word.chars().map(String::from).collect();
    for m in merges {
        symbols = merge_once(&symbols, m);
    }
    symbols
}

/// LCS length by enumerating every subsequence of the shorter string.
pub fn oracle_lcs(a: &str, b: &str) -> usize {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    assert!(short.len() <= 20, "enumeration is exponential");
    let is_subsequence = |sub: &[char]| {
        let mut it = long.iter();
        sub.iter().all(|c| it.any(|d| d == c))
    };
    let mut best = 0;
    for mask in 0u32..(1 << short.len()) {
        let n = mask.count_ones() as usize;
        if n <= best {
            continue;
        }
        let sub: Vec<char> = (0..short.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| short[i])
            .collect();
        if is_subsequence(&sub) {
            best = n;
        }
    }
    best
}

/// Corpus BLEU computed directly from n-gram multisets, no smoothing.
pub fn oracle_bleu(hyps: &[Vec<String>], refs: &[Vec<String>], max_n: usize) -> f64 {
    let mut matched = vec![0u64; max_n];
    let mut total = vec![0u64; max_n];
    let (mut c, mut r) = (0usize, 0usize);
    for (h, rf) in hyps.iter().zip(refs) {
        c += h.len();
        r += rf.len();
        for n in 1..=max_n {
            let grams = |s: &[String]| {
                let mut m: HashMap<Vec<String>, u64> = HashMap::new();
                for g in s.windows(n) {
                    *m.entry(g.to_vec()).or_insert(0) += 1;
                }
                m
            };
            let (hg, rg) = (grams(h), grams(rf));
            total[n - 1] += hg.values().sum::<u64>();
            matched[n - 1] += hg
                .iter()
                .map(|(g, &k)| k.min(rg.get(g).copied().unwrap_or(0)))
                .sum::<u64>();
        }
    }
    if c == 0 || matched.contains(&0) {
        return 0.0;
    }
    let log_p: f64 = (0..max_n)
        .map(|i| (matched[i] as f64 / total[i] as f64).ln())
        .sum::<f64>()
        / max_n as f64;
    let bp = if c > r {
        1.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    };
    bp * log_p.exp()
}

pub fn random_word(rng: &mut impl Rng, alphabet: &[char], max_len: usize) -> String {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

/// A corpus over at most `max_types` distinct words drawn from `alphabet`,
/// with skewed frequencies.
pub fn random_corpus(
    rng: &mut impl Rng,
    alphabet: &[char],
    max_types: usize,
    max_word_len: usize,
    num_sentences: usize,
) -> Corpus {
    let types: Vec<String> = (0..rng.gen_range(1..=max_types))
        .map(|_| random_word(rng, alphabet, max_word_len))
        .collect();
    let weights: Vec<f64> = (0..types.len()).map(|i| 1.0 / (i + 1) as f64).collect();
    let dist = rand::distributions::WeightedIndex::new(&weights).unwrap();
    (0..num_sentences)
        .map(|_| {
            let n = rng.gen_range(1..=8);
            let words = (0..n).map(|_| types[rng.sample(&dist)].clone());
            Sentence::from_tokens(words, DEFAULT_MARKER).unwrap()
        })
        .collect()
}

pub fn words(line: &str) -> Vec<String> {
    line.split_whitespace().map(str::to_owned).collect()
}

pub fn corpus(text: &str) -> Corpus {
    Corpus::parse(text, Default::default()).unwrap()
}
