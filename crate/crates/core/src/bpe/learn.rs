use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};
use std::sync::Arc;

use super::{BpeModel, MergeRule};
use crate::corpus::{word_frequencies, Corpus};
use crate::error::{Error, Result};

type SymbolId = u32;
type Pair = (SymbolId, SymbolId);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LearnOptions {
    /// Learning stops once the most frequent pair occurs fewer times.
    pub min_pair_frequency: u64,
}

impl Default for LearnOptions {
    fn default() -> Self {
        LearnOptions {
            min_pair_frequency: 2,
        }
    }
}

/// Result of a learning run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Learned {
    pub model: BpeModel,
    pub requested: usize,
    /// Distinct subwords in the encoded training corpus after each merge;
    /// entry 0 is the alphabet size.
    pub vocab_trace: Vec<usize>,
}

impl Learned {
    /// True when pair frequencies ran out before `requested` merges.
    pub fn stopped_early(&self) -> bool {
        self.model.num_merges() < self.requested
    }

    pub fn final_vocab_size(&self) -> usize {
        *self
            .vocab_trace
            .last()
            .expect("trace always holds the initial size")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchOutcome {
    pub model: BpeModel,
    pub target_vocab: usize,
    pub achieved_vocab: usize,
    /// Target was below the alphabet size, so no merge count can reach it.
    pub below_alphabet: bool,
}

impl MatchOutcome {
    pub fn reached(&self) -> bool {
        self.achieved_vocab >= self.target_vocab
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Candidate {
    count: u64,
    left: Arc<str>,
    right: Arc<str>,
    pair: Pair,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap: higher count first, then the smaller (left, right).
        self.count
            .cmp(&other.count)
            .then_with(|| other.left.cmp(&self.left))
            .then_with(|| other.right.cmp(&self.right))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Incremental BPE learner over a word-type frequency table.
///
/// Pair counts are maintained incrementally: a merge only touches the words
/// that contain the merged pair, and those words have their pair
/// contributions removed and re-added. Stale heap entries are skipped lazily.
#[derive(Debug, Clone)]
pub struct BpeLearner {
    options: LearnOptions,
    alphabet: BTreeSet<char>,
    symbols: Vec<Arc<str>>,
    symbol_ids: HashMap<Arc<str>, SymbolId>,
    words: Vec<Vec<SymbolId>>,
    word_index: HashMap<String, usize>,
    freqs: Vec<u64>,
    pair_counts: HashMap<Pair, u64>,
    pair_words: HashMap<Pair, HashSet<usize>>,
    heap: BinaryHeap<Candidate>,
    symbol_occurrences: Vec<u64>,
    distinct: usize,
    merges: Vec<MergeRule>,
    exhausted: bool,
}

impl BpeLearner {
    pub fn from_corpus(corpus: &Corpus, options: LearnOptions) -> Result<Self> {
        Self::from_word_counts(word_frequencies(corpus), options)
    }

    /// Builds the learner from `(word, frequency)` pairs. Repeated words are
    /// summed; zero frequencies and empty words are ignored.
    pub fn from_word_counts<I, S>(counts: I, options: LearnOptions) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut learner = BpeLearner {
            options,
            alphabet: BTreeSet::new(),
            symbols: Vec::new(),
            symbol_ids: HashMap::new(),
            words: Vec::new(),
            word_index: HashMap::new(),
            freqs: Vec::new(),
            pair_counts: HashMap::new(),
            pair_words: HashMap::new(),
            heap: BinaryHeap::new(),
            symbol_occurrences: Vec::new(),
            distinct: 0,
            merges: Vec::new(),
            exhausted: false,
        };
        for (word, freq) in counts {
            let word = word.as_ref();
            if word.is_empty() || freq == 0 {
                continue;
            }
            if let Some(&idx) = learner.word_index.get(word) {
                learner.freqs[idx] += freq;
                continue;
            }
            let ids: Vec<SymbolId> = word
                .chars()
                .map(|c| {
                    learner.alphabet.insert(c);
                    learner.intern(&c.to_string())
                })
                .collect();
            learner
                .word_index
                .insert(word.to_owned(), learner.words.len());
            learner.words.push(ids);
            learner.freqs.push(freq);
        }
        if learner.words.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        for idx in 0..learner.words.len() {
            learner.add_word(idx, None);
        }
        let pairs: Vec<Pair> = learner.pair_counts.keys().copied().collect();
        for pair in pairs {
            learner.push_candidate(pair);
        }
        Ok(learner)
    }

    fn intern(&mut self, s: &str) -> SymbolId {
        if let Some(&id) = self.symbol_ids.get(s) {
            return id;
        }
        let id = self.symbols.len() as SymbolId;
        let sym: Arc<str> = Arc::from(s);
        self.symbols.push(sym.clone());
        self.symbol_ids.insert(sym, id);
        self.symbol_occurrences.push(0);
        id
    }

    fn push_candidate(&mut self, pair: Pair) {
        let count = self.pair_counts.get(&pair).copied().unwrap_or(0);
        if count > 0 {
            self.heap.push(Candidate {
                count,
                left: self.symbols[pair.0 as usize].clone(),
                right: self.symbols[pair.1 as usize].clone(),
                pair,
            });
        }
    }

    /// Adds a word's pair and symbol contributions.
    fn add_word(&mut self, idx: usize, mut changed: Option<&mut HashSet<Pair>>) {
        let freq = self.freqs[idx];
        let word = &self.words[idx];
        for &sym in word {
            let occ = &mut self.symbol_occurrences[sym as usize];
            if *occ == 0 {
                self.distinct += 1;
            }
            *occ += freq;
        }
        for w in word.windows(2) {
            let pair = (w[0], w[1]);
            *self.pair_counts.entry(pair).or_insert(0) += freq;
            self.pair_words.entry(pair).or_default().insert(idx);
            if let Some(changed) = changed.as_deref_mut() {
                changed.insert(pair);
            }
        }
    }

    fn remove_word(&mut self, idx: usize, changed: &mut HashSet<Pair>) {
        let freq = self.freqs[idx];
        let word = &self.words[idx];
        for &sym in word {
            let occ = &mut self.symbol_occurrences[sym as usize];
            *occ -= freq;
            if *occ == 0 {
                self.distinct -= 1;
            }
        }
        for w in word.windows(2) {
            let pair = (w[0], w[1]);
            let count = self
                .pair_counts
                .get_mut(&pair)
                .expect("pair of a counted word is present");
            *count -= freq;
            if *count == 0 {
                self.pair_counts.remove(&pair);
            }
            changed.insert(pair);
        }
    }

    /// Most frequent pair with its count, skipping stale heap entries.
    fn best(&mut self) -> Option<Candidate> {
        while let Some(top) = self.heap.peek() {
            if self.pair_counts.get(&top.pair).copied() == Some(top.count) {
                return Some(top.clone());
            }
            self.heap.pop();
        }
        None
    }

    /// Performs one merge and returns the recorded rule, or `None` once no
    /// pair reaches the minimum frequency.
    pub fn step(&mut self) -> Option<&MergeRule> {
        if self.exhausted {
            return None;
        }
        let best = match self.best() {
            Some(c) if c.count >= self.options.min_pair_frequency => c,
            _ => {
                self.exhausted = true;
                return None;
            }
        };
        self.heap.pop();
        let (left, right) = best.pair;
        let merged = {
            let mut s = String::with_capacity(best.left.len() + best.right.len());
            s.push_str(&best.left);
            s.push_str(&best.right);
            s
        };
        let new_id = self.intern(&merged);

        let mut affected: Vec<usize> = self
            .pair_words
            .remove(&best.pair)
            .map(|s| s.into_iter().collect())
            .unwrap_or_default();
        affected.sort_unstable();

        let mut changed = HashSet::new();
        for idx in affected {
            let contains = self.words[idx]
                .windows(2)
                .any(|w| w[0] == left && w[1] == right);
            if !contains {
                continue;
            }
            self.remove_word(idx, &mut changed);
            let old = std::mem::take(&mut self.words[idx]);
            let mut merged_word = Vec::with_capacity(old.len());
            let mut i = 0;
            while i < old.len() {
                if i + 1 < old.len() && old[i] == left && old[i + 1] == right {
                    merged_word.push(new_id);
                    i += 2;
                } else {
                    merged_word.push(old[i]);
                    i += 1;
                }
            }
            self.words[idx] = merged_word;
            self.add_word(idx, Some(&mut changed));
        }
        let mut changed: Vec<Pair> = changed.into_iter().collect();
        changed.sort_unstable();
        for pair in changed {
            self.push_candidate(pair);
        }

        let rank = self.merges.len();
        self.merges.push(MergeRule {
            left: best.left.to_string(),
            right: best.right.to_string(),
            rank,
        });
        self.merges.last()
    }

    /// Number of distinct subwords in the current encoding of the corpus.
    pub fn vocab_size(&self) -> usize {
        self.distinct
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn merges(&self) -> &[MergeRule] {
        &self.merges
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Current segmentation of a training word.
    pub fn segmentation(&self, word: &str) -> Option<Vec<String>> {
        let idx = *self.word_index.get(word)?;
        Some(
            self.words[idx]
                .iter()
                .map(|&id| self.symbols[id as usize].to_string())
                .collect(),
        )
    }

    /// Training words with their frequencies, in first-seen order.
    pub fn word_types(&self) -> impl Iterator<Item = (&str, u64)> {
        let mut entries: Vec<(&str, usize)> = self
            .word_index
            .iter()
            .map(|(w, &i)| (w.as_str(), i))
            .collect();
        entries.sort_unstable_by_key(|&(_, i)| i);
        entries.into_iter().map(|(w, i)| (w, self.freqs[i]))
    }

    pub fn model(&self) -> BpeModel {
        BpeModel::from_parts_unchecked(self.alphabet.clone(), self.merges.clone())
    }

    pub fn into_model(self) -> BpeModel {
        BpeModel::from_parts_unchecked(self.alphabet, self.merges)
    }
}

/// Learns up to `num_merges` merges with the default options.
pub fn learn_bpe(corpus: &Corpus, num_merges: usize) -> Result<Learned> {
    learn_bpe_with(corpus, num_merges, LearnOptions::default())
}

pub fn learn_bpe_with(
    corpus: &Corpus,
    num_merges: usize,
    options: LearnOptions,
) -> Result<Learned> {
    let learner = BpeLearner::from_corpus(corpus, options)?;
    Ok(run(learner, num_merges))
}

pub(crate) fn run(mut learner: BpeLearner, num_merges: usize) -> Learned {
    let mut vocab_trace = vec![learner.vocab_size()];
    while learner.merges().len() < num_merges && learner.step().is_some() {
        vocab_trace.push(learner.vocab_size());
    }
    if learner.is_exhausted() {
        log::info!(
            "BPE learning stopped after {} of {} merges: no pair occurs often enough",
            learner.merges().len(),
            num_merges
        );
    }
    Learned {
        model: learner.into_model(),
        requested: num_merges,
        vocab_trace,
    }
}

/// Learns merges until the encoded corpus first has at least
/// `target_vocab` distinct subwords, or until pairs run out.
pub fn match_merges(corpus: &Corpus, target_vocab: usize) -> Result<MatchOutcome> {
    let mut learner = BpeLearner::from_corpus(corpus, LearnOptions::default())?;
    let alphabet_size = learner.vocab_size();
    let below_alphabet = target_vocab < alphabet_size;
    if below_alphabet {
        log::warn!(
            "target vocabulary {target_vocab} is below the alphabet size {alphabet_size}; \
             returning the merge-free model"
        );
    }
    while learner.vocab_size() < target_vocab && learner.step().is_some() {}
    let achieved_vocab = learner.vocab_size();
    if achieved_vocab < target_vocab {
        log::warn!(
            "pair frequencies exhausted at vocabulary {achieved_vocab} (target {target_vocab})"
        );
    }
    Ok(MatchOutcome {
        model: learner.into_model(),
        target_vocab,
        achieved_vocab,
        below_alphabet,
    })
}
