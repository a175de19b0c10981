//! Byte Pair Encoding over Unicode characters.
//!
//! A model is an alphabet plus an ordered list of merge rules. Learning
//! starts from the characters of every word type and repeatedly merges the
//! most frequent adjacent symbol pair, counted over word types weighted by
//! frequency. Pairs never span word boundaries and no end-of-word sentinel is
//! used: word boundaries are carried by the codec's marker tokens instead.
//!
//! Ties between equally frequent pairs go to the lexicographically smallest
//! `(left, right)` in Unicode scalar order.

mod io;
mod joint;
mod learn;

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};

pub use io::{load_model, save_model, FORMAT_VERSION};
pub use joint::{joint_corpus, learn_joint, learn_joint_with, JointOptions};
pub use learn::{
    learn_bpe, learn_bpe_with, match_merges, BpeLearner, LearnOptions, Learned, MatchOutcome,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MergeRule {
    pub left: String,
    pub right: String,
    /// Position in the learned sequence, 0 for the first merge.
    pub rank: usize,
}

impl MergeRule {
    /// The subword this rule produces.
    pub fn merged(&self) -> String {
        let mut s = String::with_capacity(self.left.len() + self.right.len());
        s.push_str(&self.left);
        s.push_str(&self.right);
        s
    }
}

#[derive(Debug, Clone)]
pub struct BpeModel {
    alphabet: BTreeSet<char>,
    merges: Vec<MergeRule>,
    ranks: HashMap<(String, String), usize>,
}

impl PartialEq for BpeModel {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.merges == other.merges
    }
}

impl Eq for BpeModel {}

impl BpeModel {
    /// Builds a model from an alphabet and merges listed in rank order.
    ///
    /// Every merge side must be non-empty and composable from the alphabet
    /// and the products of earlier merges; a pair may appear only once.
    pub fn new<I, L, R>(alphabet: BTreeSet<char>, merges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (L, R)>,
        L: Into<String>,
        R: Into<String>,
    {
        let mut known: HashSet<String> = alphabet.iter().map(|c| c.to_string()).collect();
        let mut rules = Vec::new();
        let mut ranks = HashMap::new();
        for (rank, (left, right)) in merges.into_iter().enumerate() {
            let (left, right) = (left.into(), right.into());
            if left.is_empty() || right.is_empty() {
                return Err(Error::ModelFormat(format!(
                    "merge {rank} has an empty side"
                )));
            }
            for side in [&left, &right] {
                if !known.contains(side.as_str()) {
                    return Err(Error::ModelFormat(format!(
                        "merge {rank}: {side:?} is not built from the alphabet and earlier merges"
                    )));
                }
            }
            if ranks.insert((left.clone(), right.clone()), rank).is_some() {
                return Err(Error::ModelFormat(format!(
                    "merge {rank}: duplicate rule {left:?} {right:?}"
                )));
            }
            let rule = MergeRule { left, right, rank };
            known.insert(rule.merged());
            rules.push(rule);
        }
        Ok(BpeModel {
            alphabet,
            merges: rules,
            ranks,
        })
    }

    pub(crate) fn from_parts_unchecked(alphabet: BTreeSet<char>, merges: Vec<MergeRule>) -> Self {
        let ranks = merges
            .iter()
            .map(|m| ((m.left.clone(), m.right.clone()), m.rank))
            .collect();
        BpeModel {
            alphabet,
            merges,
            ranks,
        }
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn merges(&self) -> &[MergeRule] {
        &self.merges
    }

    pub fn num_merges(&self) -> usize {
        self.merges.len()
    }

    pub fn rank(&self, left: &str, right: &str) -> Option<usize> {
        self.ranks
            .get(&(left.to_owned(), right.to_owned()))
            .copied()
    }

    /// Alphabet plus every merge product.
    pub fn vocabulary(&self) -> BTreeSet<String> {
        let mut vocab: BTreeSet<String> = self.alphabet.iter().map(|c| c.to_string()).collect();
        vocab.extend(self.merges.iter().map(MergeRule::merged));
        vocab
    }

    /// The first `k` merges as a model of their own.
    pub fn truncated(&self, k: usize) -> BpeModel {
        BpeModel::from_parts_unchecked(
            self.alphabet.clone(),
            self.merges.iter().take(k).cloned().collect(),
        )
    }

    /// Segments one word.
    ///
    /// Rules are applied in rank order, each exhaustively from left to right.
    /// A merge only creates pairs involving its product, and every rule using
    /// that product was learned later, so repeatedly merging the lowest-ranked
    /// adjacent pair is the same procedure. Characters outside the alphabet
    /// stay single.
    pub fn apply(&self, word: &str) -> Vec<String> {
        let mut symbols: Vec<String> = word.chars().map(String::from).collect();
        let mut key = (String::new(), String::new());
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in 0..symbols.len().saturating_sub(1) {
                key.0.clear();
                key.0.push_str(&symbols[i]);
                key.1.clear();
                key.1.push_str(&symbols[i + 1]);
                if let Some(&rank) = self.ranks.get(&key) {
                    if best.is_none_or(|(r, _)| rank < r) {
                        best = Some((rank, i));
                    }
                }
            }
            let Some((rank, first)) = best else { break };
            let rule = &self.merges[rank];
            let mut out = Vec::with_capacity(symbols.len());
            out.extend(symbols.drain(..first));
            let mut rest = symbols.drain(..).peekable();
            while let Some(sym) = rest.next() {
                if sym == rule.left && rest.peek().is_some_and(|next| *next == rule.right) {
                    rest.next();
                    out.push(rule.merged());
                } else {
                    out.push(sym);
                }
            }
            drop(rest);
            symbols = out;
        }
        symbols
    }
}

/// Segments `word` with `model`.
pub fn apply_bpe(model: &BpeModel, word: &str) -> Vec<String> {
    model.apply(word)
}
