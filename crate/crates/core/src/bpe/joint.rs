use std::collections::BTreeSet;

use super::learn::{run, BpeLearner, LearnOptions, Learned};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::translit::{transliterate_corpus, TransliterationTable};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointOptions {
    pub learn: LearnOptions,
    /// Minimum Jaccard overlap of the two character alphabets (after any
    /// transliteration) below which learning is refused.
    pub min_alphabet_overlap: f64,
}

impl Default for JointOptions {
    fn default() -> Self {
        JointOptions {
            learn: LearnOptions::default(),
            min_alphabet_overlap: 0.2,
        }
    }
}

fn alphabet(corpus: &Corpus) -> BTreeSet<char> {
    corpus.words().flat_map(str::chars).collect()
}

/// Learns one model over the union of both corpora.
///
/// With a mapping, `tgt` is first transliterated into the script of `src`;
/// the same mapping must be applied to target text before segmenting it with
/// the returned model.
pub fn learn_joint(
    src: &Corpus,
    tgt: &Corpus,
    num_merges: usize,
    mapping: Option<&TransliterationTable>,
) -> Result<Learned> {
    learn_joint_with(src, tgt, num_merges, mapping, JointOptions::default())
}

pub fn learn_joint_with(
    src: &Corpus,
    tgt: &Corpus,
    num_merges: usize,
    mapping: Option<&TransliterationTable>,
    options: JointOptions,
) -> Result<Learned> {
    let union = joint_corpus(src, tgt, mapping, options.min_alphabet_overlap)?;
    let learner = BpeLearner::from_corpus(&union, options.learn)?;
    Ok(run(learner, num_merges))
}

/// The corpus a joint model is learned from: `src` followed by `tgt`, the
/// latter transliterated when a mapping is given. Refuses when the two
/// alphabets overlap less than `min_overlap` (Jaccard).
pub fn joint_corpus(
    src: &Corpus,
    tgt: &Corpus,
    mapping: Option<&TransliterationTable>,
    min_overlap: f64,
) -> Result<Corpus> {
    let mapped;
    let tgt = match mapping {
        Some(table) => {
            let (out, unmappable) = transliterate_corpus(tgt, table);
            if unmappable > 0 {
                log::warn!("{unmappable} target character(s) kept in their original script");
            }
            mapped = out;
            &mapped
        }
        None => tgt,
    };

    let (a, b) = (alphabet(src), alphabet(tgt));
    if !a.is_empty() && !b.is_empty() {
        let shared = a.intersection(&b).count();
        let overlap = shared as f64 / a.union(&b).count() as f64;
        if overlap < min_overlap {
            return Err(Error::DisjointAlphabets {
                overlap,
                threshold: min_overlap,
            });
        }
    }
    Ok(src.concat(tgt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bpe::learn_bpe;
    use crate::corpus::LoadOptions;
    use crate::translit::IndicScript;

    fn corpus(text: &str) -> Corpus {
        Corpus::parse(text, LoadOptions::default()).unwrap()
    }

    #[test]
    fn self_pair_matches_single_learner() {
        let c = corpus("lower lowest newer newest wider widest\nlow low new");
        let single = learn_bpe(&c, 4).unwrap();
        assert!(!single.stopped_early());
        let joint = learn_joint(&c, &c, 4, None).unwrap();
        assert_eq!(joint.model, single.model);
    }

    #[test]
    fn disjoint_scripts_without_map_are_refused() {
        let dev = corpus("भारत नमस्ते भारत");
        let ben = corpus("ভারত নমস্কার ভারত");
        let err = learn_joint(&dev, &ben, 5, None).unwrap_err();
        assert!(matches!(err, Error::DisjointAlphabets { .. }));
    }

    #[test]
    fn mapped_target_joins_source_script() {
        let dev = corpus("भारत नमस्ते भारत");
        let ben = corpus("ভারত নমস্কার ভারত");
        let table = TransliterationTable::between(IndicScript::Bengali, IndicScript::Devanagari);
        let learned = learn_joint(&dev, &ben, 5, Some(&table)).unwrap();
        assert!(learned
            .model
            .alphabet()
            .iter()
            .all(|&c| !(0x980..0xA00).contains(&(c as u32))));
        assert!(learned.model.num_merges() > 0);
    }
}
