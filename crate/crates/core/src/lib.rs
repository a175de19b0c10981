//! Subword segmentation for translation between related languages.
//!
//! Modules, bottom-up:
//!
//! * [`corpus`]: line-aligned, whitespace-tokenized text.
//! * [`bpe`]: learning and applying Byte Pair Encoding merges.
//! * [`ortho`]: rule-based orthographic syllables for alphabets and abugidas.
//! * [`translit`]: offset mapping between Indic script blocks.
//! * [`codec`]: subword sequences with word-boundary marker tokens.
//! * [`simil`]: LCSR lexical similarity and Pearson correlation.
//! * [`eval`]: corpus BLEU, a soft-matching variant and bootstrap tests.
//! * [`pipeline`]: config-driven preprocessing runs and sweeps.

pub mod bpe;
pub mod codec;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod ortho;
pub mod pipeline;
pub mod simil;
pub mod translit;

pub use error::{Error, Result};
