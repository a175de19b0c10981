//! Orthographic syllabification.
//!
//! An orthographic syllable is a run of consonants closed by a vowel. For
//! alphabets each unit is a maximal consonant run followed by a maximal vowel
//! run; a consonant run not followed by a vowel becomes a unit of its own.
//!
//! For abugidas a unit closes after an independent vowel or a dependent vowel
//! sign, taking any following non-virama signs (anusvara, visarga) with it.
//! A consonant + virama chains into the next consonant only when that cluster
//! ends in a vowel sign; otherwise the virama closes with its consonant. A
//! bare consonant carries the inherent vowel and closes on its own.
//!
//! Dependent vowel signs are the members of the vowel set with a mark
//! general category; viramas and nuktas are recognized among the combining
//! characters by their canonical combining class.
//!
//! Characters outside every class are singleton units, so concatenating the
//! output always reproduces the input word.

mod spec;

use std::collections::BTreeSet;

use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_normalization::char::canonical_combining_class;

use crate::error::{Error, Result};

pub use spec::builtin_names;

const CCC_NUKTA: u8 = 7;
const CCC_VIRAMA: u8 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScriptKind {
    Alphabet,
    Abugida,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharClass {
    Vowel,
    Consonant,
    Combining,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptSpec {
    name: String,
    kind: ScriptKind,
    vowels: BTreeSet<char>,
    consonants: BTreeSet<char>,
    combining: BTreeSet<char>,
    block_base: Option<u32>,
}

impl ScriptSpec {
    pub fn new(
        name: impl Into<String>,
        kind: ScriptKind,
        vowels: BTreeSet<char>,
        consonants: BTreeSet<char>,
        combining: BTreeSet<char>,
        block_base: Option<u32>,
    ) -> Result<Self> {
        let invalid = |message: String| Error::ScriptSpec { line: 0, message };
        if let Some(c) = vowels.intersection(&consonants).next() {
            return Err(invalid(format!(
                "U+{:04X} is both a vowel and a consonant",
                *c as u32
            )));
        }
        if let Some(c) = combining
            .iter()
            .find(|c| vowels.contains(c) || consonants.contains(c))
        {
            return Err(invalid(format!(
                "combining U+{:04X} is also a vowel or consonant",
                *c as u32
            )));
        }
        Ok(ScriptSpec {
            name: name.into(),
            kind,
            vowels,
            consonants,
            combining,
            block_base,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ScriptKind {
        self.kind
    }

    pub fn vowels(&self) -> &BTreeSet<char> {
        &self.vowels
    }

    pub fn consonants(&self) -> &BTreeSet<char> {
        &self.consonants
    }

    pub fn combining(&self) -> &BTreeSet<char> {
        &self.combining
    }

    pub fn block_base(&self) -> Option<u32> {
        self.block_base
    }

    pub fn classify(&self, c: char) -> CharClass {
        if self.vowels.contains(&c) {
            CharClass::Vowel
        } else if self.consonants.contains(&c) {
            CharClass::Consonant
        } else if self.combining.contains(&c) {
            CharClass::Combining
        } else {
            CharClass::Other
        }
    }

    /// Syllabifies with the rules for this spec's kind.
    pub fn syllabify(&self, word: &str) -> Vec<String> {
        match self.kind {
            ScriptKind::Alphabet => syllabify_alphabet(word, self),
            ScriptKind::Abugida => syllabify_abugida(word, self),
        }
    }

    fn is_vowel_sign(&self, c: char) -> bool {
        self.vowels.contains(&c)
            && matches!(
                get_general_category(c),
                GeneralCategory::NonspacingMark
                    | GeneralCategory::SpacingMark
                    | GeneralCategory::EnclosingMark
            )
    }

    fn is_independent_vowel(&self, c: char) -> bool {
        self.vowels.contains(&c) && !self.is_vowel_sign(c)
    }

    fn is_virama(&self, c: char) -> bool {
        self.combining.contains(&c) && canonical_combining_class(c) == CCC_VIRAMA
    }

    fn is_nukta(&self, c: char) -> bool {
        self.combining.contains(&c) && canonical_combining_class(c) == CCC_NUKTA
    }

    /// Combining signs a closed unit absorbs (everything but the virama).
    fn is_trailing_sign(&self, c: char) -> bool {
        self.combining.contains(&c) && !self.is_virama(c)
    }
}

/// Public entry point matching the character classification contract.
pub fn classify(c: char, spec: &ScriptSpec) -> CharClass {
    spec.classify(c)
}

fn push_unit(units: &mut Vec<String>, chars: &[char]) {
    units.push(chars.iter().collect());
}

/// Attaches a stray sign to the previous unit, or makes it a unit of its own
/// at the start of a word.
fn push_stray(units: &mut Vec<String>, c: char) {
    match units.last_mut() {
        Some(last) => last.push(c),
        None => units.push(c.to_string()),
    }
}

/// Splits an alphabetic word into `C*V+` units.
pub fn syllabify_alphabet(word: &str, spec: &ScriptSpec) -> Vec<String> {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    let mut units = Vec::new();

    // Consumes a run of `class` letters, each with its trailing combining marks.
    let take_run = |mut i: usize, class: CharClass| {
        while i < n && spec.classify(chars[i]) == class {
            i += 1;
            while i < n && spec.classify(chars[i]) == CharClass::Combining {
                i += 1;
            }
        }
        i
    };

    let mut i = 0;
    while i < n {
        match spec.classify(chars[i]) {
            CharClass::Combining => {
                push_stray(&mut units, chars[i]);
                i += 1;
            }
            CharClass::Other => {
                push_unit(&mut units, &chars[i..i + 1]);
                i += 1;
            }
            CharClass::Consonant | CharClass::Vowel => {
                let start = i;
                let consonants_end = take_run(i, CharClass::Consonant);
                let vowels_end = take_run(consonants_end, CharClass::Vowel);
                push_unit(&mut units, &chars[start..vowels_end]);
                i = vowels_end;
            }
        }
    }
    units
}

/// Splits an abugida word into orthographic syllables.
pub fn syllabify_abugida(word: &str, spec: &ScriptSpec) -> Vec<String> {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    let mut units = Vec::new();

    let is_consonant = |i: usize| i < n && spec.consonants.contains(&chars[i]);
    let is_virama = |i: usize| i < n && spec.is_virama(chars[i]);
    let is_sign = |i: usize| i < n && spec.is_vowel_sign(chars[i]);
    // Consonant plus any nukta.
    let consonant_end = |mut i: usize| {
        i += 1;
        while i < n && spec.is_nukta(chars[i]) {
            i += 1;
        }
        i
    };
    // Vowel signs followed by non-virama signs.
    let close_after = |mut i: usize| {
        while is_sign(i) {
            i += 1;
        }
        while i < n && spec.is_trailing_sign(chars[i]) {
            i += 1;
        }
        i
    };

    let mut i = 0;
    while i < n {
        let c = chars[i];
        if spec.is_independent_vowel(c) {
            let end = close_after(i + 1);
            push_unit(&mut units, &chars[i..end]);
            i = end;
        } else if is_consonant(i) {
            let end = consonant_end(i);
            let end = if is_virama(end) {
                // Look for C (virama C)* followed by a vowel sign.
                let mut j = end + 1;
                let mut chained = None;
                while is_consonant(j) {
                    let k = consonant_end(j);
                    if is_sign(k) {
                        chained = Some(k);
                        break;
                    }
                    if is_virama(k) && is_consonant(k + 1) {
                        j = k + 1;
                        continue;
                    }
                    break;
                }
                match chained {
                    Some(sign) => close_after(sign),
                    None => end + 1,
                }
            } else {
                close_after(end)
            };
            push_unit(&mut units, &chars[i..end]);
            i = end;
        } else if spec.vowels.contains(&c) || spec.combining.contains(&c) {
            push_stray(&mut units, c);
            i += 1;
        } else {
            push_unit(&mut units, &chars[i..i + 1]);
            i += 1;
        }
    }
    units
}
