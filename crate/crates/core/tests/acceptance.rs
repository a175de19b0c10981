//! Acceptance checks. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits nonzero if any fail.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use subseg::bpe::{apply_bpe, learn_bpe, learn_joint, match_merges, BpeModel};
use subseg::codec::{desegment, CharSplitter, Codec, SegmentedText, Segmenter};
use subseg::corpus::{Corpus, Sentence, DEFAULT_MARKER};
use subseg::eval::{bleu, bootstrap_test, soft_bleu, Metric, DEFAULT_SOFT_THRESHOLD};
use subseg::ortho::{syllabify_alphabet, ScriptSpec};
use subseg::pipeline::{run_pipeline_into, PipelineConfig, Scheme};
use subseg::simil::{lcs_length, lcsr};
use subseg::translit::{transliterate, IndicScript, TransliterationTable};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if let false = $cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn to_strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn os_golden() -> Check {
    let latin = ScriptSpec::builtin("latin").map_err(|e| e.to_string())?;
    let got = syllabify_alphabet("spacious", &latin);
    ensure!(got == to_strings(&["spa", "ciou", "s"]), "got {got:?}");
    Ok(())
}

fn bpe_golden() -> Check {
    let model = BpeModel::new(
        "scion".chars().collect(),
        [("s", "c"), ("i", "o"), ("io", "n")],
    )
    .map_err(|e| e.to_string())?;
    let got = apply_bpe(&model, "scion");
    ensure!(got == to_strings(&["sc", "ion"]), "got {got:?}");
    Ok(())
}

fn desegment_golden() -> Check {
    let seg = SegmentedText::from_line("Chi ldhoo d _ mea ns _ si mpli ci ty _ .");
    let got = desegment(&seg).to_string();
    ensure!(got == "Childhood means simplicity .", "got {got:?}");
    Ok(())
}

fn bpe_oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..50 {
        let size = rng.gen_range(2..=12);
        let alphabet: Vec<char> = "abcdefghijklmnop".chars().take(size).collect();
        let corpus = random_corpus(&mut rng, &alphabet, 200, 9, 150);
        let types = corpus.words().collect::<BTreeSet<_>>().len();
        ensure!(types <= 200, "case {case}: {types} word types");
        let n = rng.gen_range(1..=120);
        let learned = learn_bpe(&corpus, n).map_err(|e| e.to_string())?;
        let oracle = oracle_learn(&corpus, n, 2);
        let got: Vec<(String, String)> = learned
            .model
            .merges()
            .iter()
            .map(|m| (m.left.clone(), m.right.clone()))
            .collect();
        if let Some(i) =
            (0..got.len().min(oracle.merges.len())).find(|&i| got[i] != oracle.merges[i])
        {
            return Err(format!(
                "case {case}: merge {i} differs: {:?} vs oracle {:?}",
                got[i], oracle.merges[i]
            ));
        }
        ensure!(
            got.len() == oracle.merges.len(),
            "case {case}: {} merges vs oracle {}",
            got.len(),
            oracle.merges.len()
        );
        ensure!(
            learned.vocab_trace == oracle.vocab_trace,
            "case {case}: vocabulary trace differs"
        );
        for (word, expected) in &oracle.segmentation {
            let seg = learned.model.apply(word);
            ensure!(
                seg == *expected,
                "case {case}: {word:?} -> {seg:?}, oracle {expected:?}"
            );
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(())
}

fn random_sentence(rng: &mut impl Rng, alphabet: &[char]) -> Sentence {
    let n = rng.gen_range(1..=10);
    let words: Vec<String> = (0..n).map(|_| random_word(rng, alphabet, 10)).collect();
    Sentence::from_tokens(words, DEFAULT_MARKER).unwrap()
}

fn round_trips(segmenter: &dyn Segmenter, sentences: &[Sentence], name: &str) -> Check {
    let codec = Codec::new(DEFAULT_MARKER);
    for s in sentences {
        let seg = codec
            .segment(s, segmenter)
            .map_err(|e| format!("{name}: {e}"))?;
        let back = codec.desegment(seg.units());
        ensure!(back == *s, "{name}: {s} -> {seg} -> {back}");
    }
    Ok(())
}

fn round_trip_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let alphabet: Vec<char> = "abcdeiouystrnlmpkAEé'-.,0ñøäभारतक्षि".chars().collect();
    let sentences: Vec<Sentence> = (0..10_000)
        .map(|_| random_sentence(&mut rng, &alphabet))
        .collect();

    round_trips(&CharSplitter, &sentences, "char")?;
    let latin = ScriptSpec::builtin("latin").map_err(|e| e.to_string())?;
    round_trips(&latin, &sentences, "os/latin")?;
    let hindi = ScriptSpec::builtin("hindi").map_err(|e| e.to_string())?;
    round_trips(&hindi, &sentences, "os/devanagari")?;

    let training: Corpus = sentences[..2000].iter().cloned().collect();
    let model = learn_bpe(&training, 300).map_err(|e| e.to_string())?.model;
    round_trips(&model, &sentences, "bpe")?;
    for s in &sentences {
        for w in s.tokens() {
            let units = model.apply(w);
            ensure!(
                units.concat() == *w,
                "bpe concatenation: {w:?} -> {units:?}"
            );
        }
    }

    for case in 0..5 {
        let corpus = random_corpus(&mut rng, &alphabet[..10], 150, 8, 200);
        let alphabet_size = corpus
            .words()
            .flat_map(str::chars)
            .collect::<BTreeSet<_>>()
            .len();
        let full = learn_bpe(&corpus, 50).map_err(|e| e.to_string())?;
        for k in 1..=50 {
            let learned = learn_bpe(&corpus, k).map_err(|e| e.to_string())?;
            let prefix = &full.model.merges()[..k.min(full.model.num_merges())];
            ensure!(
                learned.model.merges() == prefix,
                "case {case}: k={k} is not a prefix"
            );
            let vocab = learned.model.vocabulary().len();
            ensure!(
                vocab <= alphabet_size + k,
                "case {case}: k={k} vocabulary {vocab} > {alphabet_size} + {k}"
            );
            ensure!(
                learned.final_vocab_size() <= alphabet_size + k,
                "case {case}: k={k} corpus vocabulary exceeds bound"
            );
        }
    }
    Ok(())
}

fn match_merges_contract() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let alphabet: Vec<char> = "abcdefg".chars().collect();
    for case in 0..10 {
        let corpus = random_corpus(&mut rng, &alphabet, 60, 7, 100);
        let trace = oracle_learn(&corpus, usize::MAX, 2).vocab_trace;
        let (lo, hi) = (trace[0], trace.iter().copied().max().unwrap());
        for target in lo..=hi + 2 {
            let outcome = match_merges(&corpus, target).map_err(|e| e.to_string())?;
            match trace.iter().position(|&v| v >= target) {
                Some(i) => {
                    ensure!(
                        outcome.model.num_merges() == i && outcome.achieved_vocab == trace[i],
                        "case {case}, target {target}: {} merges / vocab {}, expected {i} / {}",
                        outcome.model.num_merges(),
                        outcome.achieved_vocab,
                        trace[i]
                    );
                }
                None => {
                    ensure!(
                        !outcome.reached(),
                        "case {case}: unreachable target {target} reported reached"
                    );
                    ensure!(
                        outcome.model.num_merges() == trace.len() - 1,
                        "case {case}: unreachable target should exhaust merges"
                    );
                }
            }
        }
    }
    Ok(())
}

fn lcs_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let alphabet: Vec<char> = "abcdक्".chars().collect();
    for _ in 0..1000 {
        let a: String = (0..rng.gen_range(0..=12))
            .map(|_| *alphabet.choose(&mut rng).unwrap())
            .collect();
        let b: String = (0..rng.gen_range(0..=12))
            .map(|_| *alphabet.choose(&mut rng).unwrap())
            .collect();
        let (got, want) = (lcs_length(&a, &b), oracle_lcs(&a, &b));
        ensure!(
            got == want,
            "lcs({a:?}, {b:?}) = {got}, enumeration gives {want}"
        );
    }
    let v = lcsr("abc", "abd").map_err(|e| e.to_string())?;
    ensure!((v - 2.0 / 3.0).abs() < 1e-12, "lcsr(abc, abd) = {v}");
    Ok(())
}

fn bleu_checks() -> Check {
    let score = bleu(&corpus("a b c d\n"), &corpus("a b c d e\n"), 4)
        .map_err(|e| e.to_string())?
        .score;
    ensure!(
        (score - (-0.25f64).exp()).abs() < 1e-9,
        "fixture BLEU {score}"
    );
    let text = "the cat sat\non the mat today\n";
    let identity = bleu(&corpus(text), &corpus(text), 4)
        .map_err(|e| e.to_string())?
        .score;
    ensure!(identity == 1.0, "identity BLEU {identity}");

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let vocab: Vec<String> = (0..25)
        .map(|_| random_word(&mut rng, &['a', 'b', 'c', 'd', 'e'], 5))
        .collect();
    for case in 0..100 {
        let n = rng.gen_range(1..=12);
        let mut hyps = String::new();
        let mut refs = String::new();
        for _ in 0..n {
            let r: Vec<&str> = (0..rng.gen_range(1..=10))
                .map(|_| vocab.choose(&mut rng).unwrap().as_str())
                .collect();
            let mut h: Vec<String> = Vec::new();
            for w in &r {
                if !rng.gen_bool(0.85) {
                    continue;
                }
                let mut w: Vec<char> = w.chars().collect();
                if rng.gen_bool(0.3) {
                    let i = rng.gen_range(0..w.len());
                    w[i] = 'x';
                }
                h.push(w.into_iter().collect());
            }
            refs.push_str(&r.join(" "));
            refs.push('\n');
            hyps.push_str(&h.join(" "));
            hyps.push('\n');
        }
        let (h, r) = (corpus(&hyps), corpus(&refs));
        let hard = bleu(&h, &r, 4).map_err(|e| e.to_string())?.score;
        let soft = soft_bleu(&h, &r, 4, DEFAULT_SOFT_THRESHOLD)
            .map_err(|e| e.to_string())?
            .score;
        ensure!(soft >= hard, "case {case}: soft {soft} < hard {hard}");
        let hs: Vec<Vec<String>> = h.sentences().iter().map(|s| s.tokens().to_vec()).collect();
        let rs: Vec<Vec<String>> = r.sentences().iter().map(|s| s.tokens().to_vec()).collect();
        let want = oracle_bleu(&hs, &rs, 4);
        ensure!(
            (hard - want).abs() < 1e-12,
            "case {case}: BLEU {hard}, oracle {want}"
        );
    }
    Ok(())
}

fn bootstrap_separation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let vocab: Vec<String> = (0..40)
        .map(|_| random_word(&mut rng, &['a', 'e', 'k', 'l', 'o', 's', 't'], 6))
        .collect();
    let mut refs = Vec::new();
    let mut shuffled = Vec::new();
    for _ in 0..50 {
        let words: Vec<String> = (0..rng.gen_range(6..=14))
            .map(|_| vocab.choose(&mut rng).unwrap().clone())
            .collect();
        let mut mixed = words.clone();
        while mixed == words {
            mixed.shuffle(&mut rng);
        }
        refs.push(Sentence::from_tokens(words, DEFAULT_MARKER).unwrap());
        shuffled.push(Sentence::from_tokens(mixed, DEFAULT_MARKER).unwrap());
    }
    let refs = Corpus::new(refs);
    let shuffled = Corpus::new(shuffled);
    let run = || {
        bootstrap_test(&refs, &shuffled, &refs, Metric::Bleu, 1000, 1234).map_err(|e| e.to_string())
    };
    let first = run()?;
    ensure!(first.p_value < 0.05, "p = {}", first.p_value);
    let second = run()?;
    ensure!(
        first.p_value.to_bits() == second.p_value.to_bits()
            && first.delta_mean.to_bits() == second.delta_mean.to_bits(),
        "rerun differs: {first:?} vs {second:?}"
    );
    Ok(())
}

fn transliteration() -> Check {
    let forward = TransliterationTable::between(IndicScript::Devanagari, IndicScript::Bengali);
    let backward = forward.reverse().map_err(|e| e.to_string())?;
    let mut mapped = 0;
    for cp in 0x900..0x980u32 {
        let c = char::from_u32(cp).unwrap();
        if forward.exceptions().contains_key(&c) {
            continue;
        }
        if let Some(b) = forward.map_char(c) {
            mapped += 1;
            ensure!(
                backward.map_char(b) == Some(c),
                "U+{cp:04X} -> U+{:04X} does not map back",
                b as u32
            );
        }
        let s = c.to_string();
        let back = transliterate(&transliterate(&s, &forward), &backward);
        ensure!(back == s, "U+{cp:04X} does not survive a round trip");
    }
    ensure!(mapped > 80, "only {mapped} characters mapped");
    // Code chart pairs: KA, letter A, vowel sign I, virama, digit zero.
    for (dev, ben) in [
        (0x915, 0x995),
        (0x905, 0x985),
        (0x93F, 0x9BF),
        (0x94D, 0x9CD),
        (0x966, 0x9E6),
    ] {
        let got = forward.map_char(char::from_u32(dev).unwrap());
        ensure!(
            got == char::from_u32(ben),
            "U+{dev:04X} -> {:?}, chart says U+{ben:04X}",
            got.map(|c| format!("U+{:04X}", c as u32))
        );
    }
    Ok(())
}

fn joint_self_pair() -> Check {
    let sample = Corpus::load(sample_path(), Default::default()).map_err(|e| e.to_string())?;
    let small = sample.select(&(0..1500).collect::<Vec<_>>());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let alphabet: Vec<char> = "abcdefgh".chars().collect();
    let mut cases = vec![(small, 150)];
    for _ in 0..10 {
        cases.push((random_corpus(&mut rng, &alphabet, 100, 8, 120), 15));
    }
    for (i, (corpus, n)) in cases.iter().enumerate() {
        let single = learn_bpe(corpus, *n).map_err(|e| e.to_string())?;
        ensure!(
            !single.stopped_early(),
            "case {i}: fixture exhausts before {n} merges"
        );
        let joint = learn_joint(corpus, corpus, *n, None).map_err(|e| e.to_string())?;
        ensure!(
            joint.model.merges() == single.model.merges(),
            "case {i}: joint merges differ from single-corpus merges"
        );
    }
    Ok(())
}

fn sample_path() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample_10k.txt")
}

fn end_to_end() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let sample = sample_path();
    let lines = std::fs::read_to_string(&sample)
        .map_err(|e| e.to_string())?
        .lines()
        .count();
    ensure!(lines == 10_000, "sample corpus has {lines} lines");
    let mut config = PipelineConfig::new(Scheme::Bpe, sample);
    config.merges = Some(500);
    let out = dir.path().join("run");
    let start = Instant::now();
    let first = run_pipeline_into(&config, &out).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_secs(60),
        "first run took {elapsed:?}"
    );
    ensure!(
        first.merges_learned == Some(500),
        "learned {:?} merges",
        first.merges_learned
    );
    let second = run_pipeline_into(&config, &out).map_err(|e| e.to_string())?;
    ensure!(
        first.manifest_sha256() == second.manifest_sha256(),
        "manifest hash changed between runs"
    );
    let on_disk = std::fs::read_to_string(out.join("manifest.txt")).map_err(|e| e.to_string())?;
    ensure!(
        on_disk == second.manifest,
        "manifest on disk differs from returned manifest"
    );
    let seg = std::fs::read_to_string(out.join("segmented.txt")).map_err(|e| e.to_string())?;
    let original = std::fs::read_to_string(sample_path()).map_err(|e| e.to_string())?;
    let codec = Codec::new(DEFAULT_MARKER);
    let restored: String = seg
        .lines()
        .map(|l| codec.desegment_line(l).to_string() + "\n")
        .collect();
    ensure!(
        restored == original,
        "segmented output does not desegment to the input"
    );
    Ok(())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("orthographic syllable golden", os_golden),
        ("BPE apply golden", bpe_golden),
        ("desegment golden", desegment_golden),
        (
            "BPE learner matches brute-force oracle",
            bpe_oracle_equivalence,
        ),
        ("segmentation round-trip properties", round_trip_properties),
        ("match_merges first-reach contract", match_merges_contract),
        ("LCS/LCSR against enumeration", lcs_oracle),
        ("BLEU hand-check and soft >= hard", bleu_checks),
        ("bootstrap separation and determinism", bootstrap_separation),
        ("Devanagari/Bengali transliteration", transliteration),
        ("joint BPE self-pair consistency", joint_self_pair),
        ("end-to-end pipeline and manifest", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
