use std::io::{self, BufRead, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use subseg::bpe::{self, BpeModel};
use subseg::codec::{CharSplitter, Codec, Segmenter};
use subseg::corpus::{Corpus, LoadOptions, Normalization, ParallelCorpus, DEFAULT_MARKER};
use subseg::eval::{self, Metric, DEFAULT_MAX_N, DEFAULT_SOFT_THRESHOLD};
use subseg::ortho::ScriptSpec;
use subseg::pipeline::{self, PipelineConfig};
use subseg::simil;
use subseg::translit::{IndicScript, TransliterationTable};

#[derive(Parser)]
#[command(
    name = "subseg",
    version,
    about = "Subword segmentation and corpus analytics"
)]
struct Cli {
    /// Skip Unicode NFC normalization of input text.
    #[arg(long, global = true)]
    no_normalize: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a BPE model from a corpus.
    Learn(LearnArgs),
    /// Segment text read from stdin.
    Segment(SegmentArgs),
    /// Restore words from segmented text on stdin.
    Desegment,
    /// Split words on stdin into orthographic syllables.
    Syllabify {
        #[arg(long)]
        script: String,
    },
    /// Transliterate stdin between Indic scripts.
    Translit {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// File of "U+XXXX U+YYYY" overrides.
        #[arg(long)]
        exceptions: Option<PathBuf>,
    },
    /// Sentence-wise LCSR between two aligned corpora.
    Lcsr {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        tgt: PathBuf,
        #[arg(long)]
        translit_map: Option<PathBuf>,
    },
    /// Correlate source/reference similarity with hypothesis accuracy.
    Correlate {
        #[arg(long)]
        src: PathBuf,
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
    },
    /// Corpus BLEU or soft BLEU.
    Bleu {
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        soft: bool,
        #[arg(long, default_value_t = DEFAULT_SOFT_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Paired bootstrap test of system A against system B.
    Sigtest {
        #[arg(long)]
        hyp_a: PathBuf,
        #[arg(long)]
        hyp_b: PathBuf,
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        soft: bool,
        #[arg(long, default_value_t = DEFAULT_SOFT_THRESHOLD)]
        threshold: f64,
    },
    /// Run one pipeline config.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every *.conf in a directory and print a TSV summary.
    Sweep {
        #[arg(long)]
        configs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct LearnArgs {
    /// Training corpus.
    input: PathBuf,
    #[arg(
        long,
        conflicts_with = "target_vocab",
        required_unless_present = "target_vocab"
    )]
    merges: Option<usize>,
    #[arg(long)]
    target_vocab: Option<usize>,
    /// Learn over the input plus a second corpus.
    #[arg(long, requires = "tgt")]
    joint: bool,
    #[arg(long)]
    tgt: Option<PathBuf>,
    #[arg(long, requires = "joint")]
    translit_map: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SegScheme {
    Bpe,
    Os,
    Char,
}

#[derive(Args)]
struct SegmentArgs {
    #[arg(long, value_enum)]
    scheme: SegScheme,
    #[arg(long, required_if_eq("scheme", "bpe"))]
    model: Option<PathBuf>,
    #[arg(long, required_if_eq("scheme", "os"))]
    script: Option<String>,
}

fn load_options(cli: &Cli) -> LoadOptions {
    LoadOptions {
        normalization: if cli.no_normalize {
            Normalization::None
        } else {
            Normalization::Nfc
        },
        marker: DEFAULT_MARKER,
    }
}

fn read_stdin(options: LoadOptions) -> Result<Corpus> {
    let mut bytes = Vec::new();
    io::stdin()
        .read_to_end(&mut bytes)
        .context("reading stdin")?;
    Ok(Corpus::from_bytes(&bytes, options)?)
}

fn load(path: &PathBuf, options: LoadOptions) -> Result<Corpus> {
    Ok(Corpus::load(path, options)?)
}

fn learn(args: &LearnArgs, options: LoadOptions) -> Result<()> {
    let src = load(&args.input, options)?;
    let corpus = if args.joint {
        let tgt = load(args.tgt.as_ref().expect("clap enforces --tgt"), options)?;
        let table = args
            .translit_map
            .as_ref()
            .map(TransliterationTable::load)
            .transpose()?;
        bpe::joint_corpus(
            &src,
            &tgt,
            table.as_ref(),
            bpe::JointOptions::default().min_alphabet_overlap,
        )?
    } else {
        src
    };
    let model = match (args.merges, args.target_vocab) {
        (Some(n), _) => {
            let learned = bpe::learn_bpe(&corpus, n)?;
            if learned.stopped_early() {
                log::warn!(
                    "stopped after {} of {} merges: no pair occurs twice",
                    learned.model.num_merges(),
                    n
                );
            }
            eprintln!(
                "merges={} vocab_size={}",
                learned.model.num_merges(),
                learned.final_vocab_size()
            );
            learned.model
        }
        (None, Some(target)) => {
            let outcome = bpe::match_merges(&corpus, target)?;
            if !outcome.reached() {
                log::warn!(
                    "target vocabulary {target} not reached; achieved {}",
                    outcome.achieved_vocab
                );
            }
            eprintln!(
                "merges={} vocab_size={} target_vocab={}",
                outcome.model.num_merges(),
                outcome.achieved_vocab,
                target
            );
            outcome.model
        }
        (None, None) => unreachable!("clap requires one of --merges/--target-vocab"),
    };
    bpe::save_model(&model, &args.out)?;
    Ok(())
}

fn segment(args: &SegmentArgs, options: LoadOptions) -> Result<()> {
    let corpus = read_stdin(options)?;
    let segmenter: Box<dyn Segmenter> = match args.scheme {
        SegScheme::Bpe => {
            let model: BpeModel =
                bpe::load_model(args.model.as_ref().expect("clap enforces --model"))?;
            Box::new(model)
        }
        SegScheme::Os => Box::new(ScriptSpec::resolve(
            args.script.as_deref().expect("clap enforces --script"),
        )?),
        SegScheme::Char => Box::new(CharSplitter),
    };
    let lines = Codec::new(options.marker).segment_corpus(&corpus, segmenter.as_ref())?;
    let mut out = io::BufWriter::new(io::stdout().lock());
    for line in lines {
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

fn desegment() -> Result<()> {
    let codec = Codec::new(DEFAULT_MARKER);
    let mut out = io::BufWriter::new(io::stdout().lock());
    for line in io::stdin().lock().lines() {
        let line = line.context("reading stdin")?;
        writeln!(out, "{}", codec.desegment_line(&line))?;
    }
    out.flush()?;
    Ok(())
}

fn syllabify(script: &str, options: LoadOptions) -> Result<()> {
    let spec = ScriptSpec::resolve(script)?;
    let corpus = read_stdin(options)?;
    let mut out = io::BufWriter::new(io::stdout().lock());
    for sentence in corpus.sentences() {
        let words: Vec<String> = sentence
            .tokens()
            .iter()
            .map(|w| spec.syllabify(w).join(" "))
            .collect();
        writeln!(out, "{}", words.join(&format!(" {} ", options.marker)))?;
    }
    out.flush()?;
    Ok(())
}

fn translit(from: &str, to: &str, exceptions: Option<&PathBuf>) -> Result<()> {
    let mut table =
        TransliterationTable::between(IndicScript::from_name(from)?, IndicScript::from_name(to)?);
    if let Some(path) = exceptions {
        table = table.with_exceptions_file(path)?;
    }
    let mut text = String::new();
    io::stdin()
        .read_to_string(&mut text)
        .context("reading stdin")?;
    let (out, unmappable) = table.transliterate_counted(&text);
    if unmappable > 0 {
        log::warn!("{unmappable} character(s) have no counterpart and were kept");
    }
    io::stdout().write_all(out.as_bytes())?;
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_owned(), |v| format!("{v:.6}"))
}

fn lcsr(src: &PathBuf, tgt: &PathBuf, map: Option<&PathBuf>, options: LoadOptions) -> Result<()> {
    let pc = ParallelCorpus::new(load(src, options)?, load(tgt, options)?)?;
    let table = map.map(TransliterationTable::load).transpose()?;
    let report = simil::corpus_lcsr(&pc, table.as_ref());
    let mut out = io::BufWriter::new(io::stdout().lock());
    writeln!(out, "line\tlcsr")?;
    for (i, v) in report.per_sentence.iter().enumerate() {
        writeln!(out, "{}\t{}", i + 1, fmt_opt(*v))?;
    }
    out.flush()?;
    eprintln!(
        "mean_lcsr={} sentences={} defined={} truncated={} unmappable={}",
        fmt_opt(report.corpus_mean),
        report.per_sentence.len(),
        report.defined().count(),
        report.truncated,
        report.unmappable
    );
    Ok(())
}

fn correlate(
    src: &PathBuf,
    reference: &PathBuf,
    hyp: &PathBuf,
    options: LoadOptions,
) -> Result<()> {
    let pc = ParallelCorpus::new(load(src, options)?, load(reference, options)?)?;
    let hyps = load(hyp, options)?;
    let c = simil::correlate_similarity_accuracy(&pc, &hyps)?;
    println!(
        "pearson_r={:.6}\tsentences={}\tskipped={}",
        c.r,
        c.similarity.len(),
        c.skipped.len()
    );
    Ok(())
}

fn metric(soft: bool, threshold: f64) -> Metric {
    if soft {
        Metric::SoftBleu { threshold }
    } else {
        Metric::Bleu
    }
}

fn run(cli: &Cli) -> Result<()> {
    let options = load_options(cli);
    match &cli.command {
        Command::Learn(args) => learn(args, options),
        Command::Segment(args) => segment(args, options),
        Command::Desegment => desegment(),
        Command::Syllabify { script } => syllabify(script, options),
        Command::Translit {
            from,
            to,
            exceptions,
        } => translit(from, to, exceptions.as_ref()),
        Command::Lcsr {
            src,
            tgt,
            translit_map,
        } => lcsr(src, tgt, translit_map.as_ref(), options),
        Command::Correlate {
            src,
            reference,
            hyp,
        } => correlate(src, reference, hyp, options),
        Command::Bleu {
            hyp,
            reference,
            soft,
            threshold,
            max_n,
        } => {
            let m = metric(*soft, *threshold);
            let report =
                eval::evaluate(&load(hyp, options)?, &load(reference, options)?, *max_n, m)?;
            let label = if *soft { "SoftBLEU" } else { "BLEU" };
            println!("{}", report.summary(label));
            println!("{}", report.tsv());
            Ok(())
        }
        Command::Sigtest {
            hyp_a,
            hyp_b,
            reference,
            samples,
            seed,
            soft,
            threshold,
        } => {
            let r = eval::bootstrap_test(
                &load(hyp_a, options)?,
                &load(hyp_b, options)?,
                &load(reference, options)?,
                metric(*soft, *threshold),
                *samples,
                *seed,
            )?;
            println!(
                "score_a={:.6}\tscore_b={:.6}\tdelta={:.6}\tdelta_mean={:.6}\tp_value={:.6}\tsamples={}\tseed={}",
                r.score_a, r.score_b, r.observed_delta, r.delta_mean, r.p_value, r.num_samples, seed
            );
            Ok(())
        }
        Command::Run { config, out } => {
            let config = PipelineConfig::load(config)?;
            let outcome = match out {
                Some(dir) => pipeline::run_pipeline_into(&config, dir)?,
                None => pipeline::run_pipeline(&config)?,
            };
            print!("{}", outcome.manifest);
            Ok(())
        }
        Command::Sweep { configs, out } => {
            let rows = pipeline::sweep_dir(configs, out)?;
            print!("{}", pipeline::rows_to_tsv(&rows));
            let failed = rows.iter().filter(|r| !r.is_ok()).count();
            if failed > 0 {
                bail!("{failed} of {} configurations failed", rows.len());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
