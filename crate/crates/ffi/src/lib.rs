//! C ABI for the subseg toolkit.
//!
//! Every fallible function returns a [`SubsegStatus`]. On failure a message
//! is kept per thread and can be read with [`subseg_last_error`]. Strings
//! returned through out-pointers are owned by the caller and must be released
//! with [`subseg_string_free`]; handles are released with their own `_free`
//! function. All text is UTF-8; corpora are newline-separated.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use subseg::bpe::{self, BpeModel};
use subseg::codec::{Codec, Segmenter};
use subseg::corpus::{Corpus, LoadOptions, DEFAULT_MARKER};
use subseg::eval::{self, Metric, DEFAULT_MAX_N};
use subseg::ortho::ScriptSpec;
use subseg::translit::{IndicScript, TransliterationTable};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsegStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    InvalidInput = 4,
    Panic = 5,
}

/// Opaque handle to a learned or loaded BPE model.
pub struct SubsegBpeModel(BpeModel);

/// Opaque handle to an orthographic script description.
pub struct SubsegScript(ScriptSpec);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SubsegStatus, String);

impl From<subseg::Error> for Failure {
    fn from(e: subseg::Error) -> Self {
        let status = match e {
            subseg::Error::Io { .. } => SubsegStatus::Io,
            subseg::Error::InvalidUtf8 { .. } => SubsegStatus::InvalidUtf8,
            _ => SubsegStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SubsegStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SubsegStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SubsegStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(
            SubsegStatus::NullPointer,
            format!("{name} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(SubsegStatus::InvalidUtf8, format!("{name}: {e}")))
}

fn null_check<T>(p: *const T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(
            SubsegStatus::NullPointer,
            format!("{name} is null"),
        ))
    } else {
        Ok(())
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| {
        Failure(
            SubsegStatus::InvalidInput,
            "output contains a nul byte".into(),
        )
    })?;
    *out = c.into_raw();
    Ok(())
}

fn corpus(text: &str) -> Result<Corpus, Failure> {
    Ok(Corpus::parse(text, LoadOptions::default())?)
}

fn segment_text(text: &str, segmenter: &dyn Segmenter) -> Result<String, Failure> {
    let lines = Codec::new(DEFAULT_MARKER).segment_corpus(&corpus(text)?, segmenter)?;
    let mut out = String::new();
    for line in lines {
        out.push_str(&line.to_string());
        out.push('\n');
    }
    Ok(out)
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn subseg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn subseg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Learns a BPE model with at most `num_merges` merges from a corpus.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn subseg_bpe_learn(
    text: *const c_char,
    num_merges: usize,
    out: *mut *mut SubsegBpeModel,
) -> SubsegStatus {
    guard(|| {
        null_check(out, "out")?;
        let corpus = corpus(str_arg(text, "text")?)?;
        let learned = bpe::learn_bpe(&corpus, num_merges)?;
        *out = Box::into_raw(Box::new(SubsegBpeModel(learned.model)));
        Ok(())
    })
}

/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn subseg_bpe_load(
    path: *const c_char,
    out: *mut *mut SubsegBpeModel,
) -> SubsegStatus {
    guard(|| {
        null_check(out, "out")?;
        let model = bpe::load_model(Path::new(str_arg(path, "path")?))?;
        *out = Box::into_raw(Box::new(SubsegBpeModel(model)));
        Ok(())
    })
}

/// # Safety
/// `model` must be a live handle; `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn subseg_bpe_save(
    model: *const SubsegBpeModel,
    path: *const c_char,
) -> SubsegStatus {
    guard(|| {
        null_check(model, "model")?;
        bpe::save_model(&(*model).0, Path::new(str_arg(path, "path")?))?;
        Ok(())
    })
}

/// Number of merges in the model; 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn subseg_bpe_num_merges(model: *const SubsegBpeModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.num_merges())
}

/// Segments each line of `text`, writing space-separated units with `_`
/// between words.
///
/// # Safety
/// `model` must be a live handle; `text` a nul-terminated string; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn subseg_bpe_segment(
    model: *const SubsegBpeModel,
    text: *const c_char,
    out: *mut *mut c_char,
) -> SubsegStatus {
    guard(|| {
        null_check(model, "model")?;
        null_check(out, "out")?;
        let s = segment_text(str_arg(text, "text")?, &(*model).0)?;
        write_string(out, s)
    })
}

/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn subseg_bpe_free(model: *mut SubsegBpeModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Looks up a built-in script by name (e.g. "latin", "hindi").
///
/// # Safety
/// `name` must be a nul-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subseg_script_builtin(
    name: *const c_char,
    out: *mut *mut SubsegScript,
) -> SubsegStatus {
    guard(|| {
        null_check(out, "out")?;
        let spec = ScriptSpec::builtin(str_arg(name, "name")?)?;
        *out = Box::into_raw(Box::new(SubsegScript(spec)));
        Ok(())
    })
}

/// Splits each line of `text` into orthographic syllables, in the same
/// format as [`subseg_bpe_segment`].
///
/// # Safety
/// `script` must be a live handle; `text` a nul-terminated string; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn subseg_script_segment(
    script: *const SubsegScript,
    text: *const c_char,
    out: *mut *mut c_char,
) -> SubsegStatus {
    guard(|| {
        null_check(script, "script")?;
        null_check(out, "out")?;
        let s = segment_text(str_arg(text, "text")?, &(*script).0)?;
        write_string(out, s)
    })
}

/// # Safety
/// `script` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn subseg_script_free(script: *mut SubsegScript) {
    if !script.is_null() {
        drop(Box::from_raw(script));
    }
}

/// Restores words from segmented lines.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subseg_desegment(
    text: *const c_char,
    out: *mut *mut c_char,
) -> SubsegStatus {
    guard(|| {
        null_check(out, "out")?;
        let codec = Codec::new(DEFAULT_MARKER);
        let mut s = String::new();
        for line in str_arg(text, "text")?.lines() {
            s.push_str(&codec.desegment_line(line).to_string());
            s.push('\n');
        }
        write_string(out, s)
    })
}

/// Transliterates between two Indic scripts named like "devanagari".
/// `unmappable` (may be null) receives the number of characters kept as-is.
///
/// # Safety
/// String arguments must be nul-terminated; `out` writable; `unmappable`
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn subseg_transliterate(
    text: *const c_char,
    from: *const c_char,
    to: *const c_char,
    out: *mut *mut c_char,
    unmappable: *mut usize,
) -> SubsegStatus {
    guard(|| {
        null_check(out, "out")?;
        let table = TransliterationTable::between(
            IndicScript::from_name(str_arg(from, "from")?)?,
            IndicScript::from_name(str_arg(to, "to")?)?,
        );
        let (s, n) = table.transliterate_counted(str_arg(text, "text")?);
        if !unmappable.is_null() {
            *unmappable = n;
        }
        write_string(out, s)
    })
}

/// Longest common subsequence ratio of two strings.
///
/// # Safety
/// `a` and `b` must be nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subseg_lcsr(
    a: *const c_char,
    b: *const c_char,
    out: *mut f64,
) -> SubsegStatus {
    guard(|| {
        null_check(out, "out")?;
        *out = subseg::simil::lcsr(str_arg(a, "a")?, str_arg(b, "b")?)?;
        Ok(())
    })
}

/// Corpus BLEU in [0, 1] over aligned lines. With `soft` set, n-grams match
/// when their character similarity reaches `threshold`.
///
/// # Safety
/// `hyps` and `refs` must be nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn subseg_bleu(
    hyps: *const c_char,
    refs: *const c_char,
    soft: bool,
    threshold: f64,
    out: *mut f64,
) -> SubsegStatus {
    guard(|| {
        null_check(out, "out")?;
        let metric = if soft {
            Metric::SoftBleu { threshold }
        } else {
            Metric::Bleu
        };
        let hyps = corpus(str_arg(hyps, "hyps")?)?;
        let refs = corpus(str_arg(refs, "refs")?)?;
        *out = eval::evaluate(&hyps, &refs, DEFAULT_MAX_N, metric)?.score;
        Ok(())
    })
}
