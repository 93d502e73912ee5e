//! C interface to `fil-core`.
//!
//! Fallible calls return a [`FilStatus`]. On anything other than
//! `FIL_STATUS_OK` a message is available from [`fil_last_error`] until the
//! next call on the same thread. Handles are opaque and owned by the caller;
//! release them with the matching `_free` function, and strings with
//! [`fil_string_free`]. Output pointers are written only on success.
//!
//! Every pointer argument must be null or valid: strings NUL-terminated,
//! handles live and not yet freed, output pointers writable. Null is
//! reported as `FIL_STATUS_NULL_POINTER` rather than dereferenced.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fil_core::formula::parse;
use fil_core::kernel::{check, parse_derivation, print_derivation, to_ilp, Derivation, ToIlpError};
use fil_core::synth;
use fil_core::veltman::{countermodel_search, print_model, SearchBudget, SearchOutcome, VeltmanModel};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilStatus {
    Ok = 0,
    /// The kernel rejected a derivation.
    Rejected = 1,
    /// The search finished its budget without a countermodel.
    NotFound = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    ParseError = 6,
    InvalidArgument = 7,
    /// A bug inside the library; the message says where.
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilTarget {
    W = 0,
    M0 = 1,
    R = 2,
    /// Needs `n`.
    Slim = 3,
    /// Needs `n`; 0 gives R.
    Broad = 4,
}

/// A parsed derivation.
pub struct FilDerivation {
    inner: Derivation,
}

/// A countermodel together with the world where the formula fails.
pub struct FilModel {
    model: VeltmanModel,
    world: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

type Outcome = Result<FilStatus, (FilStatus, String)>;

/// Clears the error slot, runs `body`, and turns errors and panics into statuses.
fn guard(body: impl FnOnce() -> Outcome) -> FilStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let what = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {what}"));
            FilStatus::Internal
        }
    }
}

fn null(what: &str) -> (FilStatus, String) {
    (FilStatus::NullPointer, format!("{what} is null"))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (FilStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (FilStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, (FilStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

fn out_ptr<T>(out: *mut *mut T) -> Result<(), (FilStatus, String)> {
    if out.is_null() {
        Err(null("output pointer"))
    } else {
        Ok(())
    }
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> Outcome {
    let c = CString::new(s).map_err(|e| (FilStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(FilStatus::Ok)
}

/// Parses derivation text into a new handle.
#[no_mangle]
pub unsafe extern "C" fn fil_derivation_parse(
    text: *const c_char,
    out: *mut *mut FilDerivation,
) -> FilStatus {
    guard(|| {
        out_ptr(out)?;
        let src = c_str(text, "text")?;
        let inner = parse_derivation(src).map_err(|e| (FilStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(FilDerivation { inner }));
        Ok(FilStatus::Ok)
    })
}

/// `FIL_STATUS_OK` if the kernel accepts every line, `FIL_STATUS_REJECTED`
/// otherwise, with the first error as the message.
#[no_mangle]
pub unsafe extern "C" fn fil_derivation_check(d: *const FilDerivation) -> FilStatus {
    guard(|| {
        let d = handle(d, "derivation")?;
        let report = check(&d.inner);
        match report.errors.first() {
            None if report.accepted => Ok(FilStatus::Ok),
            Some(e) => Err((
                FilStatus::Rejected,
                format!("{} at line {}: {}", e.error.kind(), line_of(e.line), e.error),
            )),
            None => Err((FilStatus::Rejected, "rejected".into())),
        }
    })
}

fn line_of(line: Option<usize>) -> String {
    line.map_or("-".into(), |l| l.to_string())
}

/// Number of lines; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fil_derivation_line_count(d: *const FilDerivation) -> usize {
    d.as_ref().map_or(0, |d| d.inner.lines.len())
}

/// The theorem of an accepted derivation, as `Γ |- C` text.
#[no_mangle]
pub unsafe extern "C" fn fil_derivation_theorem(d: *const FilDerivation, out: *mut *mut c_char) -> FilStatus {
    guard(|| {
        out_ptr(out)?;
        let d = handle(d, "derivation")?;
        let report = check(&d.inner);
        match report.theorem {
            Some(j) if report.accepted => give_string(out, j.to_string()),
            _ => Err((FilStatus::Rejected, "derivation is not accepted".into())),
        }
    })
}

/// The derivation in the text format.
#[no_mangle]
pub unsafe extern "C" fn fil_derivation_print(d: *const FilDerivation, out: *mut *mut c_char) -> FilStatus {
    guard(|| {
        out_ptr(out)?;
        let d = handle(d, "derivation")?;
        give_string(out, print_derivation(&d.inner))
    })
}

/// Erases all labels, giving a derivation in ILP mode.
#[no_mangle]
pub unsafe extern "C" fn fil_derivation_erase(
    d: *const FilDerivation,
    out: *mut *mut FilDerivation,
) -> FilStatus {
    guard(|| {
        out_ptr(out)?;
        let d = handle(d, "derivation")?;
        let inner = to_ilp(&d.inner).map_err(|e| match e {
            ToIlpError::NotAccepted(_) => (FilStatus::Rejected, e.to_string()),
            _ => (FilStatus::InvalidArgument, e.to_string()),
        })?;
        *out = Box::into_raw(Box::new(FilDerivation { inner }));
        Ok(FilStatus::Ok)
    })
}

/// Releases a derivation handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fil_derivation_free(d: *mut FilDerivation) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Synthesizes a checked derivation. `n` is used by the series targets only.
#[no_mangle]
pub unsafe extern "C" fn fil_prove(target: FilTarget, n: usize, out: *mut *mut FilDerivation) -> FilStatus {
    guard(|| {
        out_ptr(out)?;
        let made = match target {
            FilTarget::W => synth::derive_w(),
            FilTarget::M0 => synth::derive_m0(),
            FilTarget::R => synth::derive_r(),
            FilTarget::Slim => synth::derive_slim(n),
            FilTarget::Broad => synth::derive_broad(n),
        };
        let inner = made.map_err(|e| (FilStatus::Internal, e.to_string()))?;
        *out = Box::into_raw(Box::new(FilDerivation { inner }));
        Ok(FilStatus::Ok)
    })
}

/// Looks for the least model with at most `max_worlds` worlds falsifying a
/// label-free formula. `FIL_STATUS_OK` with a model, `FIL_STATUS_NOT_FOUND`
/// when the formula holds throughout the budget, `FIL_STATUS_BUDGET_EXCEEDED`
/// when the budget cannot be searched.
#[no_mangle]
pub unsafe extern "C" fn fil_search(
    formula: *const c_char,
    max_worlds: u32,
    max_letters: u32,
    out: *mut *mut FilModel,
) -> FilStatus {
    guard(|| {
        out_ptr(out)?;
        let f = parse(c_str(formula, "formula")?).map_err(|e| (FilStatus::ParseError, e.to_string()))?;
        let budget = SearchBudget { max_worlds: max_worlds as usize, max_letters: max_letters as usize };
        match countermodel_search(&f, budget).map_err(|e| (FilStatus::InvalidArgument, e.to_string()))? {
            SearchOutcome::Found(cm) => {
                *out = Box::into_raw(Box::new(FilModel { model: cm.model, world: cm.world }));
                Ok(FilStatus::Ok)
            }
            SearchOutcome::ValidWithinBudget => {
                Err((FilStatus::NotFound, "valid on every model within the budget".into()))
            }
            SearchOutcome::BudgetExceeded(why) => Err((FilStatus::BudgetExceeded, why)),
        }
    })
}

/// The world where the formula fails; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fil_model_world(m: *const FilModel) -> u32 {
    m.as_ref().map_or(0, |m| m.world as u32)
}

/// Number of worlds; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn fil_model_worlds(m: *const FilModel) -> u32 {
    m.as_ref().map_or(0, |m| m.model.frame.worlds() as u32)
}

/// The model in the plain-text model format.
#[no_mangle]
pub unsafe extern "C" fn fil_model_print(m: *const FilModel, out: *mut *mut c_char) -> FilStatus {
    guard(|| {
        out_ptr(out)?;
        give_string(out, print_model(&handle(m, "model")?.model))
    })
}

/// Releases a model handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fil_model_free(m: *mut FilModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fil_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn fil_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status, such as `"rejected"`.
#[no_mangle]
pub extern "C" fn fil_status_name(status: FilStatus) -> *const c_char {
    let s: &'static CStr = match status {
        FilStatus::Ok => c"ok",
        FilStatus::Rejected => c"rejected",
        FilStatus::NotFound => c"not found",
        FilStatus::BudgetExceeded => c"budget exceeded",
        FilStatus::NullPointer => c"null pointer",
        FilStatus::InvalidUtf8 => c"invalid utf-8",
        FilStatus::ParseError => c"parse error",
        FilStatus::InvalidArgument => c"invalid argument",
        FilStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn fil_version() -> *const c_char {
    const V: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    V.as_ptr().cast()
}
