//! C ABI over the thetastrat engine.
//!
//! Every function returns a [`ThetaStatus`]; on failure the message is
//! available from [`theta_last_error_message`] until the next call on the
//! same thread. Strings handed out by the library are released with
//! [`theta_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use thetastrat::cli::sheaf_from_json;
use thetastrat::gradedalg::FreeComplex;
use thetastrat::kloc::{verify_localization, LocalizationOptions, Verdict};
use thetastrat::stack::StackModel;
use thetastrat::strat::git_stratify;
use thetastrat::{Error, ErrorKind};

/// Opaque model handle.
pub struct ThetaModel {
    inner: StackModel,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaStatus {
    Ok = 0,
    MathFailure = 1,
    Indeterminate = 2,
    InputError = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaVerdict {
    Verified = 0,
    Mismatch = 1,
    Indeterminate = 2,
}

/// Flattened localization report. `*_known` is 0 when the term is unavailable.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ThetaLocalizationSummary {
    pub lhs: i64,
    pub lhs_known: u8,
    pub semistable: i64,
    pub semistable_known: u8,
    pub correction_sum: i64,
    pub corrections_known: u8,
    pub n_strata: usize,
    pub verdict: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ThetaStatus {
    match e.kind() {
        ErrorKind::Math => ThetaStatus::MathFailure,
        ErrorKind::Indeterminate => ThetaStatus::Indeterminate,
        ErrorKind::Input => ThetaStatus::InputError,
    }
}

fn guarded(f: impl FnOnce() -> Result<(), ThetaStatus>) -> ThetaStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ThetaStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside thetastrat");
            ThetaStatus::Panic
        }
    }
}

fn fail(e: Error) -> ThetaStatus {
    set_error(&e.to_string());
    status_of(&e)
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, ThetaStatus> {
    if p.is_null() {
        set_error(&format!("{what} is null"));
        return Err(ThetaStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(&format!("{what} is not UTF-8"));
        ThetaStatus::InputError
    })
}

fn hand_out(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Parses and validates a model. On success `*out` owns a handle to be
/// released with [`theta_model_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn theta_model_from_json(json: *const c_char, out: *mut *mut ThetaModel) -> ThetaStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out is null");
            return Err(ThetaStatus::NullPointer);
        }
        *out = ptr::null_mut();
        let text = read_str(json, "json")?;
        let inner = StackModel::from_json(text).map_err(fail)?;
        *out = Box::into_raw(Box::new(ThetaModel { inner }));
        Ok(())
    })
}

/// # Safety
/// `model` must come from [`theta_model_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn theta_model_free(model: *mut ThetaModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Writes the stratification as a JSON string to `*out`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn theta_stratify_json(model: *const ThetaModel, out: *mut *mut c_char) -> ThetaStatus {
    guarded(|| {
        if model.is_null() || out.is_null() {
            set_error("model or out is null");
            return Err(ThetaStatus::NullPointer);
        }
        *out = ptr::null_mut();
        let m = &(*model).inner;
        let strata = git_stratify(m).map_err(fail)?;
        let rows: Vec<serde_json::Value> = strata
            .iter()
            .map(|s| {
                serde_json::json!({
                    "lambda": s.lambda.components(),
                    "mu": s.mu.render(),
                    "supports": s.supports,
                    "stratum": s.a.to_string(),
                    "fixed_locus": s.b.to_string(),
                    "flags": s.flags,
                })
            })
            .collect();
        *out = hand_out(serde_json::Value::Array(rows).to_string());
        Ok(())
    })
}

/// Runs the localization check for `sheaf_json` (the structure sheaf when
/// null) and fills `*out`. The return status reflects errors only; the
/// verdict is in the summary.
///
/// # Safety
/// `model` must be a live handle; `sheaf_json` null or NUL-terminated;
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn theta_verify_localization(
    model: *const ThetaModel,
    sheaf_json: *const c_char,
    degree_bound: u32,
    out: *mut ThetaLocalizationSummary,
) -> ThetaStatus {
    guarded(|| {
        if model.is_null() || out.is_null() {
            set_error("model or out is null");
            return Err(ThetaStatus::NullPointer);
        }
        let m = &(*model).inner;
        let f = if sheaf_json.is_null() {
            FreeComplex::unit(m.cdga().clone())
        } else {
            sheaf_from_json(m, read_str(sheaf_json, "sheaf_json")?).map_err(fail)?
        };
        let opts = LocalizationOptions { cutoff: None, degree_bound };
        let r = verify_localization(m, &f, opts).map_err(fail)?;
        let sum: Option<i64> = r.corrections.iter().map(|c| c.term.value).sum();
        *out = ThetaLocalizationSummary {
            lhs: r.lhs.value.unwrap_or(0),
            lhs_known: r.lhs.value.is_some() as u8,
            semistable: r.semistable.value.unwrap_or(0),
            semistable_known: r.semistable.value.is_some() as u8,
            correction_sum: sum.unwrap_or(0),
            corrections_known: sum.is_some() as u8,
            n_strata: r.corrections.len(),
            verdict: match r.verdict {
                Verdict::Verified => ThetaVerdict::Verified,
                Verdict::Mismatch => ThetaVerdict::Mismatch,
                Verdict::Indeterminate => ThetaVerdict::Indeterminate,
            } as i32,
        };
        Ok(())
    })
}

/// Message of the last failure on this thread; empty after a success.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn theta_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn theta_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
