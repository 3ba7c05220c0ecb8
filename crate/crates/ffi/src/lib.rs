//! C ABI over `trialgebra`.
//!
//! Handles are opaque and owned by the caller; release them with the
//! matching `*_free`. Strings returned through `char **` out-parameters are
//! NUL-terminated JSON and must be released with `tg_string_free`. Every
//! entry point returns a `TgStatus`; on anything but `TG_STATUS_OK` a message
//! is available from `tg_last_error` until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use trialgebra::config::{Caps, SweepPolicy};
use trialgebra::error::Error;
use trialgebra::free_malcev::free_malcev_dims;
use trialgebra::io::{loop_file, parse_input, to_canonical, Input};
use trialgebra::moufang::{check_moufang, Loop};
use trialgebra::pipeline::{fleet_input, FleetInput};
use trialgebra::triality::full_report;

/// Result of every call. Values match the command-line exit codes where they overlap.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgStatus {
    Ok = 0,
    /// A check ran and failed.
    Fail = 1,
    /// Malformed JSON or an input that is not a valid group, loop or triality.
    InvalidInput = 2,
    NullPointer = 3,
    /// A size cap was hit.
    CapExceeded = 4,
    /// The call does not apply to this kind of input.
    Unsupported = 5,
    Panic = 6,
}

/// A triality input: a certified group with triality or the
/// three-dimensional Lie example.
pub struct TgTriality {
    input: FleetInput,
}

pub struct TgLoop {
    inner: Loop,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> TgStatus {
    match e {
        Error::CapExceeded { .. } | Error::OrderCap { .. } => TgStatus::CapExceeded,
        _ if e.exit_code() == 2 => TgStatus::InvalidInput,
        _ => TgStatus::Fail,
    }
}

fn guard(f: impl FnOnce() -> Result<TgStatus, (TgStatus, String)>) -> TgStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            TgStatus::Panic
        }
    }
}

fn fail(e: Error) -> (TgStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TgStatus, String) {
    (TgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (TgStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (TgStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (TgStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| (TgStatus::Panic, "interior NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn to_json(value: &impl serde::Serialize) -> Result<String, (TgStatus, String)> {
    to_canonical(value).map(|s| s.trim_end().to_string()).map_err(fail)
}

/// Message for the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn tg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn tg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a triality or descriptor JSON document and certifies it.
/// Uncertifiable triality files give `TG_STATUS_FAIL`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_triality_from_json(json: *const c_char, out: *mut *mut TgTriality) -> TgStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let input = parse_input(text).map_err(fail)?;
        let input = fleet_input("ffi", input).map_err(fail)?;
        *out = Box::into_raw(Box::new(TgTriality { input }));
        Ok(TgStatus::Ok)
    })
}

/// # Safety
/// `t` must come from `tg_triality_from_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tg_triality_free(t: *mut TgTriality) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Order of the underlying group; 0 for the Lie example.
///
/// # Safety
/// `t` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tg_triality_group_order(t: *const TgTriality, out: *mut usize) -> TgStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("handle"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = match &t.input {
            FleetInput::Group { triality, .. } => triality.group().order(),
            FleetInput::Example { .. } => 0,
        };
        Ok(TgStatus::Ok)
    })
}

/// Checks the triality axioms of a JSON document without certifying it.
/// Writes the itemized report as JSON; `TG_STATUS_FAIL` if any check fails.
///
/// # Safety
/// `json` must be a NUL-terminated string; `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_check_triality_json(json: *const c_char, report: *mut *mut c_char) -> TgStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let rep = match parse_input(text).map_err(fail)? {
            Input::Raw(r) => r.verify(),
            Input::Certified(t) => trialgebra::triality::verify_triality(t.group(), t.rho(), t.sigma()),
            Input::Example { p, sigma_sign } => {
                trialgebra::graded_lie::example_4_algebra(p, sigma_sign)
                    .map_err(fail)?
                    .report
            }
        };
        write_string(report, to_json(&rep)?)?;
        Ok(if rep.any_failed() { TgStatus::Fail } else { TgStatus::Ok })
    })
}

/// Extracts the Moufang loop. Writes the Moufang check report as JSON when
/// `report` is not NULL.
///
/// # Safety
/// `t` must be a live handle, `out` writable, `report` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn tg_extract_loop(
    t: *const TgTriality,
    out: *mut *mut TgLoop,
    report: *mut *mut c_char,
) -> TgStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let FleetInput::Group { triality, .. } = &t.input else {
            return Err((TgStatus::Unsupported, "the Lie example has no loop".into()));
        };
        let policy = SweepPolicy::from_env();
        let (l, mut rep) = full_report(triality, &policy).map_err(fail)?;
        rep.extend(check_moufang(&l.loop_, &policy));
        if !report.is_null() {
            write_string(report, to_json(&rep)?)?;
        }
        *out = Box::into_raw(Box::new(TgLoop { inner: l.loop_ }));
        Ok(if rep.any_failed() { TgStatus::Fail } else { TgStatus::Ok })
    })
}

/// # Safety
/// `l` must come from `tg_extract_loop` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tg_loop_free(l: *mut TgLoop) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// # Safety
/// `l` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tg_loop_order(l: *const TgLoop, out: *mut usize) -> TgStatus {
    guard(|| {
        let l = l.as_ref().ok_or_else(|| null("handle"))?;
        *out.as_mut().ok_or_else(|| null("out"))? = l.inner.order();
        Ok(TgStatus::Ok)
    })
}

/// Product of loop elements `a` and `b` (0-based, 0 is the identity).
///
/// # Safety
/// `l` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tg_loop_mul(l: *const TgLoop, a: usize, b: usize, out: *mut usize) -> TgStatus {
    guard(|| {
        let l = l.as_ref().ok_or_else(|| null("handle"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let n = l.inner.order();
        if a >= n || b >= n {
            return Err(fail(Error::IndexOutOfRange {
                index: a.max(b),
                order: n,
            }));
        }
        *out = l.inner.mul(a as u32, b as u32) as usize;
        Ok(TgStatus::Ok)
    })
}

/// The loop as a `{"order", "table"}` JSON document.
///
/// # Safety
/// `l` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tg_loop_to_json(l: *const TgLoop, out: *mut *mut c_char) -> TgStatus {
    guard(|| {
        let l = l.as_ref().ok_or_else(|| null("handle"))?;
        write_string(out, to_json(&loop_file(&l.inner))?)?;
        Ok(TgStatus::Ok)
    })
}

/// Runs the full pipeline at prime `p` and exponent `p^n`; 0 for either
/// picks the value derived from the input. `TG_STATUS_OK` when every check
/// passes or, for the Lie example, fails exactly where expected.
///
/// # Safety
/// `t` must be a live handle and `report` writable.
#[no_mangle]
pub unsafe extern "C" fn tg_run_pipeline(t: *const TgTriality, p: u32, n: u32, report: *mut *mut c_char) -> TgStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("handle"))?;
        let mut input = t.input.clone();
        match &mut input {
            FleetInput::Group { p: ip, n: inn, .. } => {
                if p != 0 {
                    *ip = p;
                }
                if n != 0 {
                    *inn = n;
                }
            }
            FleetInput::Example { p: ip, .. } => {
                if p != 0 {
                    *ip = p;
                }
            }
        }
        let rep = input.run(&Caps::from_env(), &SweepPolicy::from_env()).map_err(fail)?;
        let mut failed = rep.report.failed_checks();
        failed.sort();
        let mut want = input.expected_failures();
        want.sort();
        write_string(report, to_json(&rep)?)?;
        Ok(if failed == want { TgStatus::Ok } else { TgStatus::Fail })
    })
}

/// Dimensions of the degree `1..=max_degree` components of the free Malcev
/// algebra on `m` generators over `F_p`, written to `totals[0..max_degree]`.
///
/// # Safety
/// `totals` must have room for `len >= max_degree` entries.
#[no_mangle]
pub unsafe extern "C" fn tg_free_malcev_dims(
    m: usize,
    p: u32,
    max_degree: usize,
    totals: *mut usize,
    len: usize,
) -> TgStatus {
    guard(|| {
        if totals.is_null() {
            return Err(null("totals"));
        }
        if len < max_degree {
            return Err((
                TgStatus::InvalidInput,
                format!("buffer of {len} for {max_degree} degrees"),
            ));
        }
        let t = free_malcev_dims(m, p, max_degree, &Caps::from_env()).map_err(fail)?;
        let out = std::slice::from_raw_parts_mut(totals, len);
        out[..t.totals.len()].copy_from_slice(&t.totals);
        Ok(TgStatus::Ok)
    })
}
