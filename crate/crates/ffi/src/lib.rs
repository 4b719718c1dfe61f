//! C interface to `hfmodel`.
//!
//! Objects are opaque handles created by `*_new`/`*_parse` functions and
//! released with the matching `*_free`. Every fallible call returns an
//! [`HfStatus`]; on failure `hf_last_error` describes the most recent error
//! on the calling thread. Strings returned through `char **` are owned by the
//! caller and must be released with `hf_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::str::FromStr;
use std::sync::Arc;

use hfmodel::approx::{BoundedZfPackage, GenericPackage, Package, ScriptedInjury};
use hfmodel::construction::{check_global, run, Run};
use hfmodel::fol::parse;
use hfmodel::hf::{iack, iack_inv, HfSet};
use hfmodel::srel::{decide_s, indef_witness};
use hfmodel::Error;
use num_bigint::BigUint;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HfStatus {
    Ok = 0,
    NullArgument = 1,
    Parse = 2,
    Budget = 3,
    Precondition = 4,
    Internal = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

/// An immutable hereditarily finite set.
pub struct HfSetHandle(HfSet);

/// A theory package.
pub struct HfPackage(Package);

/// A finished construction run.
pub struct HfRun(Run);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn remember(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HfStatus {
    match e {
        Error::Parse(_) => HfStatus::Parse,
        Error::Budget(_) => HfStatus::Budget,
        Error::Precondition(_) | Error::MissingDefinition(_) | Error::Arity(_) => HfStatus::Precondition,
        Error::Internal(_) | Error::Io(_) => HfStatus::Internal,
    }
}

type Ffi<T> = std::result::Result<T, (HfStatus, String)>;

fn lib<T>(r: hfmodel::Result<T>) -> Ffi<T> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Ffi<()>) -> HfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HfStatus::Ok,
        Ok(Err((status, msg))) => {
            remember(msg);
            status
        }
        Err(_) => {
            remember("panic inside hfmodel".to_string());
            HfStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Ffi<&'a str> {
    if p.is_null() {
        return Err((HfStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (HfStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn obj<'a, T>(p: *const T) -> Ffi<&'a T> {
    p.as_ref()
        .ok_or_else(|| (HfStatus::NullArgument, "null handle".into()))
}

unsafe fn put<T>(out: *mut T, v: T) -> Ffi<()> {
    if out.is_null() {
        return Err((HfStatus::NullArgument, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Ffi<()> {
    let c = CString::new(s).map_err(|_| (HfStatus::Internal, "string with nul byte".into()))?;
    put(out, c.into_raw())
}

/// Copies the last error message of this thread into `*out`, or stores
/// null if there is none.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_last_error(out: *mut *mut c_char) -> HfStatus {
    guard(|| {
        let msg = LAST_ERROR.with(|e| e.borrow().clone());
        put(out, msg.map_or(ptr::null_mut(), CString::into_raw))
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a set literal such as `{{},{{}}}`.
///
/// # Safety
/// `src` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_set_parse(src: *const c_char, out: *mut *mut HfSetHandle) -> HfStatus {
    guard(|| {
        let s = HfSet::from_str(str_arg(src)?).map_err(|e| (HfStatus::Parse, e.to_string()))?;
        put(out, Box::into_raw(Box::new(HfSetHandle(s))))
    })
}

/// # Safety
/// `set` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hf_set_free(set: *mut HfSetHandle) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Prints a set in literal syntax.
///
/// # Safety
/// `set` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_set_to_string(set: *const HfSetHandle, out: *mut *mut c_char) -> HfStatus {
    guard(|| put_string(out, obj(set)?.0.to_string()))
}

/// The Ackermann code of a set, in decimal.
///
/// # Safety
/// `set` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_iack(set: *const HfSetHandle, out: *mut *mut c_char) -> HfStatus {
    guard(|| put_string(out, lib(iack(&obj(set)?.0))?.to_string()))
}

/// The set with the given decimal Ackermann code.
///
/// # Safety
/// `decimal` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_iack_inv(decimal: *const c_char, out: *mut *mut HfSetHandle) -> HfStatus {
    guard(|| {
        let src = str_arg(decimal)?;
        let n = BigUint::from_str(src.trim()).map_err(|_| (HfStatus::Parse, format!("`{src}` is not a natural")))?;
        put(out, Box::into_raw(Box::new(HfSetHandle(iack_inv(&n)))))
    })
}

/// Membership of `(a, b, c)` in `S`.
///
/// # Safety
/// The handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_decide_s(
    a: *const HfSetHandle,
    b: *const HfSetHandle,
    c: *const HfSetHandle,
    out: *mut bool,
) -> HfStatus {
    guard(|| put(out, decide_s(&obj(a)?.0, &obj(b)?.0, &obj(c)?.0)))
}

/// A set `c` with `¬S(a, b, c)`; requires `a ∉ b`.
///
/// # Safety
/// The handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_indef_witness(
    a: *const HfSetHandle,
    b: *const HfSetHandle,
    out: *mut *mut HfSetHandle,
) -> HfStatus {
    guard(|| {
        let w = lib(indef_witness(&obj(a)?.0, &obj(b)?.0))?;
        put(out, Box::into_raw(Box::new(HfSetHandle(w))))
    })
}

/// `name` is `generic` or `bounded_zf`. `max_steps = 0` leaves the
/// refutation budget uncapped.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_package_new(
    name: *const c_char,
    seed: u64,
    max_steps: usize,
    screen_rank: u32,
    out: *mut *mut HfPackage,
) -> HfStatus {
    guard(|| {
        let steps = (max_steps > 0).then_some(max_steps);
        let pkg: Package = match str_arg(name)? {
            "generic" => Arc::new(GenericPackage::new(seed, steps)),
            "bounded_zf" => Arc::new(BoundedZfPackage::new(seed, steps, screen_rank)),
            other => return Err((HfStatus::Precondition, format!("unknown package `{other}`"))),
        };
        put(out, Box::into_raw(Box::new(HfPackage(pkg))))
    })
}

/// The generic package with the decision on `literal`'s atom flipped in
/// `u_i` for `i < until`.
///
/// # Safety
/// `literal` must be a nul-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_package_new_injury(
    seed: u64,
    literal: *const c_char,
    until: usize,
    out: *mut *mut HfPackage,
) -> HfStatus {
    guard(|| {
        let f = parse(str_arg(literal)?).map_err(|e| (HfStatus::Parse, e.to_string()))?;
        let pkg: Package = Arc::new(ScriptedInjury::new(seed, f, until));
        put(out, Box::into_raw(Box::new(HfPackage(pkg))))
    })
}

/// # Safety
/// `pkg` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hf_package_free(pkg: *mut HfPackage) {
    if !pkg.is_null() {
        drop(Box::from_raw(pkg));
    }
}

/// Runs `stages` stages of the construction.
///
/// # Safety
/// `pkg` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_run_new(pkg: *const HfPackage, stages: usize, out: *mut *mut HfRun) -> HfStatus {
    guard(|| {
        let p = obj(pkg)?;
        let mut meta = std::collections::BTreeMap::new();
        meta.insert("package".to_string(), p.0.name().to_string());
        meta.insert("horizon.stages".to_string(), stages.to_string());
        let r = run(p.0.as_ref(), stages, meta);
        put(out, Box::into_raw(Box::new(HfRun(r))))
    })
}

/// # Safety
/// `r` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hf_run_free(r: *mut HfRun) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// The trace file text of a run.
///
/// # Safety
/// `r` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_run_trace(r: *const HfRun, out: *mut *mut c_char) -> HfStatus {
    guard(|| put_string(out, obj(r)?.0.trace.to_string()))
}

/// Number of recorded snapshots, including the initial one.
///
/// # Safety
/// `r` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_run_len(r: *const HfRun, out: *mut usize) -> HfStatus {
    guard(|| put(out, obj(r)?.0.trace.snapshots.len()))
}

/// Whether every stage passed L1–L6 and the global checks pass over
/// `window`. `report` may be null; otherwise it receives the global report.
///
/// # Safety
/// `r` must be a live handle, `passed` valid for writes, and `report` null
/// or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hf_run_check(
    r: *const HfRun,
    window: usize,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> HfStatus {
    guard(|| {
        let run = &obj(r)?.0;
        if let Some(e) = &run.error {
            return Err((status_of(e), e.to_string()));
        }
        let global = check_global(&run.trace, window, &run.last_u);
        let ok = global.ok() && run.local.iter().all(|l| l.ok());
        if !report.is_null() {
            put_string(report, global.to_string())?;
        }
        put(passed, ok)
    })
}
