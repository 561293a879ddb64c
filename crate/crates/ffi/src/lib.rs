//! C ABI for the pipeline and the Legendrian arithmetic.
//!
//! Handles are opaque; every fallible call returns a `pb_status` code and
//! the last error message is kept per thread, readable with
//! `pb_last_error_message`. Strings returned to the caller are owned by the
//! callee until freed with `pb_string_free`. The header mirroring these
//! declarations lives in `include/platbook.h` and is checked against this
//! file by a test.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use num_rational::Rational64;

use platbook::braid::BraidWord;
use platbook::legendrian::{d3, negative_expansion, realize_pair, FourManifoldData};
use platbook::pipeline::{run_pipeline, PipelineConfig, PipelineRun};
use platbook::Error;

pub const PB_OK: i32 = 0;
pub const PB_ERR_NULL: i32 = 1;
pub const PB_ERR_UTF8: i32 = 2;
pub const PB_ERR_PARSE: i32 = 3;
pub const PB_ERR_CERTIFICATE: i32 = 4;
pub const PB_ERR_TOPOLOGY: i32 = 5;
pub const PB_ERR_CAPACITY: i32 = 6;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) => PB_ERR_PARSE,
        Error::Certificate(_) => PB_ERR_CERTIFICATE,
        _ => PB_ERR_TOPOLOGY,
    }
}

fn fail(e: &Error) -> i32 {
    set_error(&e.to_string());
    code_for(e)
}

/// Opaque pipeline result handle.
#[allow(non_camel_case_types)]
pub struct pb_run {
    run: PipelineRun,
}

/// Last error message for this thread; valid until the next failing call.
#[no_mangle]
pub extern "C" fn pb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Runs the whole pipeline on a braid word (whitespace-separated signed
/// generator indices, plat closure taken). `strands` 0 infers the count.
/// `ambient` may be null; otherwise it points to `ambient_len` framings,
/// each ±1. On success writes a handle to `out`.
#[no_mangle]
pub unsafe extern "C" fn pb_run_pipeline(
    word: *const c_char,
    strands: usize,
    positive_monodromy: i32,
    ambient: *const i64,
    ambient_len: usize,
    out: *mut *mut pb_run,
) -> i32 {
    if word.is_null() || out.is_null() || (ambient.is_null() && ambient_len > 0) {
        set_error("null pointer argument");
        return PB_ERR_NULL;
    }
    let Ok(text) = CStr::from_ptr(word).to_str() else {
        set_error("braid word is not valid UTF-8");
        return PB_ERR_UTF8;
    };
    let parsed = BraidWord::parse(text, if strands == 0 { None } else { Some(strands) });
    let braid = match parsed {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let mut cfg = match PipelineConfig::from_closure(&braid) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    cfg.positive_monodromy = positive_monodromy != 0;
    if ambient_len > 0 {
        cfg.ambient = std::slice::from_raw_parts(ambient, ambient_len).to_vec();
    }
    match run_pipeline(&cfg) {
        Ok(run) => {
            *out = Box::into_raw(Box::new(pb_run { run }));
            PB_OK
        }
        Err(e) => fail(&e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn pb_run_free(run: *mut pb_run) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// 1 if every certificate in the run passed, 0 otherwise (or on null).
#[no_mangle]
pub unsafe extern "C" fn pb_run_all_pass(run: *const pb_run) -> i32 {
    match run.as_ref() {
        Some(r) => r.run.all_pass() as i32,
        None => 0,
    }
}

/// Number of bindings of the resulting open book (0 on null).
#[no_mangle]
pub unsafe extern "C" fn pb_run_binding_count(run: *const pb_run) -> usize {
    match run.as_ref() {
        Some(r) => r.run.book.binding_count(),
        None => 0,
    }
}

fn export_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap().into_raw()
}

/// The open book in its text format. Free with pb_string_free.
#[no_mangle]
pub unsafe extern "C" fn pb_run_render_book(run: *const pb_run) -> *mut c_char {
    match run.as_ref() {
        Some(r) => export_string(r.run.book.render()),
        None => ptr::null_mut(),
    }
}

/// The certificate report text. Free with pb_string_free.
#[no_mangle]
pub unsafe extern "C" fn pb_run_render_report(run: *const pb_run) -> *mut c_char {
    match run.as_ref() {
        Some(r) => export_string(r.run.report()),
        None => ptr::null_mut(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn pb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// d3 = (c2 - 3 sigma - 2 chi)/4 + q as an exact fraction.
#[no_mangle]
pub unsafe extern "C" fn pb_d3(
    sigma: i64,
    chi: i64,
    c_squared: i64,
    plus_one_surgeries: i64,
    numer: *mut i64,
    denom: *mut i64,
) -> i32 {
    if numer.is_null() || denom.is_null() {
        set_error("null pointer argument");
        return PB_ERR_NULL;
    }
    let v = d3(&FourManifoldData { sigma, chi, c_squared, plus_one_surgeries });
    *numer = *v.numer();
    *denom = *v.denom();
    PB_OK
}

/// Expands p/q < 0: writes the entries (all <= -2) into `entries` and their
/// count into `len`. Fails with PB_ERR_CAPACITY if `cap` is too small.
#[no_mangle]
pub unsafe extern "C" fn pb_negative_expansion(
    p: i64,
    q: i64,
    entries: *mut i64,
    cap: usize,
    len: *mut usize,
) -> i32 {
    if entries.is_null() || len.is_null() {
        set_error("null pointer argument");
        return PB_ERR_NULL;
    }
    if q == 0 {
        set_error("zero denominator");
        return PB_ERR_PARSE;
    }
    let e = match negative_expansion(Rational64::new(p, q)) {
        Ok(e) => e,
        Err(err) => return fail(&err),
    };
    if e.entries.len() > cap {
        set_error("entry buffer too small");
        return PB_ERR_CAPACITY;
    }
    for (k, &x) in e.entries.iter().enumerate() {
        *entries.add(k) = x;
    }
    *len = e.entries.len();
    PB_OK
}

/// Plans moves from (tb0, rot0) to (tb1, rot1); writes the plan text.
/// Free with pb_string_free.
#[no_mangle]
pub unsafe extern "C" fn pb_realize_pair(
    tb0: i64,
    rot0: i64,
    tb1: i64,
    rot1: i64,
    plan: *mut *mut c_char,
) -> i32 {
    if plan.is_null() {
        set_error("null pointer argument");
        return PB_ERR_NULL;
    }
    match realize_pair((tb0, rot0), (tb1, rot1)) {
        Ok(p) => {
            *plan = export_string(p.render());
            PB_OK
        }
        Err(e) => fail(&e),
    }
}
