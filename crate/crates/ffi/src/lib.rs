//! C interface to `hecke-mahler`.
//!
//! Every function returns an [`HmStatus`]; on failure the message is available from
//! [`hm_last_error`] on the same thread. Strings handed out by the library are released
//! with [`hm_string_free`], expansions with [`hm_expansion_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hecke_mahler::report::{eval_json, exponent_json, expand_json, Params};
use hecke_mahler::Error;

/// Result codes; 2, 3 and 4 match the command line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HmStatus {
    Ok = 0,
    Internal = 1,
    InvalidInput = 2,
    Undecidable = 3,
    Verification = 4,
    NullPointer = 5,
    OutOfRange = 6,
}

impl From<&Error> for HmStatus {
    fn from(e: &Error) -> Self {
        match e.exit_code() {
            2 => HmStatus::InvalidInput,
            3 => HmStatus::Undecidable,
            4 => HmStatus::Verification,
            _ => HmStatus::Internal,
        }
    }
}

/// Opaque continued fraction expansion.
pub struct HmExpansion {
    head: Option<String>,
    terms: Vec<String>,
    json: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: HmStatus, msg: &str) -> HmStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), (HmStatus, String)>) -> HmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HmStatus::Ok
        }
        Ok(Err((s, msg))) => fail(s, &msg),
        Err(_) => fail(HmStatus::Internal, "internal panic"),
    }
}

fn lib_err(e: Error) -> (HmStatus, String) {
    (HmStatus::from(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (HmStatus, String)> {
    if p.is_null() {
        return Err((HmStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (HmStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn params(slope: *const c_char, rho: *const c_char, b: u64, a: u64) -> Result<Params, (HmStatus, String)> {
    let slope = read_str(slope, "slope")?;
    let rho = read_str(rho, "rho")?;
    Params::parse(slope, rho, b, a).map_err(lib_err)
}

unsafe fn give_string(s: String, out: *mut *mut c_char) -> Result<(), (HmStatus, String)> {
    if out.is_null() {
        return Err((HmStatus::NullPointer, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| (HmStatus::Internal, "string holds a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failure on this thread; empty after a success. Owned by the library.
#[no_mangle]
pub extern "C" fn hm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Expands `xi` for slope `slope` (`per:[...;...]` or `surd:(P,D,Q)`), intercept `rho`
/// (`rat(p/q)`, `surd(P,D,Q)` or `digits[...]`) and the point `(1/b, 1/a)`, keeping `n`
/// partial quotients after the head.
///
/// # Safety
/// `slope` and `rho` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_expansion_new(
    slope: *const c_char,
    rho: *const c_char,
    b: u64,
    a: u64,
    n: usize,
    out: *mut *mut HmExpansion,
) -> HmStatus {
    guard(|| {
        if out.is_null() {
            return Err((HmStatus::NullPointer, "output pointer is null".into()));
        }
        *out = ptr::null_mut();
        let p = params(slope, rho, b, a)?;
        let doc = expand_json(&p, n).map_err(lib_err)?;
        let terms = doc["A"]
            .as_array()
            .map(|v| v.iter().filter_map(|x| x.as_str().map(str::to_owned)).collect())
            .unwrap_or_default();
        let head = doc.get("head").and_then(|h| h.as_str()).map(str::to_owned);
        let json = serde_json::to_string(&doc).map_err(|e| (HmStatus::Internal, e.to_string()))?;
        *out = Box::into_raw(Box::new(HmExpansion { head, terms, json }));
        Ok(())
    })
}

/// Releases an expansion. Null is ignored.
///
/// # Safety
/// `h` must come from [`hm_expansion_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hm_expansion_free(h: *mut HmExpansion) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of integer partial quotients held; 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live expansion.
#[no_mangle]
pub unsafe extern "C" fn hm_expansion_len(h: *const HmExpansion) -> usize {
    h.as_ref().map_or(0, |e| e.terms.len())
}

/// 1 when the expansion starts with a fractional head, 0 otherwise or for a null handle.
///
/// # Safety
/// `h` must be null or a live expansion.
#[no_mangle]
pub unsafe extern "C" fn hm_expansion_is_improper(h: *const HmExpansion) -> i32 {
    h.as_ref().map_or(0, |e| e.head.is_some() as i32)
}

/// Partial quotient `i` (from 0) as a decimal string.
///
/// # Safety
/// `h` must be a live expansion; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_expansion_term(h: *const HmExpansion, i: usize, out: *mut *mut c_char) -> HmStatus {
    guard(|| {
        let e = h.as_ref().ok_or((HmStatus::NullPointer, "expansion is null".to_string()))?;
        let t = e
            .terms
            .get(i)
            .ok_or((HmStatus::OutOfRange, format!("index {i} out of range ({} terms)", e.terms.len())))?;
        give_string(t.clone(), out)
    })
}

/// Fractional head as `p/q`; fails with `OutOfRange` when the expansion has none.
///
/// # Safety
/// `h` must be a live expansion; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_expansion_head(h: *const HmExpansion, out: *mut *mut c_char) -> HmStatus {
    guard(|| {
        let e = h.as_ref().ok_or((HmStatus::NullPointer, "expansion is null".to_string()))?;
        let head = e.head.clone().ok_or((HmStatus::OutOfRange, "expansion has no fractional head".to_string()))?;
        give_string(head, out)
    })
}

/// The full expansion report as JSON.
///
/// # Safety
/// `h` must be a live expansion; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_expansion_json(h: *const HmExpansion, out: *mut *mut c_char) -> HmStatus {
    guard(|| {
        let e = h.as_ref().ok_or((HmStatus::NullPointer, "expansion is null".to_string()))?;
        give_string(e.json.clone(), out)
    })
}

/// Certified enclosures of `xi` by two routes, as JSON.
///
/// # Safety
/// `slope` and `rho` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_eval_json(
    slope: *const c_char,
    rho: *const c_char,
    b: u64,
    a: u64,
    bits: u32,
    out: *mut *mut c_char,
) -> HmStatus {
    guard(|| {
        let p = params(slope, rho, b, a)?;
        let doc = eval_json(&p, bits).map_err(lib_err)?;
        give_string(doc.to_string(), out)
    })
}

/// Irrationality exponent estimates to depth `k` (formula) and `j` (convergents), as JSON.
///
/// # Safety
/// `slope` and `rho` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hm_exponent_json(
    slope: *const c_char,
    rho: *const c_char,
    b: u64,
    a: u64,
    k: usize,
    j: usize,
    out: *mut *mut c_char,
) -> HmStatus {
    guard(|| {
        if k < 2 || j < 2 {
            return Err((HmStatus::InvalidInput, "depths must be at least 2".into()));
        }
        let p = params(slope, rho, b, a)?;
        let doc = exponent_json(&p, k, j).map_err(lib_err)?;
        give_string(doc.to_string(), out)
    })
}
