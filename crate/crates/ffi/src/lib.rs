//! C ABI over the `apsidon` library.
//!
//! Every function returns an [`ApsStatus`]; results go through out-pointers.
//! Objects are opaque handles released with their `_free` function, and
//! strings returned by the library are released with [`aps_string_free`].
//! On failure a message is kept per thread and read with [`aps_last_error`].
//! Rationals cross the boundary as `"p/q"` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use apsidon::construct::{build_chain, verify_kernel, ChainError, ChainState};
use apsidon::mappings::cantor_eval;
use apsidon::search::SearchConfig;
use apsidon::sets::{count_quadruples, gamma, is_sidon};
use apsidon::{rational, Error, FiniteSet, Mapping};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Precondition = 4,
    Domain = 5,
    SearchFailed = 6,
    Overflow = 7,
    Internal = 8,
    Panic = 9,
}

/// A finite set of rationals.
pub struct ApsSet(FiniteSet);

/// A validated mapping.
pub struct ApsMapping(Mapping);

/// A verified chain of progressions.
pub struct ApsChain(ChainState);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(ApsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::ParseRational(_) | Error::Malformed(_) => ApsStatus::Parse,
            Error::Precondition(_) => ApsStatus::Precondition,
            Error::Domain(_) => ApsStatus::Domain,
            Error::Internal(_) => ApsStatus::Internal,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(ApsStatus::NullArgument, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ApsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ApsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside apsidon".into());
            ApsStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(ApsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail(ApsStatus::Internal, e.to_string()))?;
    write(out, c.into_raw())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn aps_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a comma-separated list such as `"0,1/2,3"`.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_set_parse(text: *const c_char, out: *mut *mut ApsSet) -> ApsStatus {
    guard(|| {
        let set = FiniteSet::parse(read_str(text, "text")?)?;
        write(out, Box::into_raw(Box::new(ApsSet(set))))
    })
}

/// # Safety
/// `set` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aps_set_free(set: *mut ApsSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_set_len(set: *const ApsSet, out: *mut usize) -> ApsStatus {
    guard(|| write(out, borrow(set, "set")?.0.len()))
}

/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_set_is_sidon(set: *const ApsSet, out: *mut bool) -> ApsStatus {
    guard(|| write(out, is_sidon(&borrow(set, "set")?.0)))
}

/// Ordered solutions of `l1 + l2 = l3 + l4`; `APS_STATUS_OVERFLOW` past `u64`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_set_count_quadruples(set: *const ApsSet, out: *mut u64) -> ApsStatus {
    guard(|| {
        let n = count_quadruples(&borrow(set, "set")?.0);
        let n = u64::try_from(n).map_err(|e| Fail(ApsStatus::Overflow, e.to_string()))?;
        write(out, n)
    })
}

/// `{0} ∪ M ∪ (M+M) ∪ (M−M) ∪ (M+M−M)` as a new handle.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_set_gamma(set: *const ApsSet, out: *mut *mut ApsSet) -> ApsStatus {
    guard(|| {
        let g = gamma(&borrow(set, "set")?.0);
        write(out, Box::into_raw(Box::new(ApsSet(g))))
    })
}

/// `{"elements":["p/q",...]}`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_set_to_json(set: *const ApsSet, out: *mut *mut c_char) -> ApsStatus {
    guard(|| {
        let s = serde_json::to_string(&borrow(set, "set")?.0).map_err(|e| Fail(ApsStatus::Internal, e.to_string()))?;
        write_string(out, s)
    })
}

/// Accepts the CLI mapping specs (`square`, `poly:0,0,1`, `cantor`, ...) or JSON.
///
/// # Safety
/// `spec` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_mapping_parse(spec: *const c_char, out: *mut *mut ApsMapping) -> ApsStatus {
    guard(|| {
        let m = Mapping::parse_spec(read_str(spec, "spec")?)?;
        write(out, Box::into_raw(Box::new(ApsMapping(m))))
    })
}

/// # Safety
/// `mapping` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aps_mapping_free(mapping: *mut ApsMapping) {
    if !mapping.is_null() {
        drop(Box::from_raw(mapping));
    }
}

/// # Safety
/// `mapping` must be a live handle, `t` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn aps_mapping_eval(
    mapping: *const ApsMapping,
    t: *const c_char,
    out: *mut *mut c_char,
) -> ApsStatus {
    guard(|| {
        let m = borrow(mapping, "mapping")?;
        let t = rational::parse(read_str(t, "t")?)?;
        write_string(out, rational::format(&m.0.eval(&t)))
    })
}

/// Cantor staircase at `t ∈ [0, 1]`, exactly.
///
/// # Safety
/// `t` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_cantor_eval(t: *const c_char, out: *mut *mut c_char) -> ApsStatus {
    guard(|| {
        let t = rational::parse(read_str(t, "t")?)?;
        write_string(out, rational::format(&cantor_eval(&t)?))
    })
}

/// Builds progressions of lengths `4..=n_max` with the default search box.
/// Returns `APS_STATUS_SEARCH_FAILED` when a stage exhausts `budget`.
///
/// # Safety
/// `mapping` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_chain_build(
    mapping: *const ApsMapping,
    n_max: usize,
    budget: u64,
    seed: u64,
    out: *mut *mut ApsChain,
) -> ApsStatus {
    guard(|| {
        let m = borrow(mapping, "mapping")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let config = SearchConfig::new(budget, seed);
        config.validate()?;
        match build_chain(&m.0, n_max, &config) {
            Ok(state) => write(out, Box::into_raw(Box::new(ApsChain(state)))),
            Err(ChainError::Search(f)) => Err(Fail(ApsStatus::SearchFailed, f.to_string())),
            Err(ChainError::Internal(e)) => Err(e.into()),
        }
    })
}

/// # Safety
/// `chain` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aps_chain_free(chain: *mut ApsChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Number of stages.
///
/// # Safety
/// `chain` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_chain_len(chain: *const ApsChain, out: *mut usize) -> ApsStatus {
    guard(|| write(out, borrow(chain, "chain")?.0.len()))
}

/// Union of the images as a new set handle.
///
/// # Safety
/// `chain` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_chain_union(chain: *const ApsChain, out: *mut *mut ApsSet) -> ApsStatus {
    guard(|| {
        let u = borrow(chain, "chain")?.0.union().clone();
        write(out, Box::into_raw(Box::new(ApsSet(u))))
    })
}

/// # Safety
/// `chain` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_chain_to_json(chain: *const ApsChain, out: *mut *mut c_char) -> ApsStatus {
    guard(|| {
        let s =
            serde_json::to_string(&borrow(chain, "chain")?.0).map_err(|e| Fail(ApsStatus::Internal, e.to_string()))?;
        write_string(out, s)
    })
}

/// Exhaustive check over distinct `k ∈ [1, K]⁴`.
///
/// # Safety
/// `passed` and `tuples_checked` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aps_verify_kernel(k_max: u32, passed: *mut bool, tuples_checked: *mut u64) -> ApsStatus {
    guard(|| {
        if passed.is_null() || tuples_checked.is_null() {
            return Err(null("out"));
        }
        let r = verify_kernel(k_max);
        write(passed, r.passed())?;
        write(tuples_checked, r.tuples_checked)
    })
}
