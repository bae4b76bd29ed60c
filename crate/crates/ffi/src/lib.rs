//! C interface. Fixtures and elements are opaque heap handles; every fallible call returns an
//! [`SgStatus`] and writes its result through an out-pointer. The message of the most recent
//! failure on the calling thread is available from [`sg_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use supergroup::cli::load_fixture;
use supergroup::error::Error;
use supergroup::fixture::Fixture;
use supergroup::gamma::{Gamma, GammaElement};
use supergroup::grassmann::GrassmannAlgebra;
use supergroup::suites;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Precondition = 4,
    Mismatch = 5,
    Arithmetic = 6,
    /// A check ran to completion and found failures.
    CheckFailed = 7,
    Internal = 8,
}

/// A loaded fixture together with its supergroup and working Grassmann algebra.
pub struct SgFixture {
    fixture: Fixture,
    gamma: Gamma,
    algebra: GrassmannAlgebra,
}

/// A point of the supergroup with values in the fixture's Grassmann algebra.
pub struct SgElement {
    element: GammaElement,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SgStatus {
    match e {
        Error::Parse(_) => SgStatus::Parse,
        Error::Precondition(_) | Error::Axiom(_) | Error::Unsupported(_) | Error::InvalidField(_) => {
            SgStatus::Precondition
        }
        Error::FieldMismatch(_) | Error::AlgebraMismatch(_) | Error::Dimension(_) | Error::Parity(_) => {
            SgStatus::Mismatch
        }
        Error::NotInvertible(_) | Error::DivisionByZero => SgStatus::Arithmetic,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (SgStatus, String)>) -> SgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            SgStatus::Internal
        }
    }
}

fn lib(e: Error) -> (SgStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (SgStatus, String) {
    (SgStatus::NullArgument, format!("{name} is null"))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, (SgStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (SgStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, (SgStatus, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn sg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Loads a fixture from a file path or a bundled name. `grassmann_n` of 0 keeps the fixture's
/// own generator count.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sg_fixture_load(source: *const c_char, grassmann_n: u32, out: *mut *mut SgFixture) -> SgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let source = text(source, "source")?;
        let fixture = load_fixture(source).map_err(lib)?;
        let n = if grassmann_n == 0 { fixture.grassmann_n() } else { grassmann_n };
        if n > 20 {
            return Err((SgStatus::Precondition, format!("{n} Grassmann generators exceed the supported 20")));
        }
        let algebra = GrassmannAlgebra::new(n, fixture.field()).map_err(lib)?;
        let gamma = Gamma::new(fixture.pair.clone()).map_err(lib)?;
        emit(out, SgFixture { fixture, gamma, algebra });
        Ok(())
    })
}

/// # Safety
/// `fx` must be null or a handle from [`sg_fixture_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sg_fixture_free(fx: *mut SgFixture) {
    if !fx.is_null() {
        drop(Box::from_raw(fx));
    }
}

/// Writes the even dimension, odd dimension and matrix size of the fixture.
///
/// # Safety
/// `fx` must be a live handle; each out-pointer may be null to skip it.
#[no_mangle]
pub unsafe extern "C" fn sg_fixture_dims(
    fx: *const SgFixture,
    even_dim: *mut usize,
    odd_dim: *mut usize,
    matrix_size: *mut usize,
) -> SgStatus {
    guard(|| {
        let fx = borrow(fx, "fixture")?;
        for (p, v) in [(even_dim, fx.gamma.even_dim()), (odd_dim, fx.gamma.odd_dim()), (matrix_size, fx.fixture.pair.group().size())] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// Runs the structural condition suites and a seeded group-law sample. Returns
/// [`SgStatus::CheckFailed`] when any condition fails; the count goes to `failures`.
///
/// # Safety
/// `fx` must be a live handle; `failures` may be null.
#[no_mangle]
pub unsafe extern "C" fn sg_fixture_check(fx: *const SgFixture, seed: u64, triples: usize, failures: *mut usize) -> SgStatus {
    guard(|| {
        let fx = borrow(fx, "fixture")?;
        let mut r = suites::condition_suite(&fx.fixture, &fx.gamma, fx.algebra);
        r.merge(suites::group_law_suite(&fx.gamma, fx.algebra, triples, seed));
        if !failures.is_null() {
            *failures = r.failure_count();
        }
        if r.is_ok() {
            Ok(())
        } else {
            Err((SgStatus::CheckFailed, r.failing_conditions().join(", ")))
        }
    })
}

/// The identity element.
///
/// # Safety
/// `fx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_element_identity(fx: *const SgFixture, out: *mut *mut SgElement) -> SgStatus {
    guard(|| {
        let fx = borrow(fx, "fixture")?;
        if out.is_null() {
            return Err(null("out"));
        }
        emit(out, SgElement { element: fx.gamma.identity(fx.algebra) });
        Ok(())
    })
}

/// Parses an element from `{"g": [[..]], "a": [..]}` with Grassmann entries such as `"t1*t2"`.
///
/// # Safety
/// `fx` must be a live handle, `json` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_element_from_json(fx: *const SgFixture, json: *const c_char, out: *mut *mut SgElement) -> SgStatus {
    guard(|| {
        let fx = borrow(fx, "fixture")?;
        let json = text(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let value: serde_json::Value =
            serde_json::from_str(json).map_err(|e| (SgStatus::Parse, format!("element JSON: {e}")))?;
        let element = fx.gamma.element_from_json(fx.algebra, &value).map_err(lib)?;
        emit(out, SgElement { element });
        Ok(())
    })
}

/// Serializes an element to a newly allocated JSON string; release it with [`sg_string_free`].
///
/// # Safety
/// `el` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_element_to_json(el: *const SgElement, out: *mut *mut c_char) -> SgStatus {
    guard(|| {
        let el = borrow(el, "element")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CString::new(el.element.to_json().to_string()).map_err(|e| (SgStatus::Internal, e.to_string()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `fx`, `left` and `right` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_element_mul(
    fx: *const SgFixture,
    left: *const SgElement,
    right: *const SgElement,
    out: *mut *mut SgElement,
) -> SgStatus {
    guard(|| {
        let fx = borrow(fx, "fixture")?;
        let (l, r) = (borrow(left, "left")?, borrow(right, "right")?);
        if out.is_null() {
            return Err(null("out"));
        }
        let element = fx.gamma.mul(&l.element, &r.element).map_err(lib)?;
        emit(out, SgElement { element });
        Ok(())
    })
}

/// # Safety
/// `fx` and `el` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_element_inv(fx: *const SgFixture, el: *const SgElement, out: *mut *mut SgElement) -> SgStatus {
    guard(|| {
        let fx = borrow(fx, "fixture")?;
        let el = borrow(el, "element")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let element = fx.gamma.inv(&el.element).map_err(lib)?;
        emit(out, SgElement { element });
        Ok(())
    })
}

/// Writes 1 to `result` when the two elements are equal, 0 otherwise.
///
/// # Safety
/// Both handles must be live; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn sg_element_equal(a: *const SgElement, b: *const SgElement, result: *mut i32) -> SgStatus {
    guard(|| {
        let (a, b) = (borrow(a, "a")?, borrow(b, "b")?);
        if result.is_null() {
            return Err(null("result"));
        }
        *result = i32::from(a.element == b.element);
        Ok(())
    })
}

/// # Safety
/// `el` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sg_element_free(el: *mut SgElement) {
    if !el.is_null() {
        drop(Box::from_raw(el));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
