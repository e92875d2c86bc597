//! C ABI over the `qtoric` library.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free` function. Every fallible call returns a
//! [`QtStatus`]; on failure [`qt_last_error_message`] describes the error.
//! Strings returned by the library are freed with [`qt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qtoric::charmatrix::MatrixJson;
use qtoric::family::iso_invariants;
use qtoric::simplicial::is_join_of_tetrahedron_boundaries;
use qtoric::{decide, decide_matrix, generate_matrix, CharacteristicMatrix, DecisionReport, Error, FamilyParams, SimplicialComplex};

/// Status codes. The nonzero values below 5 match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QtStatus {
    Ok = 0,
    Malformed = 2,
    InvalidMatrix = 3,
    Disagreement = 4,
    NullPointer = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// A simplicial complex.
pub struct QtComplex(SimplicialComplex);

/// A characteristic matrix together with its polytope.
pub struct QtMatrix(CharacteristicMatrix);

/// The outcome of the decision procedure.
pub struct QtReport(DecisionReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> QtStatus {
    match e {
        Error::InvalidMatrix { .. } => QtStatus::InvalidMatrix,
        Error::CriterionDisagreement(_) => QtStatus::Disagreement,
        Error::InvalidFamily(_) => QtStatus::InvalidArgument,
        _ => QtStatus::Malformed,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (QtStatus, String)>) -> QtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QtStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside qtoric");
            QtStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (QtStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (QtStatus, String) {
    (QtStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (QtStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (QtStatus::Malformed, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (QtStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses `{"vertices": m, "facets": [[...], ...]}`.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_complex_from_json(json: *const c_char, out: *mut *mut QtComplex) -> QtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let k: SimplicialComplex = serde_json::from_str(text).map_err(|e| lib_err(e.into()))?;
        store(out, QtComplex(k));
        Ok(())
    })
}

/// # Safety
/// `k` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qt_complex_free(k: *mut QtComplex) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Writes the number of `∂Δ³` factors if the complex is a join of
/// tetrahedron boundaries, otherwise 0.
///
/// # Safety
/// `k` must be a live handle and `out_factors` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_complex_tetra_factors(k: *const QtComplex, out_factors: *mut usize) -> QtStatus {
    guard(|| {
        let k = deref(k, "complex")?;
        if out_factors.is_null() {
            return Err(null("out_factors"));
        }
        *out_factors = is_join_of_tetrahedron_boundaries(&k.0).map_or(0, |b| b.len());
        Ok(())
    })
}

/// Parses `{"n": .., "m": .., "entries": [[...]], "polytope": {...}}`.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_matrix_from_json(json: *const c_char, out: *mut *mut QtMatrix) -> QtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let j: MatrixJson = serde_json::from_str(text).map_err(|e| lib_err(e.into()))?;
        let a = CharacteristicMatrix::try_from(j).map_err(lib_err)?;
        store(out, QtMatrix(a));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qt_matrix_free(m: *mut QtMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Writes whether every maximal-simplex determinant is ±1. An invalid
/// matrix is not an error; the failing simplex is left in the last-error
/// message.
///
/// # Safety
/// `m` must be a live handle and `out_valid` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_matrix_validate(m: *const QtMatrix, out_valid: *mut bool) -> QtStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        if out_valid.is_null() {
            return Err(null("out_valid"));
        }
        match m.0.certify() {
            Ok(_) => *out_valid = true,
            Err(e) => {
                set_error(e.to_string());
                *out_valid = false;
            }
        }
        Ok(())
    })
}

/// `B(k,n)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_family_generate(k: u32, n: usize, out: *mut *mut QtMatrix) -> QtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = FamilyParams::new(k, n).map_err(lib_err)?;
        store(out, QtMatrix(generate_matrix(p)));
        Ok(())
    })
}

/// Decides over the matrix's own dual complex.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_decide(m: *const QtMatrix, out: *mut *mut QtReport) -> QtStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = decide_matrix(&m.0).map_err(lib_err)?;
        store(out, QtReport(r));
        Ok(())
    })
}

/// Decides over an explicitly given complex, which must equal the matrix's.
///
/// # Safety
/// `k` and `m` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_decide_over(k: *const QtComplex, m: *const QtMatrix, out: *mut *mut QtReport) -> QtStatus {
    guard(|| {
        let k = deref(k, "complex")?;
        let m = deref(m, "matrix")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = decide(&k.0, &m.0).map_err(lib_err)?;
        store(out, QtReport(r));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qt_report_free(r: *mut QtReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_report_is_commutative(r: *const QtReport, out: *mut bool) -> QtStatus {
    guard(|| {
        let r = deref(r, "report")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.0.is_commutative();
        Ok(())
    })
}

/// The report as JSON with sorted keys; free with [`qt_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_report_to_json(r: *const QtReport, out: *mut *mut c_char) -> QtStatus {
    guard(|| {
        let r = deref(r, "report")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let value = serde_json::to_value(&r.0).map_err(|e| lib_err(e.into()))?;
        let s = CString::new(value.to_string()).expect("JSON has no nul bytes");
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes whether `H(k,n) ≅ H(l,n)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qt_hkn_isomorphic(k: u32, l: u32, n: usize, out: *mut bool) -> QtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = iso_invariants(k, l, n).map_err(lib_err)?.isomorphic;
        Ok(())
    })
}
