use std::ffi::{CStr, CString};
use std::ptr;

use qtoric_ffi::*;

const CP3: &str = r#"{"n":3,"m":4,"entries":[[1,0,0,1],[0,1,0,1],[0,0,1,1]],"polytope":{"type":"simplex_product","factors":[3]}}"#;
const DEGENERATE: &str = r#"{"n":3,"m":4,"entries":[[1,0,0,1],[0,1,0,1],[0,0,1,0]],"polytope":{"type":"simplex_product","factors":[3]}}"#;

fn matrix(json: &str) -> (QtStatus, *mut QtMatrix) {
    let c = CString::new(json).unwrap();
    let mut m = ptr::null_mut();
    let status = unsafe { qt_matrix_from_json(c.as_ptr(), &mut m) };
    (status, m)
}

fn last_error() -> String {
    let p = qt_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn decide_cp3_through_handles() {
    let (status, m) = matrix(CP3);
    assert_eq!(status, QtStatus::Ok);
    let mut valid = false;
    assert_eq!(unsafe { qt_matrix_validate(m, &mut valid) }, QtStatus::Ok);
    assert!(valid);

    let mut r = ptr::null_mut();
    assert_eq!(unsafe { qt_decide(m, &mut r) }, QtStatus::Ok);
    let mut commutative = false;
    assert_eq!(unsafe { qt_report_is_commutative(r, &mut commutative) }, QtStatus::Ok);
    assert!(commutative);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qt_report_to_json(r, &mut s) }, QtStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    assert_eq!(json["verdict"], "commutative");
    assert_eq!(json["stage"], "parity");
    unsafe {
        qt_string_free(s);
        qt_report_free(r);
        qt_matrix_free(m);
    }
}

#[test]
fn invalid_matrix_status() {
    let (status, m) = matrix(DEGENERATE);
    assert_eq!(status, QtStatus::Ok);
    let mut valid = true;
    assert_eq!(unsafe { qt_matrix_validate(m, &mut valid) }, QtStatus::Ok);
    assert!(!valid);
    assert!(last_error().contains("[1, 2, 4]"));
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { qt_decide(m, &mut r) }, QtStatus::InvalidMatrix);
    assert!(r.is_null());
    unsafe { qt_matrix_free(m) };
}

#[test]
fn malformed_and_null_inputs() {
    let (status, m) = matrix("{\"n\":3");
    assert_eq!(status, QtStatus::Malformed);
    assert!(m.is_null());
    assert!(!last_error().is_empty());

    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qt_matrix_from_json(ptr::null(), &mut m) }, QtStatus::NullPointer);
    let mut valid = false;
    assert_eq!(unsafe { qt_matrix_validate(ptr::null(), &mut valid) }, QtStatus::NullPointer);
    unsafe {
        qt_matrix_free(ptr::null_mut());
        qt_report_free(ptr::null_mut());
        qt_string_free(ptr::null_mut());
        qt_complex_free(ptr::null_mut());
    }
}

#[test]
fn family_through_handles() {
    for k in 1..=4u32 {
        let mut m = ptr::null_mut();
        assert_eq!(unsafe { qt_family_generate(k, 3, &mut m) }, QtStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(unsafe { qt_decide(m, &mut r) }, QtStatus::Ok);
        let mut commutative = false;
        unsafe { qt_report_is_commutative(r, &mut commutative) };
        assert_eq!(commutative, k % 2 == 0);
        unsafe {
            qt_report_free(r);
            qt_matrix_free(m);
        }
    }
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qt_family_generate(0, 3, &mut m) }, QtStatus::InvalidArgument);
    assert_eq!(unsafe { qt_family_generate(1, 1, &mut m) }, QtStatus::InvalidArgument);

    let mut iso = true;
    assert_eq!(unsafe { qt_hkn_isomorphic(1, 2, 3, &mut iso) }, QtStatus::Ok);
    assert!(!iso);
    assert_eq!(unsafe { qt_hkn_isomorphic(3, 3, 2, &mut iso) }, QtStatus::Ok);
    assert!(iso);
}

#[test]
fn explicit_complex() {
    let k = CString::new(r#"{"vertices":4,"facets":[[1,2,3],[1,2,4],[1,3,4],[2,3,4]]}"#).unwrap();
    let mut kh = ptr::null_mut();
    assert_eq!(unsafe { qt_complex_from_json(k.as_ptr(), &mut kh) }, QtStatus::Ok);
    let mut factors = 0usize;
    assert_eq!(unsafe { qt_complex_tetra_factors(kh, &mut factors) }, QtStatus::Ok);
    assert_eq!(factors, 1);

    let (_, m) = matrix(CP3);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { qt_decide_over(kh, m, &mut r) }, QtStatus::Ok);
    unsafe { qt_report_free(r) };

    let other = CString::new(r#"{"vertices":2,"facets":[[1],[2]]}"#).unwrap();
    let mut oh = ptr::null_mut();
    assert_eq!(unsafe { qt_complex_from_json(other.as_ptr(), &mut oh) }, QtStatus::Ok);
    let mut factors = 7usize;
    unsafe { qt_complex_tetra_factors(oh, &mut factors) };
    assert_eq!(factors, 0);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { qt_decide_over(oh, m, &mut r) }, QtStatus::Malformed);
    unsafe {
        qt_complex_free(kh);
        qt_complex_free(oh);
        qt_matrix_free(m);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qtoric.h")).unwrap();
    for name in [
        "qt_matrix_from_json",
        "qt_matrix_free",
        "qt_matrix_validate",
        "qt_decide",
        "qt_report_is_commutative",
        "qt_report_to_json",
        "qt_string_free",
        "qt_family_generate",
        "qt_hkn_isomorphic",
        "qt_last_error_message",
        "typedef struct QtMatrix QtMatrix",
        "QT_STATUS_INVALID_MATRIX = 3",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
