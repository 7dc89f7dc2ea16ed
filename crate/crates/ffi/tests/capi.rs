use std::ffi::{CStr, CString};
use std::ptr;

use ehresmann_ffi::*;

const E2: &str = r#"{"version":1,"kind":"semigroup","elements":["e","f"],
    "mult":[[0,1],[1,1]],"plus":[0,1],"star":[0,1]}"#;

fn take(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { eh_string_free(p) };
    s
}

fn last_error() -> String {
    let p = eh_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn load(json: &str) -> *mut EhSemigroup {
    let c = CString::new(json).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { eh_semigroup_from_json(c.as_ptr(), &mut h) }, EhStatus::Pass);
    h
}

#[test]
fn table_access() {
    let h = load(E2);
    unsafe {
        assert_eq!(eh_semigroup_size(h), 2);
        let mut v = 9;
        assert_eq!(eh_semigroup_mul(h, 0, 1, &mut v), EhStatus::Pass);
        assert_eq!(v, 1);
        assert_eq!(eh_semigroup_plus(h, 1, &mut v), EhStatus::Pass);
        assert_eq!(v, 1);
        assert_eq!(eh_semigroup_star(h, 0, &mut v), EhStatus::Pass);
        assert_eq!(v, 0);
        assert_eq!(eh_semigroup_mul(h, 0, 2, &mut v), EhStatus::Input);
        assert!(last_error().contains('2'));
        eh_semigroup_free(h);
    }
}

#[test]
fn verify_reports() {
    let rg = r#"{"version":1,"kind":"relgen","ground_size":2,
        "generators":[[[0,0],[0,1]],[[1,1]],[[0,1]]]}"#;
    let h = load(rg);
    unsafe {
        let mut rep = ptr::null_mut();
        assert_eq!(eh_semigroup_verify(h, 0, &mut rep), EhStatus::Pass);
        let v: serde_json::Value = serde_json::from_str(&take(rep)).unwrap();
        assert!(v["checks"].as_array().is_some_and(|c| !c.is_empty()));
        assert_eq!(eh_semigroup_verify(h, 9, ptr::null_mut()), EhStatus::Input);

        let mut out = ptr::null_mut();
        assert_eq!(eh_semigroup_to_json(h, &mut out), EhStatus::Pass);
        let doc = take(out);
        let again = load(&doc);
        assert_eq!(eh_semigroup_size(again), eh_semigroup_size(h));
        eh_semigroup_free(again);

        assert_eq!(eh_semigroup_sigma(h, &mut out), EhStatus::Pass);
        let classes: Vec<Vec<usize>> = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), eh_semigroup_size(h));
        eh_semigroup_free(h);
    }
}

#[test]
fn restriction_failure_is_status_fail() {
    // PT(2) is left but not right restriction.
    let pt2 = r#"{"version":1,"kind":"relgen","ground_size":2,
        "generators":[[[0,1]],[[1,0]],[[0,0],[1,0]],[[0,0]]]}"#;
    let h = load(pt2);
    unsafe {
        assert_eq!(eh_semigroup_verify(h, 1, ptr::null_mut()), EhStatus::Pass);
        assert_eq!(eh_semigroup_verify(h, 2, ptr::null_mut()), EhStatus::Fail);
        eh_semigroup_free(h);
    }
}

#[test]
fn bad_input_and_nulls() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(eh_semigroup_from_json(ptr::null(), &mut h), EhStatus::Null);
        assert!(h.is_null());
        let junk = CString::new("{ not json").unwrap();
        assert_eq!(eh_semigroup_from_json(junk.as_ptr(), &mut h), EhStatus::Input);
        assert!(!last_error().is_empty());
        let good = CString::new(E2).unwrap();
        assert_eq!(eh_semigroup_from_json(good.as_ptr(), ptr::null_mut()), EhStatus::Null);
        assert!(last_error().contains("null"));
        assert_eq!(eh_semigroup_size(ptr::null()), 0);
        let mut v = 0;
        assert_eq!(eh_semigroup_mul(ptr::null(), 0, 0, &mut v), EhStatus::Null);
        eh_semigroup_free(ptr::null_mut());
        eh_string_free(ptr::null_mut());
    }
}

#[test]
fn verify_any_document() {
    let bad = CString::new(
        r#"{"version":1,"kind":"semigroup","elements":["e","f"],
        "mult":[[0,1],[1,1]],"plus":[0,1],"star":[1,1]}"#,
    )
    .unwrap();
    let good = CString::new(E2).unwrap();
    unsafe {
        assert_eq!(eh_verify_json(good.as_ptr(), ptr::null_mut()), EhStatus::Pass);
        let mut rep = ptr::null_mut();
        assert_eq!(eh_verify_json(bad.as_ptr(), &mut rep), EhStatus::Fail);
        assert!(take(rep).contains("fail"));
    }
}

#[test]
fn header_declares_exports() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ehresmann.h")).unwrap();
    for f in [
        "eh_last_error",
        "eh_string_free",
        "eh_semigroup_from_json",
        "eh_semigroup_free",
        "eh_semigroup_size",
        "eh_semigroup_mul",
        "eh_semigroup_plus",
        "eh_semigroup_star",
        "eh_semigroup_verify",
        "eh_semigroup_sigma",
        "eh_semigroup_to_json",
        "eh_verify_json",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("EH_STATUS_INCONCLUSIVE = 3"));
}
