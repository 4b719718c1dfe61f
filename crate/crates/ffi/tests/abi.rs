use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hfmodel_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    hf_string_free(s);
    out
}

unsafe fn set(lit: &str) -> *mut HfSetHandle {
    let src = CString::new(lit).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(hf_set_parse(src.as_ptr(), &mut h), HfStatus::Ok);
    h
}

#[test]
fn sets_and_codes() {
    unsafe {
        let s = set("{{},{{}}}");
        let mut out = ptr::null_mut();
        assert_eq!(hf_iack(s, &mut out), HfStatus::Ok);
        assert_eq!(take(out), "3");
        let three = CString::new("3").unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(hf_iack_inv(three.as_ptr(), &mut back), HfStatus::Ok);
        assert_eq!(hf_set_to_string(back, &mut out), HfStatus::Ok);
        assert_eq!(take(out), "{{},{{}}}");
        hf_set_free(s);
        hf_set_free(back);
    }
}

#[test]
fn decide_and_witness() {
    unsafe {
        let e = set("{}");
        let mut w = ptr::null_mut();
        assert_eq!(hf_indef_witness(e, e, &mut w), HfStatus::Ok);
        let mut truth = true;
        assert_eq!(hf_decide_s(e, e, w, &mut truth), HfStatus::Ok);
        assert!(!truth);
        assert_eq!(hf_decide_s(e, e, e, &mut truth), HfStatus::Ok);
        assert!(truth);
        let one = set("{{}}");
        // {} ∈ {{}} has no witness
        assert_eq!(hf_indef_witness(e, one, &mut w), HfStatus::Precondition);
        for h in [e, one, w] {
            hf_set_free(h);
        }
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let bad = CString::new("{{}").unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(hf_set_parse(bad.as_ptr(), &mut h), HfStatus::Parse);
        let mut msg = ptr::null_mut();
        assert_eq!(hf_last_error(&mut msg), HfStatus::Ok);
        assert!(take(msg).contains("parse error"));
        assert_eq!(hf_set_parse(ptr::null(), &mut h), HfStatus::NullArgument);
        let name = CString::new("nope").unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(hf_package_new(name.as_ptr(), 0, 0, 3, &mut p), HfStatus::Precondition);
    }
}

#[test]
fn construction_run() {
    unsafe {
        let name = CString::new("generic").unwrap();
        let mut p = ptr::null_mut();
        assert_eq!(hf_package_new(name.as_ptr(), 0, 0, 3, &mut p), HfStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(hf_run_new(p, 40, &mut r), HfStatus::Ok);
        let mut n = 0;
        assert_eq!(hf_run_len(r, &mut n), HfStatus::Ok);
        assert_eq!(n, 41);
        let mut passed = false;
        let mut report = ptr::null_mut();
        assert_eq!(hf_run_check(r, 10, &mut passed, &mut report), HfStatus::Ok);
        assert!(passed, "{}", take(report));
        let mut trace = ptr::null_mut();
        assert_eq!(hf_run_trace(r, &mut trace), HfStatus::Ok);
        assert!(take(trace).starts_with("trace horizon.stages=40 package=generic\n"));
        hf_run_free(r);
        hf_package_free(p);
    }
}
