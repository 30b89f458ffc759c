use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use hecke_mahler_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    hm_string_free(p);
    s
}

fn expansion(slope: &str, rho: &str, b: u64, a: u64, n: usize) -> (HmStatus, *mut HmExpansion) {
    let mut h = ptr::null_mut();
    let s = unsafe { hm_expansion_new(c(slope).as_ptr(), c(rho).as_ptr(), b, a, n, &mut h) };
    (s, h)
}

#[test]
fn fibonacci_terms() {
    let (s, h) = expansion("per:[;1]", "digits[]", 2, 1, 7);
    assert_eq!(s, HmStatus::Ok);
    unsafe {
        assert_eq!(hm_expansion_len(h), 7);
        assert_eq!(hm_expansion_is_improper(h), 0);
        let terms: Vec<String> = (0..7)
            .map(|i| {
                let mut t = ptr::null_mut();
                assert_eq!(hm_expansion_term(h, i, &mut t), HmStatus::Ok);
                take(t)
            })
            .collect();
        assert_eq!(terms.join(" "), "1 2 2 4 8 32 256");
        let mut t = ptr::null_mut();
        assert_eq!(hm_expansion_term(h, 7, &mut t), HmStatus::OutOfRange);
        assert!(CStr::from_ptr(hm_last_error()).to_str().unwrap().contains("out of range"));
        assert_eq!(hm_expansion_head(h, &mut t), HmStatus::OutOfRange);
        let mut j = ptr::null_mut();
        assert_eq!(hm_expansion_json(h, &mut j), HmStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take(j)).unwrap();
        assert_eq!(doc["A"][6], "256");
        hm_expansion_free(h);
    }
}

#[test]
fn improper_head_is_exposed() {
    let (s, h) = expansion("per:[;2]", "digits[]", 3, 2, 3);
    assert_eq!(s, HmStatus::Ok);
    unsafe {
        assert_eq!(hm_expansion_is_improper(h), 1);
        let mut t = ptr::null_mut();
        assert_eq!(hm_expansion_head(h, &mut t), HmStatus::Ok);
        let head = take(t);
        let den: u64 = head.split('/').nth(1).unwrap().parse().unwrap();
        assert_eq!(2 % den, 0, "{head}");
        assert_eq!(hm_expansion_len(h), 3);
        hm_expansion_free(h);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let (s, h) = expansion("per:[;1]", "digits[]", 1, 1, 3);
    assert_eq!(s, HmStatus::InvalidInput);
    assert!(h.is_null());
    let (s, _) = expansion("per:[;", "digits[]", 2, 1, 3);
    assert_eq!(s, HmStatus::InvalidInput);
    let mut h = ptr::null_mut();
    let s = unsafe { hm_expansion_new(ptr::null(), c("digits[]").as_ptr(), 2, 1, 3, &mut h) };
    assert_eq!(s, HmStatus::NullPointer);
    unsafe {
        assert_eq!(hm_expansion_len(ptr::null()), 0);
        hm_expansion_free(ptr::null_mut());
        hm_string_free(ptr::null_mut());
    }
}

#[test]
fn eval_and_exponent_reports() {
    unsafe {
        let mut out = ptr::null_mut();
        let s = hm_eval_json(c("per:[;1]").as_ptr(), c("digits[]").as_ptr(), 2, 1, 128, &mut out);
        assert_eq!(s, HmStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(doc["overlap"], true);
        let s = hm_exponent_json(c("per:[;1]").as_ptr(), c("digits[]").as_ptr(), 2, 1, 30, 60, &mut out);
        assert_eq!(s, HmStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        let est = doc["formula"]["estimate"].as_f64().unwrap();
        assert!((est - 2.618).abs() < 0.05, "{est}");
        assert_eq!(hm_exponent_json(c("per:[;1]").as_ptr(), c("digits[]").as_ptr(), 2, 1, 1, 60, &mut out), HmStatus::InvalidInput);
    }
}

/// Builds the C example against the generated header and the static library.
#[test]
fn c_example_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib_dir = deps.parent().unwrap();
    let lib = lib_dir.join("libhecke_mahler_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let exe = deps.join("hm_expand_example");
    let status = Command::new("cc")
        .arg(manifest.join("examples/expand.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1 2 2 4 8 32 256");
    let out = Command::new(&exe).args(["per:[;1]", "digits[5]"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
