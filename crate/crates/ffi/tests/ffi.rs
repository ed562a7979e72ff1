use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use qhc_ffi::*;

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    qhc_string_free(p);
    s
}

#[test]
fn closed_form_and_oracle_agree() {
    unsafe {
        let mut formula = ptr::null_mut();
        let mut oracle = ptr::null_mut();
        assert_eq!(qhc_ch_single(2, 1, 7, 1, 3, 1, false, &mut formula), QhcStatus::Ok);
        assert_eq!(qhc_ch_single(2, 1, 7, 1, 3, 1, true, &mut oracle), QhcStatus::Ok);
        let mut equal = false;
        assert_eq!(qhc_chern_equal(formula, oracle, &mut equal), QhcStatus::Ok);
        assert!(equal);
        let mut text = ptr::null_mut();
        assert_eq!(qhc_chern_to_string(formula, &mut text), QhcStatus::Ok);
        assert_eq!(take_string(text), "2 - θ_m - 6·ξ_m + 3·θ_m·ξ_m");
        let mut json = ptr::null_mut();
        assert_eq!(qhc_chern_to_json(formula, &mut json), QhcStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(value["rank"], 2);
        qhc_chern_free(formula);
        qhc_chern_free(oracle);
    }
}

#[test]
fn multilayer_json() {
    let cfg = CString::new(r#"{"K": [[3,1],[1,3]], "C": [[1],[1]], "n": [3,3], "m": [2], "d": [14,14], "g": 1}"#).unwrap();
    unsafe {
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        let status = qhc_ch_multilayer(cfg.as_ptr(), false, &mut a);
        assert_eq!(status, QhcStatus::Ok, "{:?}", CStr::from_ptr(qhc_last_error()));
        assert_eq!(qhc_ch_multilayer(cfg.as_ptr(), true, &mut b), QhcStatus::Ok);
        let mut equal = false;
        assert_eq!(qhc_chern_equal(a, b, &mut equal), QhcStatus::Ok);
        assert!(equal);
        qhc_chern_free(a);
        qhc_chern_free(b);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(qhc_ch_single(0, 1, 0, 0, 2, 1, false, &mut out), QhcStatus::InvalidArgument);
        assert!(out.is_null());
        assert!(!qhc_last_error().is_null());
        assert_eq!(qhc_ch_multilayer(ptr::null(), false, &mut out), QhcStatus::NullPointer);
        let bad = CString::new("{not json").unwrap();
        assert_eq!(qhc_ch_multilayer(bad.as_ptr(), false, &mut out), QhcStatus::InvalidArgument);
        let singular = CString::new(r#"{"K": [[1,1],[1,1]], "C": [[1],[1]], "n": [1,1], "m": [1], "d": [3,3], "g": 0}"#).unwrap();
        assert_eq!(qhc_ch_multilayer(singular.as_ptr(), false, &mut out), QhcStatus::ComputationFailed);
        let message = CStr::from_ptr(qhc_last_error()).to_string_lossy().into_owned();
        assert!(!message.is_empty());
        assert_eq!(qhc_ch_single(1, 1, 1, 0, 1, 1, false, ptr::null_mut()), QhcStatus::NullPointer);
        let mut equal = false;
        assert_eq!(qhc_chern_equal(ptr::null(), ptr::null(), &mut equal), QhcStatus::NullPointer);
        assert_eq!(qhc_ch_single(1, 1, 1, 0, 1, 1, false, &mut out), QhcStatus::Ok);
        assert!(qhc_last_error().is_null());
        qhc_chern_free(out);
        qhc_chern_free(ptr::null_mut());
        qhc_string_free(ptr::null_mut());
    }
}

#[test]
fn theta_through_the_abi() {
    let (mut re, mut im, mut tail) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(qhc_theta(0.0, 0.0, 0.0, 1.0, 0.0, 0.0, &mut re, &mut im, &mut tail), QhcStatus::Ok);
        assert!((re - 1.086_434_811_213_308).abs() < 1e-12 && im == 0.0 && tail < 1e-15);
        assert_eq!(qhc_theta(0.0, 0.0, 0.0, -1.0, 0.0, 0.0, &mut re, &mut im, &mut tail), QhcStatus::InvalidArgument);
    }
}

#[test]
fn header_declares_the_abi() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/qhc.h")).unwrap();
    for name in ["qhc_ch_single", "qhc_ch_multilayer", "qhc_chern_equal", "qhc_chern_to_json", "qhc_chern_free", "qhc_string_free", "qhc_theta", "qhc_last_error", "typedef struct QhcChernClass QhcChernClass"] {
        assert!(header.contains(name), "{name}");
    }
}

/// Builds and runs a C program against the header and the static library.
#[test]
fn c_program_links() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libqhc_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "qhc.h"
int main(void) {
    QhcChernClass *a = NULL, *b = NULL;
    bool eq = false;
    char *text = NULL;
    if (qhc_ch_single(1, 1, 5, 1, 3, 2, false, &a) != QHC_STATUS_OK) return 2;
    if (qhc_ch_single(1, 1, 5, 1, 3, 2, true, &b) != QHC_STATUS_OK) return 3;
    if (qhc_chern_equal(a, b, &eq) != QHC_STATUS_OK || !eq) return 4;
    if (qhc_chern_to_string(a, &text) != QHC_STATUS_OK) return 5;
    printf("%s\n", text);
    qhc_string_free(text);
    qhc_chern_free(a);
    qhc_chern_free(b);
    if (qhc_ch_single(0, 1, 0, 0, 1, 1, false, &a) != QHC_STATUS_INVALID_ARGUMENT) return 6;
    if (qhc_last_error() == NULL) return 7;
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1 - θ_m - 3·ξ_m + 3·θ_m·ξ_m + 9/2·ξ_m^2 - 9/2·θ_m·ξ_m^2\n");
}
