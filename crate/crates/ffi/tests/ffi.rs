//! Calls through the C ABI, from Rust and from a compiled C program.

use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use etatheta_ffi::*;

fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { et_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(et_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn eval_theta_all_through_handles() {
    let re = CString::new("0").unwrap();
    let im = CString::new("1").unwrap();
    let mut r = ptr::null_mut();
    let st = unsafe {
        et_eval_tau(
            EtFunction::ThetaAll,
            re.as_ptr(),
            im.as_ptr(),
            128,
            EtMethod::Bsgs,
            &mut r,
        )
    };
    assert_eq!(st, EtStatus::Ok);
    unsafe {
        assert_eq!(et_result_count(r), 3);
        assert_eq!(
            CStr::from_ptr(et_result_name(r, 2)).to_str().unwrap(),
            "theta2"
        );
        assert!(et_result_name(r, 3).is_null());
        assert_eq!(et_result_method(r), EtMethod::Bsgs);
        assert!(et_result_truncation(r) > 0);
        assert!(et_result_counts(r).complex_mul > 0);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(et_result_value(r, 0, 0, &mut a, &mut b), EtStatus::Ok);
        // theta0(i) = pi^(1/4) / Gamma(3/4)
        assert!(take_string(a).starts_with("1.0864348112133080145"));
        take_string(b);
        assert_eq!(
            et_result_value(r, 7, 0, &mut a, &mut b),
            EtStatus::InvalidArgument
        );
        assert!(last_error().contains("out of range"));
        let json = take_string(et_result_json(r));
        assert!(json.contains("\"theta1\""));
        et_result_free(r);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let zero = CString::new("0").unwrap();
    let neg = CString::new("-1").unwrap();
    let bad = CString::new("one").unwrap();
    let mut r = ptr::null_mut();
    unsafe {
        let st = et_eval_tau(
            EtFunction::Eta,
            zero.as_ptr(),
            neg.as_ptr(),
            64,
            EtMethod::Auto,
            &mut r,
        );
        assert_eq!(st, EtStatus::NotUpperHalfPlane);
        assert!(r.is_null());
        assert!(last_error().contains("positive"));
        let st = et_eval_q(
            EtFunction::Eta,
            neg.as_ptr(),
            zero.as_ptr(),
            64,
            EtMethod::Auto,
            &mut r,
        );
        assert_eq!(st, EtStatus::QTooLarge);
        let st = et_eval_tau(
            EtFunction::Eta,
            bad.as_ptr(),
            zero.as_ptr(),
            64,
            EtMethod::Auto,
            &mut r,
        );
        assert_eq!(st, EtStatus::InvalidArgument);
        let st = et_eval_tau(
            EtFunction::Eta,
            zero.as_ptr(),
            zero.as_ptr(),
            4,
            EtMethod::Auto,
            ptr::null_mut(),
        );
        assert_eq!(st, EtStatus::NullPointer);
        let st = et_eval_tau(
            EtFunction::Eta,
            ptr::null(),
            zero.as_ptr(),
            64,
            EtMethod::Auto,
            &mut r,
        );
        assert_eq!(st, EtStatus::NullPointer);
        et_result_free(ptr::null_mut());
        et_string_free(ptr::null_mut());
    }
}

#[test]
fn addseq_round_trip() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(
            et_addseq_build(EtKind::Pentagonal, 100, EtAlgorithm::Optimized, &mut s),
            EtStatus::Ok
        );
        assert_eq!(et_addseq_validate(s), EtStatus::Ok);
        let cost = et_addseq_cost(s, EtCostModel::Fft);
        let text = CString::new(take_string(et_addseq_to_text(s))).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(et_addseq_parse(text.as_ptr(), &mut back), EtStatus::Ok);
        assert_eq!(et_addseq_len(back), et_addseq_len(s));
        assert_eq!(et_addseq_cost(back, EtCostModel::Fft), cost);
        et_addseq_free(back);
        et_addseq_free(s);

        let broken = CString::new("# targets: 1 2 5\n1 leaf\n2 double 1\n5 add 2 2\n").unwrap();
        assert_eq!(et_addseq_parse(broken.as_ptr(), &mut s), EtStatus::Ok);
        assert_eq!(et_addseq_validate(s), EtStatus::Failed);
        et_addseq_free(s);

        assert_eq!(
            et_addseq_build(EtKind::Square, 10, EtAlgorithm::Optimized, &mut s),
            EtStatus::UnsupportedKind
        );
    }
    assert_eq!(et_count_values(EtKind::Square, 720), 48);
}

/// Directory holding the library artifacts of this build.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let staticlib = artifact_dir().join("libetatheta_ffi.a");
    assert!(staticlib.exists(), "missing {}", staticlib.display());
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("ffi_smoke.c");
    let bin = dir.join("ffi_smoke");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "etatheta.h"

int main(void) {
    EtEvalResult *r = NULL;
    if (et_eval_tau(ET_FUNCTION_ETA, "0", "1", 256, ET_METHOD_AUTO, &r) != ET_STATUS_OK) {
        fprintf(stderr, "%s\n", et_last_error());
        return 1;
    }
    char *re = NULL, *im = NULL;
    if (et_result_value(r, 0, 0, &re, &im) != ET_STATUS_OK) return 2;
    printf("%s %s\n", et_result_name(r, 0), re);
    et_string_free(re);
    et_string_free(im);
    et_result_free(r);
    if (et_eval_tau(ET_FUNCTION_ETA, "0", "-1", 64, ET_METHOD_AUTO, &r) != ET_STATUS_NOT_UPPER_HALF_PLANE) return 3;
    return strlen(et_last_error()) > 0 ? 0 : 4;
}
"#,
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&src)
        .arg(&staticlib)
        .args(["-lmpfr", "-lgmp", "-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("eta 7.682254223260566590025941795761"),
        "{text}"
    );
}
