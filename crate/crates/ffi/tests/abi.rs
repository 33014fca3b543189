use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use afcert_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    afc_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = afc_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

#[test]
fn check_returns_owned_verdicts() {
    unsafe {
        let mut v = ptr::null_mut();
        let st = afc_check(cs("7").as_ptr(), cs("13").as_ptr(), cs("16").as_ptr(), AfcMode::Strict as i32, &mut v);
        assert_eq!(st, AfcStatus::Ok);
        assert_eq!(afc_verdict_kind(v), AfcVerdictKind::Finite as i32);
        assert_eq!(afc_verdict_exit_code(v), 0);
        let json = take(afc_verdict_to_json(v));
        let parsed = afcert::Verdict::from_json(&json).unwrap();
        assert_eq!(parsed.headline(), "two-good+mod3-sign");
        assert!(take(afc_verdict_explain(v)).contains("certificate.mod3-sign"));
        afc_verdict_free(v);
        assert!(afc_last_error_message().is_null());
    }
}

#[test]
fn verdict_kinds_and_modes() {
    unsafe {
        let mut v = ptr::null_mut();
        let run = |a: &str, b: &str, c: &str, mode: AfcMode, v: &mut *mut AfcVerdict| {
            afc_check(cs(a).as_ptr(), cs(b).as_ptr(), cs(c).as_ptr(), mode as i32, v)
        };
        assert_eq!(run("1", "1", "2", AfcMode::Strict, &mut v), AfcStatus::Ok);
        assert_eq!(afc_verdict_kind(v), AfcVerdictKind::Unknown as i32);
        afc_verdict_free(v);
        assert_eq!(run("2", "4", "6", AfcMode::Strict, &mut v), AfcStatus::Ok);
        assert_eq!(afc_verdict_kind(v), AfcVerdictKind::Invalid as i32);
        assert_eq!(afc_verdict_exit_code(v), 1);
        afc_verdict_free(v);
        assert_eq!(run("1", "13", "4", AfcMode::Extended, &mut v), AfcStatus::Ok);
        assert_eq!(afc_verdict_kind(v), AfcVerdictKind::Finite as i32);
        afc_verdict_free(v);
        assert_eq!(afc_verdict_kind(ptr::null()), -1);
        assert!(afc_verdict_to_json(ptr::null()).is_null());
        afc_verdict_free(ptr::null_mut());
        afc_string_free(ptr::null_mut());
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut v = ptr::null_mut();
        let st = afc_check(cs("1").as_ptr(), cs("1.5").as_ptr(), cs("2").as_ptr(), 0, &mut v);
        assert_eq!(st, AfcStatus::ParseError);
        assert!(last_error().contains("not an integer"));
        assert!(v.is_null());
        assert_eq!(afc_check(ptr::null(), cs("1").as_ptr(), cs("2").as_ptr(), 0, &mut v), AfcStatus::NullPointer);
        assert_eq!(afc_check(cs("1").as_ptr(), cs("1").as_ptr(), cs("2").as_ptr(), 7, &mut v), AfcStatus::InvalidArgument);
        assert_eq!(afc_check(cs("1").as_ptr(), cs("1").as_ptr(), cs("2").as_ptr(), 0, ptr::null_mut()), AfcStatus::NullPointer);
        let bad = [0xffu8, 0];
        assert_eq!(afc_check(bad.as_ptr().cast(), cs("1").as_ptr(), cs("2").as_ptr(), 0, &mut v), AfcStatus::InvalidUtf8);
    }
}

#[test]
fn sunit_enumeration() {
    unsafe {
        let primes = [3u64, 7];
        let (mut n, mut out) = (0usize, ptr::null_mut());
        let st = afc_sunit_enumerate(4, primes.as_ptr(), 2, 6, 1_000_000, &mut n, &mut out);
        assert_eq!(st, AfcStatus::Ok);
        let pts: Vec<[String; 3]> = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(pts.len(), n);
        assert!(pts.iter().any(|p| p == &["3", "1", "-49"] || p == &["-3", "-1", "49"]));

        let st = afc_sunit_enumerate(4, [13u64].as_ptr(), 1, 10, 1_000_000, &mut n, &mut out);
        assert_eq!(st, AfcStatus::Ok);
        assert_eq!(n, 0);
        afc_string_free(out);

        let many = [3u64, 5, 7, 11];
        assert_eq!(afc_sunit_enumerate(4, many.as_ptr(), 4, 12, 1000, &mut n, &mut out), AfcStatus::BudgetExceeded);
        assert_eq!(afc_sunit_enumerate(4, [4u64].as_ptr(), 1, 3, 1000, &mut n, &mut out), AfcStatus::InvalidArgument);
        assert_eq!(afc_sunit_enumerate(4, ptr::null(), 2, 3, 1000, &mut n, &mut out), AfcStatus::NullPointer);
        assert_eq!(afc_sunit_enumerate(4, ptr::null(), 0, 3, 1000, &mut n, &mut out), AfcStatus::Ok);
        afc_string_free(out);
    }
}

#[test]
fn frey_conductors() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(afc_frey_conductor(cs("-1").as_ptr(), cs("16").as_ptr(), &mut out), AfcStatus::Ok);
        assert_eq!(take(out), "15");
        assert_eq!(afc_frey_conductor(cs("1").as_ptr(), cs("2").as_ptr(), &mut out), AfcStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        assert_eq!(CStr::from_ptr(afc_schema_version()).to_str().unwrap(), afcert::SCHEMA_VERSION);
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include/afcert.h");
    assert!(header.exists(), "build script did not write the header");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["afc_check", "afc_verdict_free", "afc_string_free", "afc_sunit_enumerate", "afc_frey_conductor", "afc_last_error_message"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let lib = target_dir().join("libafcert_ffi.a");
    let out = tempfile_path("afcert_smoke");
    let mut cmd = Command::new(&cc);
    cmd.args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-I"]).arg(crate_dir.join("include"));
    cmd.arg(crate_dir.join("tests/c/smoke.c"));
    if lib.exists() {
        cmd.arg(&lib).args(["-lpthread", "-ldl", "-lm", "-o"]).arg(&out);
    } else {
        eprintln!("{} not built, checking syntax only", lib.display());
        cmd.arg("-fsyntax-only");
    }
    let status = cmd.status().unwrap();
    assert!(status.success(), "C compile failed");
    if lib.exists() {
        let run = Command::new(&out).output().unwrap();
        assert!(run.status.success(), "smoke program exited {:?}", run.status.code());
        assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok afcert/1");
        let _ = std::fs::remove_file(&out);
    }
}

fn tempfile_path(stem: &str) -> PathBuf {
    std::env::temp_dir().join(format!("{stem}_{}", std::process::id()))
}
