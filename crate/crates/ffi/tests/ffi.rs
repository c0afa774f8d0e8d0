use std::ffi::{c_char, c_int, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use fibercheck_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    fc_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = fc_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn snf_through_handles() {
    unsafe {
        let mut m = ptr::null_mut();
        let doc = cstr(r#"{"ring":"Z","matrix":[[2,4],[6,8]]}"#);
        assert_eq!(fc_matrix_from_json(doc.as_ptr(), &mut m), FcStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(fc_matrix_snf_json(m, &mut out), FcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["elementary_divisors"], serde_json::json!(["2", "4"]));
        fc_matrix_free(m);
    }
}

#[test]
fn module_queries() {
    unsafe {
        let mut m = ptr::null_mut();
        let doc = cstr(r#"{"ring":"Z","module":{"generators":2,"relations":[[2,0],[0,3]]}}"#);
        assert_eq!(fc_module_from_json(doc.as_ptr(), &mut m), FcStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(fc_module_invariant_factors_json(m, &mut out), FcStatus::Ok);
        assert_eq!(take(out), r#"{"free_rank":0,"torsion":["6"]}"#);
        let mut d = 99usize;
        for (q, want) in [("(0)", 0), ("2", 1), ("(3)", 1), ("5", 0)] {
            let q = cstr(q);
            assert_eq!(fc_module_fiber_dimension(m, q.as_ptr(), &mut d), FcStatus::Ok);
            assert_eq!(d, want);
        }
        let q = cstr("4");
        assert_eq!(fc_module_fiber_dimension(m, q.as_ptr(), &mut d), FcStatus::Parse);
        assert!(last_error().contains('4'));
        fc_module_free(m);
    }
}

#[test]
fn complex_reports() {
    unsafe {
        let mut c = ptr::null_mut();
        let doc = cstr(r#"{"ring":"Z","lo":0,"hi":2,"ranks_or_terms":[1,2,1],"boundaries":[[[1],[-1]],[[1,1]]]}"#);
        assert_eq!(fc_complex_from_json(doc.as_ptr(), &mut c), FcStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(fc_complex_homology_json(c, &mut out), FcStatus::Ok);
        let h: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(h.as_array().unwrap().len(), 3);
        assert_eq!(h[0]["degree"], 2);
        assert_eq!(fc_complex_check_theorem_json(c, &mut out), FcStatus::Ok);
        let r: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(r["verdict"], "consistent");
        assert_eq!(r["hypothesis_holds"], true);
        let mut ue: c_int = -1;
        assert_eq!(fc_complex_is_universally_exact(c, &mut ue), FcStatus::Ok);
        assert_eq!(ue, 1);
        fc_complex_free(c);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(fc_complex_from_json(ptr::null(), &mut c), FcStatus::InvalidArgument);
        let bad = cstr(r#"{"ring":"Z","lo":0,"hi":2,"ranks_or_terms":[1,1,1],"boundaries":[[[1]],[[1]]]}"#);
        assert_eq!(fc_complex_from_json(bad.as_ptr(), &mut c), FcStatus::Math);
        assert!(c.is_null());
        let bad = cstr("not json");
        assert_eq!(fc_complex_from_json(bad.as_ptr(), &mut c), FcStatus::Parse);
        assert!(!last_error().is_empty());
        let mut out = ptr::null_mut();
        assert_eq!(fc_complex_homology_json(ptr::null(), &mut out), FcStatus::InvalidArgument);
        fc_string_free(ptr::null_mut());
        fc_matrix_free(ptr::null_mut());
    }
}

#[test]
fn run_command_in_process() {
    unsafe {
        let args: Vec<CString> = ["check-map", "-"].iter().map(|s| cstr(s)).collect();
        let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
        let input = cstr(
            r#"{"ring":"Z","map":{"source":{"generators":1,"relations":[]},"target":{"generators":1,"relations":[]},"matrix":[[2]]}}"#,
        );
        let (mut out, mut err, mut code) = (ptr::null_mut(), ptr::null_mut(), -1);
        let st = fc_run_command(argv.as_ptr(), argv.len(), input.as_ptr(), &mut out, &mut err, &mut code);
        assert_eq!(st, FcStatus::Ok);
        assert_eq!(code, 0);
        assert!(take(out).contains("pure: false"));
        assert_eq!(take(err), "");

        let args = [cstr("snf"), cstr("--inline"), cstr("{")];
        let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
        let st = fc_run_command(argv.as_ptr(), argv.len(), ptr::null(), &mut out, &mut err, &mut code);
        assert_eq!(st, FcStatus::Ok);
        assert_eq!(code, 2);
        take(out);
        assert!(take(err).contains("error"));
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(fc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    // The test binary lives in <target>/<profile>/deps.
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let include = root.join("include");
    assert!(include.join("fibercheck.h").exists(), "header not generated");
    let lib = target_dir().join("libfibercheck_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping C link check: no C compiler or static library");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(root.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["prime"], "(2)");
}
