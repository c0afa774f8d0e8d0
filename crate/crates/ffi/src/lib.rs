//! C interface to the fibercheck engine.
//!
//! Values cross the boundary as opaque handles built from JSON documents.
//! Every function returns an [`FcStatus`]; on failure the message is kept in
//! a thread-local slot readable through [`fc_last_error`]. Strings handed to
//! the caller are owned by the library and must be released with
//! [`fc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fibercheck::criteria::{check_main_theorem, is_universally_exact};
use fibercheck::document::Document;
use fibercheck::linalg::snf;
use fibercheck::{BoundedComplex, Error, ExactMatrix, FpModule, Prime};
use serde_json::json;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    /// Null pointer or invalid UTF-8.
    InvalidArgument = 1,
    /// Malformed document or literal.
    Parse = 2,
    /// Well-formed input rejected by the engine.
    Math = 3,
    /// Cross-checked computations disagreed.
    Violation = 4,
    /// The engine panicked; the message is in the error slot.
    Panic = 5,
}

/// Opaque matrix handle.
pub struct FcMatrix(ExactMatrix);
/// Opaque finitely presented module handle.
pub struct FcModule(FpModule);
/// Opaque bounded complex handle.
pub struct FcComplex(BoundedComplex);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Arg(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn status_of(e: &Error) -> FcStatus {
    match e {
        Error::Violation(_) => FcStatus::Violation,
        Error::Parse(_) | Error::InvalidRing(_) | Error::InvalidElement { .. } => FcStatus::Parse,
        _ => FcStatus::Math,
    }
}

/// Run `f` behind a panic guard and translate its outcome.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FcStatus::Ok
        }
        Ok(Err(Failure::Arg(m))) => {
            set_error(m);
            FcStatus::InvalidArgument
        }
        Ok(Err(Failure::Engine(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            FcStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Arg(format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Arg(format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::Arg(format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Arg("output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Arg("output contains a nul byte".into()))?;
    put(out, c.into_raw())
}

fn parse_prime(s: &str) -> Result<Prime, Failure> {
    s.parse::<Prime>().map_err(Failure::from)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn fc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a matrix document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_matrix_from_json(json: *const c_char, out: *mut *mut FcMatrix) -> FcStatus {
    guard(|| {
        let m = Document::parse(str_arg(json, "json")?)?.matrix()?;
        put(out, Box::into_raw(Box::new(FcMatrix(m))))
    })
}

/// # Safety
/// `m` must be null or a live handle from [`fc_matrix_from_json`].
#[no_mangle]
pub unsafe extern "C" fn fc_matrix_free(m: *mut FcMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Verified Smith normal form as JSON: elementary divisors and `U`, `D`, `V`
/// with `A = U D V`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_matrix_snf_json(m: *const FcMatrix, out: *mut *mut c_char) -> FcStatus {
    guard(|| {
        let a = &handle(m, "matrix")?.0;
        let s = snf(a);
        s.verify(a)?;
        let rows = |x: &ExactMatrix| Document::from_matrix(x);
        let v = json!({
            "elementary_divisors": s.elementary_divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "U": rows(&s.u), "D": rows(&s.d), "V": rows(&s.v),
        });
        put_string(out, v.to_string())
    })
}

/// Parse a module document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_module_from_json(json: *const c_char, out: *mut *mut FcModule) -> FcStatus {
    guard(|| {
        let m = Document::parse(str_arg(json, "json")?)?.module()?;
        put(out, Box::into_raw(Box::new(FcModule(m))))
    })
}

/// # Safety
/// `m` must be null or a live handle from [`fc_module_from_json`].
#[no_mangle]
pub unsafe extern "C" fn fc_module_free(m: *mut FcModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Invariant factors as JSON `{"free_rank": r, "torsion": [...]}`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_module_invariant_factors_json(m: *const FcModule, out: *mut *mut c_char) -> FcStatus {
    guard(|| {
        let inv = handle(m, "module")?.0.invariant_factors();
        put_string(out, serde_json::to_string(&inv).expect("serializable"))
    })
}

/// Dimension of the fiber `M ⊗ κ(q)` at a prime literal such as `"(0)"` or `"3"`.
///
/// # Safety
/// `m` must be a live handle, `prime` nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_module_fiber_dimension(
    m: *const FcModule,
    prime: *const c_char,
    out: *mut usize,
) -> FcStatus {
    guard(|| {
        let q = parse_prime(str_arg(prime, "prime")?)?;
        let d = handle(m, "module")?.0.fiber_dimension(q)?;
        put(out, d)
    })
}

/// Parse a complex document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_complex_from_json(json: *const c_char, out: *mut *mut FcComplex) -> FcStatus {
    guard(|| {
        let c = Document::parse(str_arg(json, "json")?)?.complex()?;
        put(out, Box::into_raw(Box::new(FcComplex(c))))
    })
}

/// # Safety
/// `c` must be null or a live handle from [`fc_complex_from_json`].
#[no_mangle]
pub unsafe extern "C" fn fc_complex_free(c: *mut FcComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Homology as JSON, degrees descending.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_complex_homology_json(c: *const FcComplex, out: *mut *mut c_char) -> FcStatus {
    guard(|| {
        let c = &handle(c, "complex")?.0;
        let mut items = Vec::new();
        for i in c.degrees().rev() {
            items.push(json!({"degree": i, "module": c.homology(i)?.invariant_factors()}));
        }
        put_string(out, serde_json::Value::Array(items).to_string())
    })
}

/// Fiber homology dimensions at one prime as JSON.
///
/// # Safety
/// `c` must be a live handle, `prime` nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_complex_fiber_profile_json(
    c: *const FcComplex,
    prime: *const c_char,
    out: *mut *mut c_char,
) -> FcStatus {
    guard(|| {
        let q = parse_prime(str_arg(prime, "prime")?)?;
        let p = handle(c, "complex")?.0.fiber_profile(q)?;
        put_string(out, serde_json::to_string(&p).expect("serializable"))
    })
}

/// Full theorem report as JSON. A `VIOLATION` verdict returns
/// [`FcStatus::Violation`] and still writes the report.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_complex_check_theorem_json(c: *const FcComplex, out: *mut *mut c_char) -> FcStatus {
    let mut violated = false;
    let status = guard(|| {
        let r = check_main_theorem(&handle(c, "complex")?.0)?;
        violated = r.verdict == fibercheck::criteria::Verdict::Violation;
        put_string(out, serde_json::to_string(&r).expect("serializable"))
    });
    if status == FcStatus::Ok && violated {
        set_error("main theorem verdict: VIOLATION".into());
        return FcStatus::Violation;
    }
    status
}

/// Universal exactness, cross-checked three ways; writes 1 or 0.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fc_complex_is_universally_exact(c: *const FcComplex, out: *mut c_int) -> FcStatus {
    guard(|| {
        let r = is_universally_exact(&handle(c, "complex")?.0)?;
        put(out, c_int::from(r.value()))
    })
}

/// Run a CLI command in-process. `argv` holds `argc` arguments without the
/// program name; `input` (nullable) is served as stdin. Report and
/// diagnostics are written to `out` and `err`, the process exit code to
/// `exit_code`.
///
/// # Safety
/// `argv` must point to `argc` nul-terminated strings; the three output
/// pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_run_command(
    argv: *const *const c_char,
    argc: usize,
    input: *const c_char,
    out: *mut *mut c_char,
    err: *mut *mut c_char,
    exit_code: *mut c_int,
) -> FcStatus {
    guard(|| {
        if argv.is_null() && argc > 0 {
            return Err(Failure::Arg("argv is null".into()));
        }
        let mut args = vec!["fibercheck".to_string()];
        for k in 0..argc {
            args.push(str_arg(*argv.add(k), "argument")?.to_string());
        }
        let stdin = if input.is_null() { "" } else { str_arg(input, "input")? };
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = fibercheck::cli::run(args, &mut stdin.as_bytes(), &mut o, &mut e);
        put(exit_code, code)?;
        put_string(out, String::from_utf8_lossy(&o).into_owned())?;
        put_string(err, String::from_utf8_lossy(&e).into_owned())
    })
}
