//! C ABI over the afcert engine.
//!
//! Every fallible call returns an [`AfcStatus`]; on failure a message is kept
//! per thread and read with [`afc_last_error_message`]. Strings handed out by
//! the library are freed with [`afc_string_free`], verdicts with
//! [`afc_verdict_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use afcert::criteria::{check_af_coeffs, EngineConfig};
use afcert::frey::FreyCurve;
use afcert::sunit::{enumerate_with_budget, LineEq, SunitError};
use afcert::{explain, Mode, SSet, Verdict, VerdictKind, Zint};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AfcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    BudgetExceeded = 5,
    Internal = 6,
}

/// Values of the `mode` argument of [`afc_check`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AfcMode {
    Strict = 0,
    Extended = 1,
}

/// Values returned by [`afc_verdict_kind`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AfcVerdictKind {
    FiniteDescent = 0,
    Finite = 1,
    ConditionalUnresolved = 2,
    Unknown = 3,
    Invalid = 4,
}

impl From<VerdictKind> for AfcVerdictKind {
    fn from(k: VerdictKind) -> Self {
        match k {
            VerdictKind::FiniteDescent => AfcVerdictKind::FiniteDescent,
            VerdictKind::Finite => AfcVerdictKind::Finite,
            VerdictKind::ConditionalUnresolved => AfcVerdictKind::ConditionalUnresolved,
            VerdictKind::Unknown => AfcVerdictKind::Unknown,
            VerdictKind::Invalid => AfcVerdictKind::Invalid,
        }
    }
}

/// Opaque verdict handle.
pub struct AfcVerdict {
    inner: Verdict,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(AfcStatus, String);

type Res<T> = Result<T, Failure>;

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Res<()>) -> AfcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AfcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            AfcStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(Failure(AfcStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(AfcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_int(p: *const c_char, what: &str) -> Res<Zint> {
    let s = read_str(p, what)?;
    s.trim()
        .parse::<Zint>()
        .map_err(|_| Failure(AfcStatus::ParseError, format!("{what}: not an integer: {s:?}")))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn null_out<T>(p: *mut T, what: &str) -> Res<()> {
    if p.is_null() {
        return Err(Failure(AfcStatus::NullPointer, format!("{what} is NULL")));
    }
    Ok(())
}

/// Decides the triple given as decimal strings. `mode` is an [`AfcMode`]
/// value. On success `*out` owns a new verdict.
///
/// # Safety
/// `a`, `b`, `c` must be NUL-terminated strings and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn afc_check(
    a: *const c_char,
    b: *const c_char,
    c: *const c_char,
    mode: i32,
    out: *mut *mut AfcVerdict,
) -> AfcStatus {
    guard(|| {
        null_out(out, "out")?;
        let coeffs = [read_int(a, "a")?, read_int(b, "b")?, read_int(c, "c")?];
        let mode = match mode {
            0 => Mode::Strict,
            1 => Mode::Extended,
            m => return Err(Failure(AfcStatus::InvalidArgument, format!("unknown mode {m}"))),
        };
        let v = check_af_coeffs(&coeffs, &EngineConfig { mode, tripwire_exp_bound: None });
        *out = Box::into_raw(Box::new(AfcVerdict { inner: v }));
        Ok(())
    })
}

/// An [`AfcVerdictKind`] value, or -1 for NULL.
///
/// # Safety
/// `v` must be NULL or a live handle from [`afc_check`].
#[no_mangle]
pub unsafe extern "C" fn afc_verdict_kind(v: *const AfcVerdict) -> i32 {
    match v.as_ref() {
        Some(v) => AfcVerdictKind::from(v.inner.kind) as i32,
        None => -1,
    }
}

/// The CLI exit code of the verdict, or -1 for NULL.
///
/// # Safety
/// `v` must be NULL or a live handle from [`afc_check`].
#[no_mangle]
pub unsafe extern "C" fn afc_verdict_exit_code(v: *const AfcVerdict) -> i32 {
    v.as_ref().map_or(-1, |v| v.inner.kind.exit_code())
}

/// One-line JSON record. Free with [`afc_string_free`]; NULL for NULL.
///
/// # Safety
/// `v` must be NULL or a live handle from [`afc_check`].
#[no_mangle]
pub unsafe extern "C" fn afc_verdict_to_json(v: *const AfcVerdict) -> *mut c_char {
    v.as_ref().map_or(ptr::null_mut(), |v| to_c_string(v.inner.to_json_line()))
}

/// Plain-text proof document. Free with [`afc_string_free`].
///
/// # Safety
/// `v` must be NULL or a live handle from [`afc_check`].
#[no_mangle]
pub unsafe extern "C" fn afc_verdict_explain(v: *const AfcVerdict) -> *mut c_char {
    v.as_ref().map_or(ptr::null_mut(), |v| to_c_string(explain(&v.inner).to_text()))
}

/// # Safety
/// `v` must be NULL or a handle from [`afc_check`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn afc_verdict_free(v: *mut AfcVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn afc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Proper points of `2^r X + Y + Z = 0` over the `n` primes at `primes`
/// with exponents up to `exp_bound`. `*out_count` receives the number of
/// points and `*out_json` a JSON array of `[x, y, z]` decimal strings.
///
/// # Safety
/// `primes` must point to `n` readable values (or be NULL with `n == 0`);
/// `out_count` and `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn afc_sunit_enumerate(
    r: u32,
    primes: *const u64,
    n: usize,
    exp_bound: u32,
    budget: u64,
    out_count: *mut usize,
    out_json: *mut *mut c_char,
) -> AfcStatus {
    guard(|| {
        null_out(out_count, "out_count")?;
        null_out(out_json, "out_json")?;
        if primes.is_null() && n > 0 {
            return Err(Failure(AfcStatus::NullPointer, "primes is NULL".into()));
        }
        let list: &[u64] = if n == 0 { &[] } else { std::slice::from_raw_parts(primes, n) };
        let s = SSet::from_u64s(list).map_err(|e| Failure(AfcStatus::InvalidArgument, e.to_string()))?;
        let en = enumerate_with_budget(&LineEq::two_power(r), &s, exp_bound, budget).map_err(|e| match e {
            SunitError::BudgetExceeded { .. } => Failure(AfcStatus::BudgetExceeded, e.to_string()),
            other => Failure(AfcStatus::InvalidArgument, other.to_string()),
        })?;
        let pts: Vec<[String; 3]> =
            en.points.iter().map(|p| p.point.coords.clone().map(|c| c.to_string())).collect();
        *out_count = pts.len();
        *out_json = to_c_string(serde_json::to_string(&pts).expect("points serialize"));
        Ok(())
    })
}

/// Conductor of the Frey curve `Y^2 = X(X - A)(X + B)` as a decimal string.
///
/// # Safety
/// `a`, `b` must be NUL-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn afc_frey_conductor(a: *const c_char, b: *const c_char, out: *mut *mut c_char) -> AfcStatus {
    guard(|| {
        null_out(out, "out")?;
        let curve = FreyCurve::new(read_int(a, "A")?, read_int(b, "B")?)
            .map_err(|e| Failure(AfcStatus::InvalidArgument, e.to_string()))?;
        let data = curve.conductor().map_err(|e| Failure(AfcStatus::Internal, e.to_string()))?;
        *out = to_c_string(data.conductor().to_string());
        Ok(())
    })
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn afc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Schema tag of the structured records, a static string.
#[no_mangle]
pub extern "C" fn afc_schema_version() -> *const c_char {
    static V: &CStr = c"afcert/1";
    V.as_ptr()
}
