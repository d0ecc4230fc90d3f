//! C ABI for the weylforge engine.
//!
//! Values are opaque `WfValue` handles owned by the caller and released with
//! `wf_value_free`. Strings returned through out-parameters are released with
//! `wf_string_free`. Every function returns a `WfStatus`; on failure the
//! message is available from `wf_last_error` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use weylforge::cli::conformance::run_suite;
use weylforge::cli::eval::{evaluate, parse_gaussian, Context, Value};
use weylforge::superop::{diamond, pmb, PmbForm};
use weylforge::weyl::{t_monomial, TForm};
use weylforge::wwgm::{ms, ms_inverse};
use weylforge::{Error, Format, OpPoly, OrderParam, PhasePoly, Render, SRule};

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Expression = 3,
    DofMismatch = 4,
    NegativeHbarPower = 5,
    TypeMismatch = 6,
    CheckFailed = 7,
    InvalidArgument = 8,
    Panic = 9,
}

/// Output format for `wf_value_render`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WfFormat {
    Text = 0,
    Json = 1,
    Latex = 2,
}

/// What a handle holds.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WfKind {
    Scalar = 0,
    Phase = 1,
    Operator = 2,
    Flow = 3,
}

/// Opaque value handle.
pub struct WfValue(Value);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(WfStatus, String);

type Outcome<T> = Result<T, Failure>;

fn fail<T>(status: WfStatus, message: impl Into<String>) -> Outcome<T> {
    Err(Failure(status, message.into()))
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DofMismatch { .. } | Error::DofIndexOutOfRange { .. } => WfStatus::DofMismatch,
            Error::NegativeHbarPower(_) => WfStatus::NegativeHbarPower,
            Error::DivisionByZero | Error::Precondition(_) => WfStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Run `body`, record any failure, and turn panics into `WfStatus::Panic`.
fn guard(body: impl FnOnce() -> Outcome<()>) -> WfStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => WfStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            WfStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return fail(WfStatus::NullPointer, format!("{what} is null"));
    }
    CStr::from_ptr(p).to_str().or_else(|_| fail(WfStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn value<'a>(p: *const WfValue, what: &str) -> Outcome<&'a Value> {
    match p.as_ref() {
        Some(v) => Ok(&v.0),
        None => fail(WfStatus::NullPointer, format!("{what} is null")),
    }
}

unsafe fn order(s_value: *const c_char) -> Outcome<OrderParam> {
    if s_value.is_null() {
        return Ok(OrderParam::formal());
    }
    let t = text(s_value, "s value")?;
    if t.trim() == "s" {
        return Ok(OrderParam::formal());
    }
    parse_gaussian(t).map(OrderParam::value).or_else(|e| fail(WfStatus::Expression, e.to_string()))
}

unsafe fn write_value(out: *mut *mut WfValue, v: Value) -> Outcome<()> {
    if out.is_null() {
        return fail(WfStatus::NullPointer, "output pointer is null");
    }
    *out = Box::into_raw(Box::new(WfValue(v)));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Outcome<()> {
    if out.is_null() {
        return fail(WfStatus::NullPointer, "output pointer is null");
    }
    let c = CString::new(s).or_else(|_| fail(WfStatus::InvalidArgument, "result contains a NUL byte"))?;
    *out = c.into_raw();
    Ok(())
}

fn as_phase(v: &Value, dof: usize) -> Outcome<PhasePoly> {
    match v {
        Value::Phase(f) => Ok(f.clone()),
        Value::Scalar(x) => Ok(PhasePoly::constant(dof, x.clone())),
        other => fail(WfStatus::TypeMismatch, format!("expected a phase-space polynomial, got {}", other.kind_name())),
    }
}

fn as_op(v: &Value, dof: usize) -> Outcome<OpPoly> {
    match v {
        Value::Op(f) => Ok(f.clone()),
        Value::Scalar(x) => Ok(OpPoly::constant(dof, x.clone())),
        other => fail(WfStatus::TypeMismatch, format!("expected an operator polynomial, got {}", other.kind_name())),
    }
}

fn dof_of(v: &Value) -> usize {
    match v {
        Value::Phase(f) => f.dof(),
        Value::Op(f) => f.dof(),
        _ => 1,
    }
}

/// Shared body of the two-argument operations.
unsafe fn binary(
    a: *const WfValue,
    b: *const WfValue,
    out: *mut *mut WfValue,
    op: impl FnOnce(&Value, &Value, usize) -> Outcome<Value>,
) -> WfStatus {
    guard(|| {
        let (a, b) = (value(a, "first operand")?, value(b, "second operand")?);
        let dof = dof_of(a).max(dof_of(b));
        let v = op(a, b, dof)?;
        write_value(out, v)
    })
}

/// Parse and evaluate an expression. `s_value` may be null for formal `s`.
///
/// # Safety
/// `input` and a non-null `s_value` must be NUL-terminated strings; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn wf_eval(
    input: *const c_char,
    dof: usize,
    s_value: *const c_char,
    out: *mut *mut WfValue,
) -> WfStatus {
    guard(|| {
        let input = text(input, "input")?;
        if dof == 0 {
            return fail(WfStatus::InvalidArgument, "dof must be at least 1");
        }
        let ctx = Context { dof, order: order(s_value)?, s_rule: SRule::FixS };
        let v = evaluate(input, &ctx).or_else(|e| fail(WfStatus::Expression, e.to_string()))?;
        write_value(out, v)
    })
}

/// Normal form of the s-ordered monomial `t_nm` for one degree of freedom.
///
/// # Safety
/// A non-null `s_value` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wf_t_monomial(n: u32, m: u32, s_value: *const c_char, out: *mut *mut WfValue) -> WfStatus {
    guard(|| {
        let t = t_monomial(n, m, &order(s_value)?, TForm::QForm);
        write_value(out, Value::Op(t))
    })
}

/// Poisson bracket of two phase-space values.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wf_poisson(a: *const WfValue, b: *const WfValue, out: *mut *mut WfValue) -> WfStatus {
    binary(a, b, out, |a, b, dof| Ok(Value::Phase(as_phase(a, dof)?.poisson_bracket(&as_phase(b, dof)?)?)))
}

/// Moyal bracket of two phase-space values.
///
/// # Safety
/// `a` and `b` must be live handles; a non-null `s_value` must be a
/// NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wf_moyal(
    a: *const WfValue,
    b: *const WfValue,
    s_value: *const c_char,
    out: *mut *mut WfValue,
) -> WfStatus {
    binary(a, b, out, |a, b, dof| {
        let s = order(s_value)?;
        Ok(Value::Phase(as_phase(a, dof)?.moyal_bracket(&as_phase(b, dof)?, &s)?))
    })
}

/// Star product of two phase-space values.
///
/// # Safety
/// As for `wf_moyal`.
#[no_mangle]
pub unsafe extern "C" fn wf_star(
    a: *const WfValue,
    b: *const WfValue,
    s_value: *const c_char,
    out: *mut *mut WfValue,
) -> WfStatus {
    binary(a, b, out, |a, b, dof| {
        let s = order(s_value)?;
        Ok(Value::Phase(as_phase(a, dof)?.star_product(&as_phase(b, dof)?, &s)?))
    })
}

/// Poisson-Moyal bracket of two operator values.
///
/// # Safety
/// As for `wf_moyal`.
#[no_mangle]
pub unsafe extern "C" fn wf_pmb(
    a: *const WfValue,
    b: *const WfValue,
    s_value: *const c_char,
    out: *mut *mut WfValue,
) -> WfStatus {
    binary(a, b, out, |a, b, dof| {
        let s = order(s_value)?;
        Ok(Value::Op(pmb(&as_op(a, dof)?, &as_op(b, dof)?, &s, PmbForm::GOnF)?))
    })
}

/// Diamond product of two operator values.
///
/// # Safety
/// As for `wf_moyal`.
#[no_mangle]
pub unsafe extern "C" fn wf_diamond(
    a: *const WfValue,
    b: *const WfValue,
    s_value: *const c_char,
    out: *mut *mut WfValue,
) -> WfStatus {
    binary(a, b, out, |a, b, dof| {
        let s = order(s_value)?;
        Ok(Value::Op(diamond(&as_op(a, dof)?, &as_op(b, dof)?, &s)?))
    })
}

/// Commutator `ab - ba` of two operator values.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wf_commutator(a: *const WfValue, b: *const WfValue, out: *mut *mut WfValue) -> WfStatus {
    binary(a, b, out, |a, b, dof| Ok(Value::Op(as_op(a, dof)?.commutator(&as_op(b, dof)?)?)))
}

/// Map a phase-space value to its s-ordered operator.
///
/// # Safety
/// `a` must be a live handle; a non-null `s_value` must be a NUL-terminated
/// string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wf_ms(a: *const WfValue, s_value: *const c_char, out: *mut *mut WfValue) -> WfStatus {
    guard(|| {
        let a = value(a, "operand")?;
        let f = as_phase(a, dof_of(a))?;
        write_value(out, Value::Op(ms(&f, &order(s_value)?)))
    })
}

/// Inverse of `wf_ms`.
///
/// # Safety
/// As for `wf_ms`.
#[no_mangle]
pub unsafe extern "C" fn wf_ms_inverse(a: *const WfValue, s_value: *const c_char, out: *mut *mut WfValue) -> WfStatus {
    guard(|| {
        let a = value(a, "operand")?;
        let f = as_op(a, dof_of(a))?;
        write_value(out, Value::Phase(ms_inverse(&f, &order(s_value)?)))
    })
}

/// Render a value as a newly allocated string.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable. Free the result with
/// `wf_string_free`.
#[no_mangle]
pub unsafe extern "C" fn wf_value_render(v: *const WfValue, format: WfFormat, out: *mut *mut c_char) -> WfStatus {
    guard(|| {
        let v = value(v, "value")?;
        let format = match format {
            WfFormat::Text => Format::Text,
            WfFormat::Json => Format::Json,
            WfFormat::Latex => Format::Latex,
        };
        write_string(out, v.render(format))
    })
}

/// Kind of the value behind a handle.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wf_value_kind(v: *const WfValue, out: *mut WfKind) -> WfStatus {
    guard(|| {
        let kind = match value(v, "value")? {
            Value::Scalar(_) => WfKind::Scalar,
            Value::Phase(_) => WfKind::Phase,
            Value::Op(_) => WfKind::Operator,
            Value::PhaseFlow(_) | Value::OpFlow(_) => WfKind::Flow,
        };
        match out.as_mut() {
            Some(o) => *o = kind,
            None => return fail(WfStatus::NullPointer, "output pointer is null"),
        }
        Ok(())
    })
}

/// Exact equality; a scalar equals the matching constant polynomial.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wf_value_equal(a: *const WfValue, b: *const WfValue, out: *mut bool) -> WfStatus {
    guard(|| {
        let same = value(a, "first operand")?.same_as(value(b, "second operand")?);
        match out.as_mut() {
            Some(o) => *o = same,
            None => return fail(WfStatus::NullPointer, "output pointer is null"),
        }
        Ok(())
    })
}

/// Run a conformance suite and return its JSON report. Returns
/// `WfStatus::CheckFailed` (with the report still written) when a check fails.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wf_check_suite(suite: *const c_char, seed: u64, out_json: *mut *mut c_char) -> WfStatus {
    guard(|| {
        let report = run_suite(text(suite, "suite")?, seed).or_else(|e| fail(WfStatus::InvalidArgument, e))?;
        write_string(out_json, report.to_json())?;
        if report.passed {
            Ok(())
        } else {
            fail(WfStatus::CheckFailed, format!("{} of {} checks failed", report.failed, report.total))
        }
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `v` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wf_value_free(v: *mut WfValue) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread; empty after a success. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn wf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn wf_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}
