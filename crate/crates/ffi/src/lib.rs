//! C ABI over the etatheta library.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free`. Every fallible call returns an [`EtStatus`]; on failure
//! [`et_last_error`] describes the error until the next call on the same
//! thread. Strings returned as `char *` are owned by the caller and must be
//! released with [`et_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use etatheta::addseq::{self, AdditionSequence, Algorithm, CostModel};
use etatheta::arb::OpCounts;
use etatheta::evaluator::{self, EvalReport, EvalRequest, Function, Method};
use etatheta::{Error, ExponentKind};

/// Status codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotUpperHalfPlane = 3,
    QTooLarge = 4,
    PrecisionUnderflow = 5,
    NotAMember = 6,
    UnsupportedKind = 7,
    EmptyTable = 8,
    Parse = 9,
    /// An arithmetic statement failed, e.g. a sequence did not validate.
    Failed = 10,
    /// A bug in the library; the message carries the panic payload.
    Internal = 99,
}

impl From<&Error> for EtStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotUpperHalfPlane => EtStatus::NotUpperHalfPlane,
            Error::QTooLarge(_) => EtStatus::QTooLarge,
            Error::PrecisionUnderflow(_) => EtStatus::PrecisionUnderflow,
            Error::NotAMember { .. } | Error::NotInCodomain { .. } => EtStatus::NotAMember,
            Error::UnsupportedKind(_) => EtStatus::UnsupportedKind,
            Error::EmptyTable => EtStatus::EmptyTable,
            Error::Parse { .. } => EtStatus::Parse,
            _ => EtStatus::InvalidArgument,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtFunction {
    Eta = 0,
    Theta0 = 1,
    Theta1 = 2,
    Theta2 = 3,
    /// theta0, theta1 and theta2 together.
    ThetaAll = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtMethod {
    Classical = 0,
    Optimized = 1,
    Bsgs = 2,
    Auto = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtKind {
    Pentagonal = 0,
    Trigonal = 1,
    Square = 2,
    AlmostSquare = 3,
    QuarterSquare = 4,
    A182568 = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtAlgorithm {
    Classical = 0,
    Generic = 1,
    Optimized = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtCostModel {
    Fft = 0,
    Schoolbook = 1,
}

/// Multiplication counts of one evaluation.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EtOpCounts {
    pub complex_mul: u64,
    pub complex_sqr: u64,
    pub complex_cube: u64,
    pub real_mul: u64,
    pub real_sqr: u64,
}

/// Result of an evaluation: one or three named complex values plus the
/// truncation and operation counts.
pub struct EtEvalResult {
    report: EvalReport,
    names: Vec<CString>,
}

/// An addition sequence.
pub struct EtAddSeq {
    seq: AdditionSequence,
}

impl From<EtFunction> for Function {
    fn from(f: EtFunction) -> Self {
        match f {
            EtFunction::Eta => Function::Eta,
            EtFunction::Theta0 => Function::Theta0,
            EtFunction::Theta1 => Function::Theta1,
            EtFunction::Theta2 => Function::Theta2,
            EtFunction::ThetaAll => Function::ThetaAll,
        }
    }
}

impl From<EtMethod> for Method {
    fn from(m: EtMethod) -> Self {
        match m {
            EtMethod::Classical => Method::Classical,
            EtMethod::Optimized => Method::Optimized,
            EtMethod::Bsgs => Method::Bsgs,
            EtMethod::Auto => Method::Auto,
        }
    }
}

impl From<EtKind> for ExponentKind {
    fn from(k: EtKind) -> Self {
        match k {
            EtKind::Pentagonal => ExponentKind::Pentagonal,
            EtKind::Trigonal => ExponentKind::Trigonal,
            EtKind::Square => ExponentKind::Square,
            EtKind::AlmostSquare => ExponentKind::AlmostSquare,
            EtKind::QuarterSquare => ExponentKind::QuarterSquare,
            EtKind::A182568 => ExponentKind::A182568,
        }
    }
}

impl From<EtAlgorithm> for Algorithm {
    fn from(a: EtAlgorithm) -> Self {
        match a {
            EtAlgorithm::Classical => Algorithm::Classical,
            EtAlgorithm::Generic => Algorithm::Generic,
            EtAlgorithm::Optimized => Algorithm::Optimized,
        }
    }
}

impl From<EtCostModel> for CostModel {
    fn from(m: EtCostModel) -> Self {
        match m {
            EtCostModel::Fft => CostModel::FFT,
            EtCostModel::Schoolbook => CostModel::SCHOOLBOOK,
        }
    }
}

impl From<&OpCounts> for EtOpCounts {
    fn from(c: &OpCounts) -> Self {
        EtOpCounts {
            complex_mul: c.complex_mul,
            complex_sqr: c.complex_sqr,
            complex_cube: c.complex_cube,
            real_mul: c.real_mul,
            real_sqr: c.real_sqr,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (EtStatus, String)>) -> EtStatus {
    set_last_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EtStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&msg);
            EtStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (EtStatus, String) {
    (EtStatus::from(&e), e.to_string())
}

fn null() -> (EtStatus, String) {
    (EtStatus::NullPointer, "null pointer argument".into())
}

/// # Safety
/// `s` must be null or a valid nul-terminated string.
unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, (EtStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (EtStatus::InvalidArgument, "string is not UTF-8".into()))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("no interior nul")
        .into_raw()
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn et_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn et_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn et_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

unsafe fn eval_common(
    function: EtFunction,
    tau: bool,
    re: *const c_char,
    im: *const c_char,
    prec: u32,
    method: EtMethod,
    out: *mut *mut EtEvalResult,
) -> EtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let (re, im) = (str_arg(re)?, str_arg(im)?);
        let req = if tau {
            EvalRequest::tau(function.into(), re, im, prec, method.into())
        } else {
            EvalRequest::q(function.into(), re, im, prec, method.into())
        };
        let report = req.and_then(|r| evaluator::eval(&r)).map_err(lib_err)?;
        let names = report
            .values
            .iter()
            .map(|(n, _)| CString::new(n.as_str()).expect("ascii name"))
            .collect();
        *out = Box::into_raw(Box::new(EtEvalResult { report, names }));
        Ok(())
    })
}

/// Evaluates `function` at `tau = re + i im` to `prec` bits. The decimal
/// strings are parsed exactly.
///
/// # Safety
/// `re` and `im` must be valid nul-terminated strings and `out` a valid
/// pointer; on success `*out` receives a handle to free with [`et_result_free`].
#[no_mangle]
pub unsafe extern "C" fn et_eval_tau(
    function: EtFunction,
    re: *const c_char,
    im: *const c_char,
    prec: u32,
    method: EtMethod,
    out: *mut *mut EtEvalResult,
) -> EtStatus {
    eval_common(function, true, re, im, prec, method, out)
}

/// As [`et_eval_tau`] but from `q` directly: `q = e^(2 pi i tau)` for eta and
/// `q = e^(pi i tau)` for the theta functions.
///
/// # Safety
/// As for [`et_eval_tau`].
#[no_mangle]
pub unsafe extern "C" fn et_eval_q(
    function: EtFunction,
    re: *const c_char,
    im: *const c_char,
    prec: u32,
    method: EtMethod,
    out: *mut *mut EtEvalResult,
) -> EtStatus {
    eval_common(function, false, re, im, prec, method, out)
}

/// Number of values in the result: 3 for `ThetaAll`, otherwise 1.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn et_result_count(r: *const EtEvalResult) -> usize {
    r.as_ref().map_or(0, |r| r.names.len())
}

/// Name of value `i` (`"eta"`, `"theta0"`, ...), owned by the handle.
/// Null if `i` is out of range.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn et_result_name(r: *const EtEvalResult, i: usize) -> *const c_char {
    r.as_ref()
        .and_then(|r| r.names.get(i))
        .map_or(ptr::null(), |n| n.as_ptr())
}

/// Value `i` as decimal strings (`hex == 0`) or exact hexadecimal floats
/// (`hex != 0`). Both strings are released with [`et_string_free`].
///
/// # Safety
/// `r` must be a live handle; `re_out` and `im_out` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn et_result_value(
    r: *const EtEvalResult,
    i: usize,
    hex: i32,
    re_out: *mut *mut c_char,
    im_out: *mut *mut c_char,
) -> EtStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(null)?;
        if re_out.is_null() || im_out.is_null() {
            return Err(null());
        }
        let (_, v) = r.report.values.get(i).ok_or((
            EtStatus::InvalidArgument,
            format!("value index {i} out of range"),
        ))?;
        let (re, im) = if hex != 0 { v.to_hex() } else { v.to_decimal() };
        *re_out = to_c_string(re);
        *im_out = to_c_string(im);
        Ok(())
    })
}

/// Truncation order used (largest exponent allowed by the error bound).
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn et_result_truncation(r: *const EtEvalResult) -> u64 {
    r.as_ref().map_or(0, |r| r.report.t)
}

/// Operation counts of the evaluation; zeros for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn et_result_counts(r: *const EtEvalResult) -> EtOpCounts {
    r.as_ref()
        .map_or_else(EtOpCounts::default, |r| (&r.report.counts).into())
}

/// Method actually used; `Auto` is resolved.
///
/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn et_result_method(r: *const EtEvalResult) -> EtMethod {
    match r.as_ref().map(|r| r.report.method) {
        Some(Method::Classical) => EtMethod::Classical,
        Some(Method::Optimized) => EtMethod::Optimized,
        Some(Method::Bsgs) => EtMethod::Bsgs,
        _ => EtMethod::Auto,
    }
}

/// The full report as JSON, released with [`et_string_free`]. Null for a
/// null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn et_result_json(r: *const EtEvalResult) -> *mut c_char {
    match r.as_ref() {
        Some(r) => to_c_string(r.report.to_json(true).to_string()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `r` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn et_result_free(r: *mut EtEvalResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Builds an addition sequence covering the first `n` exponents of `kind`.
///
/// # Safety
/// `out` must be a valid pointer; on success `*out` receives a handle to
/// free with [`et_addseq_free`].
#[no_mangle]
pub unsafe extern "C" fn et_addseq_build(
    kind: EtKind,
    n: u64,
    algo: EtAlgorithm,
    out: *mut *mut EtAddSeq,
) -> EtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let seq = addseq::build(kind.into(), n, algo.into()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(EtAddSeq { seq }));
        Ok(())
    })
}

/// Parses the text form (`target kind a [b]` per line) or the JSON form.
///
/// # Safety
/// `text` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn et_addseq_parse(text: *const c_char, out: *mut *mut EtAddSeq) -> EtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let text = str_arg(text)?;
        let seq = if text.trim_start().starts_with('{') {
            AdditionSequence::from_json(text)
        } else {
            AdditionSequence::from_text(text)
        }
        .map_err(lib_err)?;
        *out = Box::into_raw(Box::new(EtAddSeq { seq }));
        Ok(())
    })
}

/// Number of elements, including the leaf 1.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn et_addseq_len(s: *const EtAddSeq) -> usize {
    s.as_ref().map_or(0, |s| s.seq.len())
}

/// Cost in real multiplications under `model`; NaN for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn et_addseq_cost(s: *const EtAddSeq, model: EtCostModel) -> f64 {
    s.as_ref().map_or(f64::NAN, |s| s.seq.cost(model.into()))
}

/// Checks every step and target. Returns `Failed` with a message if the
/// sequence is not valid.
///
/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn et_addseq_validate(s: *const EtAddSeq) -> EtStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(null)?;
        s.seq
            .validate()
            .map_err(|v| (EtStatus::Failed, v.to_string()))
    })
}

/// Text form, released with [`et_string_free`]. Null for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn et_addseq_to_text(s: *const EtAddSeq) -> *mut c_char {
    s.as_ref()
        .map_or(ptr::null_mut(), |s| to_c_string(s.seq.to_text()))
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn et_addseq_free(s: *mut EtAddSeq) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of distinct values of the sequence modulo `m`.
#[no_mangle]
pub extern "C" fn et_count_values(kind: EtKind, m: u64) -> u64 {
    etatheta::modcount::count_values(kind.into(), m)
}
