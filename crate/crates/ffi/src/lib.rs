//! C ABI over the twobridge pipeline.
//!
//! Every entry point returns a [`TbStatus`]. Reports come back as opaque
//! handles that the caller releases with `tb_report_free`. On failure the
//! message is kept per thread and read with `tb_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use twobridge::cli::{cmd_compute, gluing_report, Input, Report, RunConfig};
use twobridge::triangulation::GluingFile;
use twobridge::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TbStatus {
    Ok = 0,
    /// τ and ω differ beyond tolerance, or a verified check failed. The report is still returned.
    ComparisonFailed = 1,
    NotHyperbolic = 2,
    SolverFailure = 3,
    IoError = 4,
    InvalidArgument = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TbComplex {
    pub re: f64,
    pub im: f64,
}

/// Opaque result of one computation.
pub struct TbReport {
    report: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> TbStatus {
    match e.exit_code() {
        2 => TbStatus::NotHyperbolic,
        4 => TbStatus::IoError,
        _ => TbStatus::SolverFailure,
    }
}

fn guarded(f: impl FnOnce() -> TbStatus) -> TbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            TbStatus::Panic
        }
    }
}

/// Runs `make` and stores the report in `*out`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
unsafe fn deliver(out: *mut *mut TbReport, make: impl FnOnce() -> twobridge::Result<Report>) -> TbStatus {
    if out.is_null() {
        set_error("out pointer is null");
        return TbStatus::InvalidArgument;
    }
    *out = ptr::null_mut();
    guarded(|| match make() {
        Ok(report) => {
            let status = if report.ok() { TbStatus::Ok } else { TbStatus::ComparisonFailed };
            if status != TbStatus::Ok {
                set_error(format!("comparison failed for {}", report.knot));
            }
            *out = Box::into_raw(Box::new(TbReport { report }));
            status
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    })
}

fn config(input: Input, seed: u64, verify: bool) -> RunConfig {
    RunConfig { seed, verify, ..RunConfig::new(input) }
}

/// Computes τ and ω for the knot with the given twist vector.
///
/// # Safety
/// `twists` must point to `len` readable integers; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tb_compute_twists(
    twists: *const i64,
    len: usize,
    seed: u64,
    verify: bool,
    out: *mut *mut TbReport,
) -> TbStatus {
    if twists.is_null() && len > 0 {
        set_error("twists is null");
        return TbStatus::InvalidArgument;
    }
    let t = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(twists, len).to_vec() };
    deliver(out, || cmd_compute(&config(Input::Twists(t), seed, verify)))
}

/// Computes τ and ω for the knot with fraction p/q.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_compute_fraction(
    p: i64,
    q: i64,
    seed: u64,
    verify: bool,
    out: *mut *mut TbReport,
) -> TbStatus {
    deliver(out, || cmd_compute(&config(Input::Fraction(p, q), seed, verify)))
}

/// Computes τ from gluing data given as a NUL-terminated JSON document.
///
/// # Safety
/// `json` must be a valid C string; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tb_from_gluing_json(
    json: *const c_char,
    seed: u64,
    verify: bool,
    out: *mut *mut TbReport,
) -> TbStatus {
    if json.is_null() {
        set_error("json is null");
        return TbStatus::InvalidArgument;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t.to_owned(),
        Err(_) => {
            set_error("json is not UTF-8");
            return TbStatus::InvalidArgument;
        }
    };
    deliver(out, || {
        let file = GluingFile::from_json(&text)?;
        gluing_report(&file, "gluing data", &config(Input::Gluing("<memory>".into()), seed, verify))
    })
}

unsafe fn read_complex(
    report: *const TbReport,
    out: *mut TbComplex,
    pick: fn(&Report) -> Option<TbComplex>,
) -> TbStatus {
    if report.is_null() || out.is_null() {
        set_error("null argument");
        return TbStatus::InvalidArgument;
    }
    match pick(&(*report).report) {
        Some(z) => {
            *out = z;
            TbStatus::Ok
        }
        None => {
            set_error("value not available for this report");
            TbStatus::InvalidArgument
        }
    }
}

unsafe fn read_real(report: *const TbReport, out: *mut f64, pick: fn(&Report) -> Option<f64>) -> TbStatus {
    if report.is_null() || out.is_null() {
        set_error("null argument");
        return TbStatus::InvalidArgument;
    }
    match pick(&(*report).report) {
        Some(v) => {
            *out = v;
            TbStatus::Ok
        }
        None => {
            set_error("value not available for this report");
            TbStatus::InvalidArgument
        }
    }
}

/// The 1-loop invariant τ, defined up to sign.
///
/// # Safety
/// `report` must come from this library; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tb_report_tau(report: *const TbReport, out: *mut TbComplex) -> TbStatus {
    read_complex(report, out, |r| r.tau.map(|z| TbComplex { re: z.re, im: z.im }))
}

/// The Ohtsuki-Takata invariant ω. Absent for gluing-data reports.
///
/// # Safety
/// `report` must come from this library; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tb_report_omega(report: *const TbReport, out: *mut TbComplex) -> TbStatus {
    read_complex(report, out, |r| r.omega.map(|z| TbComplex { re: z.re, im: z.im }))
}

/// Hyperbolic volume of the geometric solution.
///
/// # Safety
/// `report` must come from this library; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tb_report_volume(report: *const TbReport, out: *mut f64) -> TbStatus {
    read_real(report, out, |r| r.volume)
}

/// Relative discrepancy min|τ ∓ ω|/|τ|. Absent for gluing-data reports.
///
/// # Safety
/// `report` must come from this library; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tb_report_discrepancy(report: *const TbReport, out: *mut f64) -> TbStatus {
    read_real(report, out, |r| r.relative)
}

/// The full report as JSON. Free with `tb_string_free`; null on bad input.
///
/// # Safety
/// `report` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn tb_report_json(report: *const TbReport) -> *mut c_char {
    if report.is_null() {
        set_error("report is null");
        return ptr::null_mut();
    }
    CString::new((*report).report.to_json()).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// # Safety
/// `s` must be null or a string returned by `tb_report_json`, freed once.
#[no_mangle]
pub unsafe extern "C" fn tb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `report` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn tb_report_free(report: *mut TbReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Message for the last failure on this thread, or null. Valid until the next call that fails.
#[no_mangle]
pub extern "C" fn tb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn tb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
