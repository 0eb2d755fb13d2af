//! C ABI over `branes-core`.
//!
//! Handles are opaque and owned by the caller once returned; release each with
//! its `_free` function. Every fallible call returns a [`BranesStatus`] and, on
//! failure, records a message readable through [`branes_last_error`].
//! Strings returned as `char *` are heap-allocated and must be released with
//! [`branes_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use branes::cli::{self, RunOptions, RunReport, Scenario};
use branes::entropy::{fuzzy_entropy, normalization_check, sharp_entropy, FuzzConfig, StateSystem};
use branes::{Error, Limits};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranesStatus {
    Ok = 0,
    /// Only from [`branes_report_status`]: some check failed.
    CheckFailed = 1,
    InvalidInput = 2,
    ResourceCap = 3,
    Precondition = 4,
    NotInUniverse = 5,
    Incomplete = 6,
    NullArgument = 7,
    Utf8 = 8,
    Panic = 9,
}

impl From<&Error> for BranesStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse(_) | Error::Invalid(_) => BranesStatus::InvalidInput,
            Error::ResourceCap { .. } => BranesStatus::ResourceCap,
            Error::Precondition(_) => BranesStatus::Precondition,
            Error::NotInUniverse(_) => BranesStatus::NotInUniverse,
            Error::Incomplete(_) => BranesStatus::Incomplete,
        }
    }
}

/// A parsed scenario.
pub struct BranesScenario {
    inner: Scenario,
}

/// The report of one scenario run.
pub struct BranesReport {
    inner: RunReport,
}

/// Overrides for [`branes_run`]. Zero fields keep the scenario's value.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct BranesRunOptions {
    pub has_seed: bool,
    pub seed: u64,
    pub max_dim: usize,
    pub carrier_cap: usize,
    pub quad_panels: usize,
    pub tolerance: f64,
    pub timings: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: BranesStatus, msg: impl Into<String>) -> BranesStatus {
    set_error(msg);
    status
}

fn guard(body: impl FnOnce() -> BranesStatus) -> BranesStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| fail(BranesStatus::Panic, "internal panic"))
}

fn lift<T>(r: branes::Result<T>) -> Result<T, BranesStatus> {
    r.map_err(|e| fail((&e).into(), e.to_string()))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, BranesStatus> {
    if s.is_null() {
        return Err(fail(BranesStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(BranesStatus::Utf8, format!("{what}: {e}")))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

fn status_of(r: Result<(), BranesStatus>) -> BranesStatus {
    match r {
        Ok(()) => BranesStatus::Ok,
        Err(s) => s,
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn branes_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn branes_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn branes_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn branes_scenario_from_json(json: *const c_char, out: *mut *mut BranesScenario) -> BranesStatus {
    guard(|| {
        status_of((|| {
            if out.is_null() {
                return Err(fail(BranesStatus::NullArgument, "out is null"));
            }
            let text = read_str(json, "json")?;
            let inner = lift(Scenario::from_json(text))?;
            *out = Box::into_raw(Box::new(BranesScenario { inner }));
            Ok(())
        })())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn branes_scenario_load(path: *const c_char, out: *mut *mut BranesScenario) -> BranesStatus {
    guard(|| {
        status_of((|| {
            if out.is_null() {
                return Err(fail(BranesStatus::NullArgument, "out is null"));
            }
            let path = read_str(path, "path")?;
            let inner = lift(cli::load(Path::new(path)))?;
            *out = Box::into_raw(Box::new(BranesScenario { inner }));
            Ok(())
        })())
    })
}

/// # Safety
/// `s` must come from a scenario constructor and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn branes_scenario_free(s: *mut BranesScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Runs every check of the scenario. Check failures still return
/// `BRANES_STATUS_OK`; inspect the report for them.
///
/// # Safety
/// `scenario` must be a live handle, `options` null or readable, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn branes_run(
    scenario: *const BranesScenario,
    options: *const BranesRunOptions,
    out: *mut *mut BranesReport,
) -> BranesStatus {
    guard(|| {
        status_of((|| {
            if scenario.is_null() || out.is_null() {
                return Err(fail(BranesStatus::NullArgument, "scenario or out is null"));
            }
            let s = &(*scenario).inner;
            let o = if options.is_null() { BranesRunOptions::default() } else { *options };
            let limits = lift(cli::effective_limits(s, |l: &mut Limits| {
                if o.max_dim > 0 {
                    l.max_dim = o.max_dim;
                }
                if o.carrier_cap > 0 {
                    l.carrier_cap = o.carrier_cap;
                }
                if o.quad_panels > 0 {
                    l.quad_panels = o.quad_panels;
                }
                if o.tolerance > 0.0 {
                    l.tolerance = o.tolerance;
                }
            }))?;
            let opts = RunOptions {
                seed: o.has_seed.then_some(o.seed),
                timings: o.timings,
                only: None,
            };
            let inner = lift(cli::run(s, &limits, &opts))?;
            *out = Box::into_raw(Box::new(BranesReport { inner }));
            Ok(())
        })())
    })
}

/// # Safety
/// `r` must come from [`branes_run`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn branes_report_free(r: *mut BranesReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// The CLI exit status of the run: 0 all pass, 1 a check failed, 2 or 3 a
/// check could not be asked.
///
/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn branes_report_exit_code(r: *const BranesReport) -> i32 {
    if r.is_null() {
        set_error("report is null");
        return -1;
    }
    (*r).inner.exit_code
}

/// The run's overall outcome as a status code.
///
/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn branes_report_status(r: *const BranesReport) -> BranesStatus {
    if r.is_null() {
        return fail(BranesStatus::NullArgument, "report is null");
    }
    match (*r).inner.exit_code {
        0 => BranesStatus::Ok,
        1 => BranesStatus::CheckFailed,
        3 => BranesStatus::ResourceCap,
        _ => BranesStatus::InvalidInput,
    }
}

/// Number of checks in the report.
///
/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn branes_report_len(r: *const BranesReport) -> usize {
    if r.is_null() {
        return 0;
    }
    (*r).inner.checks.len()
}

/// The report as JSON, or null on failure.
///
/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn branes_report_json(r: *const BranesReport) -> *mut c_char {
    if r.is_null() {
        set_error("report is null");
        return ptr::null_mut();
    }
    match serde_json::to_string_pretty(&(*r).inner) {
        Ok(s) => to_c(s),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// The report as aligned text lines.
///
/// # Safety
/// `r` must be a live report handle.
#[no_mangle]
pub unsafe extern "C" fn branes_report_text(r: *const BranesReport) -> *mut c_char {
    if r.is_null() {
        set_error("report is null");
        return ptr::null_mut();
    }
    to_c((*r).inner.to_text())
}

/// JSON schema of the scenario and state-table formats.
#[no_mangle]
pub extern "C" fn branes_schema_json() -> *mut c_char {
    to_c(cli::schema().to_string())
}

unsafe fn system(energies: *const f64, n: usize, beta: f64) -> Result<StateSystem, BranesStatus> {
    if energies.is_null() && n > 0 {
        return Err(fail(BranesStatus::NullArgument, "energies is null"));
    }
    let e = if n == 0 { Vec::new() } else { std::slice::from_raw_parts(energies, n).to_vec() };
    lift(StateSystem::new(e, beta))
}

/// Shannon entropy in bits of the Boltzmann distribution on `n` states.
///
/// # Safety
/// `energies` must point to `n` doubles; `bits` must be writable.
#[no_mangle]
pub unsafe extern "C" fn branes_sharp_entropy(energies: *const f64, n: usize, beta: f64, bits: *mut f64) -> BranesStatus {
    guard(|| {
        status_of((|| {
            if bits.is_null() {
                return Err(fail(BranesStatus::NullArgument, "bits is null"));
            }
            let sys = system(energies, n, beta)?;
            *bits = lift(sharp_entropy(&sys))?.entropy_bits;
            Ok(())
        })())
    })
}

/// Fuzzy entropy in bits with `panels` Gauss-Legendre panels (0 keeps the
/// default). `residual`, if non-null, receives the normalization residual.
///
/// # Safety
/// `energies` must point to `n` doubles; `bits` must be writable; `residual`
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn branes_fuzzy_entropy(
    energies: *const f64,
    n: usize,
    beta: f64,
    panels: usize,
    bits: *mut f64,
    residual: *mut f64,
) -> BranesStatus {
    guard(|| {
        status_of((|| {
            if bits.is_null() {
                return Err(fail(BranesStatus::NullArgument, "bits is null"));
            }
            let sys = system(energies, n, beta)?;
            let mut cfg = FuzzConfig::default();
            if panels > 0 {
                cfg.panels = panels;
            }
            *bits = lift(fuzzy_entropy(&sys, &cfg))?.entropy_bits;
            if !residual.is_null() {
                *residual = lift(normalization_check(&sys, &cfg))?;
            }
            Ok(())
        })())
    })
}
