//! C ABI over `lacasse-core`.
//!
//! Conventions:
//! - every fallible call returns a [`LacasseStatus`] and writes its result
//!   through an out pointer, which is left untouched on failure;
//! - exact values cross the boundary as NUL-terminated decimal strings
//!   (`p/q` for rationals) that the caller releases with
//!   [`lacasse_string_free`];
//! - reports and series are opaque handles released with their `_free`
//!   function;
//! - the detail of the last failure on the calling thread is available from
//!   [`lacasse_last_error_message`].
//!
//! The header `include/lacasse.h` is generated from this file at build time.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lacasse_core::approx::{q_float, tree_eval};
use lacasse_core::identity::{
    alpha_closed, beta_closed, ramanujan_q, s_d_closed, telescoping_difference, verify_lacasse, xi,
    xi2,
};
use lacasse_core::series::{geom_power, tree_series};
use lacasse_core::{Error, RouteSet, TruncatedSeries, VerificationReport};

pub const LACASSE_ROUTE_CLOSED: u32 = 1;
pub const LACASSE_ROUTE_BRUTE: u32 = 2;
pub const LACASSE_ROUTE_SERIES: u32 = 4;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LacasseStatus {
    Ok = 0,
    NullPointer = 1,
    /// Argument outside the function's domain (negative count, `n = 0`
    /// where undefined, `z` outside `[0, 1/e)`, ...).
    Domain = 2,
    IndexBeyondOrder = 3,
    Inconsistency = 4,
    RouteDisagreement = 5,
    IdentityFailure = 6,
    NonConvergence = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LacasseQuantity {
    Alpha = 0,
    Beta = 1,
    SD = 2,
    Q = 3,
    Xi = 4,
    Xi2 = 5,
    Diff = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LacasseReportField {
    Alpha = 0,
    Beta = 1,
    Difference = 2,
    Expected = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LacasseTreeEval {
    pub y: f64,
    pub residual: f64,
    pub iterations: u32,
}

/// Opaque verification report.
pub struct LacasseReport(VerificationReport);

/// Opaque truncated power series.
pub struct LacasseSeries(TruncatedSeries);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg).unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> LacasseStatus {
    match e {
        Error::Domain(_) | Error::NonzeroConstantTerm(_) => LacasseStatus::Domain,
        Error::IndexBeyondOrder { .. } => LacasseStatus::IndexBeyondOrder,
        Error::Inconsistency(_) => LacasseStatus::Inconsistency,
        Error::RouteDisagreement { .. } => LacasseStatus::RouteDisagreement,
        Error::IdentityFailure { .. } => LacasseStatus::IdentityFailure,
        Error::NonConvergence { .. } => LacasseStatus::NonConvergence,
    }
}

/// Run `f`, mapping errors and panics to a status and recording the detail.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> LacasseStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LacasseStatus::Ok,
        Ok(Err(e)) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("panic inside lacasse".into());
            LacasseStatus::Panic
        }
    }
}

fn non_negative(value: i64, what: &str) -> Result<u64, Error> {
    u64::try_from(value).map_err(|_| Error::Domain(format!("{what} must be non-negative, got {value}")))
}

fn positive_u32(value: i64, what: &str) -> Result<u32, Error> {
    match u32::try_from(value) {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(Error::Domain(format!("{what} must be a positive 32-bit integer, got {value}"))),
    }
}

fn to_c_string(s: String) -> *mut c_char {
    // decimal digits, '/', '-' never contain NUL
    CString::new(s).expect("no interior NUL").into_raw()
}

macro_rules! check_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_last_error(format!("{} is NULL", stringify!($p)));
            return LacasseStatus::NullPointer;
        })+
    };
}

/// Static description of a status code. Never NULL; do not free.
#[no_mangle]
pub extern "C" fn lacasse_status_message(status: LacasseStatus) -> *const c_char {
    let s: &'static CStr = match status {
        LacasseStatus::Ok => c"ok",
        LacasseStatus::NullPointer => c"null pointer argument",
        LacasseStatus::Domain => c"argument out of domain",
        LacasseStatus::IndexBeyondOrder => c"index beyond truncation order",
        LacasseStatus::Inconsistency => c"internal inconsistency",
        LacasseStatus::RouteDisagreement => c"routes disagree",
        LacasseStatus::IdentityFailure => c"identity check failed",
        LacasseStatus::NonConvergence => c"iteration did not converge",
        LacasseStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Detail of the most recent failure on this thread, or NULL if none.
/// Valid until the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn lacasse_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn lacasse_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact value of `quantity` at `n` as a decimal string. `d` is used only
/// for `LACASSE_QUANTITY_SD`.
#[no_mangle]
pub unsafe extern "C" fn lacasse_value(
    quantity: LacasseQuantity,
    n: i64,
    d: i64,
    out: *mut *mut c_char,
) -> LacasseStatus {
    check_null!(out);
    guard(|| {
        let n = non_negative(n, "n")?;
        let value = match quantity {
            LacasseQuantity::Alpha => alpha_closed(n).to_string(),
            LacasseQuantity::Beta => beta_closed(n).to_string(),
            LacasseQuantity::SD => s_d_closed(n, positive_u32(d, "d")?)?.to_string(),
            LacasseQuantity::Q => ramanujan_q(n)?.to_string(),
            LacasseQuantity::Xi => xi(n)?.to_string(),
            LacasseQuantity::Xi2 => xi2(n)?.to_string(),
            LacasseQuantity::Diff => telescoping_difference(n)?.to_string(),
        };
        *out = to_c_string(value);
        Ok(())
    })
}

/// Verify `beta(n) - alpha(n) = n^(n+1)` using the routes in the
/// `LACASSE_ROUTE_*` bitmask (the closed form is always used).
#[no_mangle]
pub unsafe extern "C" fn lacasse_verify(
    n: i64,
    routes: u32,
    out: *mut *mut LacasseReport,
) -> LacasseStatus {
    check_null!(out);
    guard(|| {
        let n = non_negative(n, "n")?;
        let report = verify_lacasse(n, RouteSet::from_bits((routes & 0b111) as u8))?;
        *out = Box::into_raw(Box::new(LacasseReport(report)));
        Ok(())
    })
}

/// `n` of the report, or -1 for NULL.
#[no_mangle]
pub unsafe extern "C" fn lacasse_report_n(report: *const LacasseReport) -> i64 {
    report.as_ref().map_or(-1, |r| r.0.n as i64)
}

#[no_mangle]
pub unsafe extern "C" fn lacasse_report_passed(report: *const LacasseReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.passed)
}

/// Bitmask of the routes that were actually compared.
#[no_mangle]
pub unsafe extern "C" fn lacasse_report_routes(report: *const LacasseReport) -> u32 {
    report
        .as_ref()
        .map_or(0, |r| u32::from(r.0.routes_compared.iter().copied().collect::<RouteSet>().bits()))
}

#[no_mangle]
pub unsafe extern "C" fn lacasse_report_value(
    report: *const LacasseReport,
    field: LacasseReportField,
    out: *mut *mut c_char,
) -> LacasseStatus {
    check_null!(report, out);
    let r = &(*report).0;
    let value = match field {
        LacasseReportField::Alpha => &r.alpha,
        LacasseReportField::Beta => &r.beta,
        LacasseReportField::Difference => &r.difference,
        LacasseReportField::Expected => &r.expected,
    };
    *out = to_c_string(value.to_string());
    LacasseStatus::Ok
}

#[no_mangle]
pub unsafe extern "C" fn lacasse_report_free(report: *mut LacasseReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// The tree function `y(z)` through `z^order`.
#[no_mangle]
pub unsafe extern "C" fn lacasse_tree_series(order: i64, out: *mut *mut LacasseSeries) -> LacasseStatus {
    check_null!(out);
    guard(|| {
        let order = non_negative(order, "order")? as usize;
        *out = Box::into_raw(Box::new(LacasseSeries(tree_series(order)?)));
        Ok(())
    })
}

/// `(1/(1-y))^d` through `z^min(order, order of y)`.
#[no_mangle]
pub unsafe extern "C" fn lacasse_geom_power(
    y: *const LacasseSeries,
    d: i64,
    order: i64,
    out: *mut *mut LacasseSeries,
) -> LacasseStatus {
    check_null!(y, out);
    guard(|| {
        let d = positive_u32(d, "d")?;
        let order = non_negative(order, "order")? as usize;
        let g = geom_power(&(*y).0, d, order)?;
        *out = Box::into_raw(Box::new(LacasseSeries(g)));
        Ok(())
    })
}

/// Truncation order, or -1 for NULL.
#[no_mangle]
pub unsafe extern "C" fn lacasse_series_order(series: *const LacasseSeries) -> i64 {
    series.as_ref().map_or(-1, |s| s.0.order() as i64)
}

/// Coefficient of `z^index` as `p/q`.
#[no_mangle]
pub unsafe extern "C" fn lacasse_series_coeff(
    series: *const LacasseSeries,
    index: i64,
    out: *mut *mut c_char,
) -> LacasseStatus {
    check_null!(series, out);
    guard(|| {
        let index = non_negative(index, "index")? as usize;
        *out = to_c_string((*series).0.coeff(index)?.to_string());
        Ok(())
    })
}

/// `index! [z^index]` as `p/q` (an integer for the tree-function powers).
#[no_mangle]
pub unsafe extern "C" fn lacasse_series_egf_coeff(
    series: *const LacasseSeries,
    index: i64,
    out: *mut *mut c_char,
) -> LacasseStatus {
    check_null!(series, out);
    guard(|| {
        let index = non_negative(index, "index")? as usize;
        *out = to_c_string((*series).0.egf_coeff(index)?.to_string());
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn lacasse_series_free(series: *mut LacasseSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Solve `y = z e^y` for `0 <= z < 1/e`.
#[no_mangle]
pub unsafe extern "C" fn lacasse_tree_eval(z: f64, out: *mut LacasseTreeEval) -> LacasseStatus {
    check_null!(out);
    guard(|| {
        let r = tree_eval(z)?;
        *out = LacasseTreeEval {
            y: r.y,
            residual: r.residual,
            iterations: r.iterations,
        };
        Ok(())
    })
}

/// `Q(n)` rounded to the nearest double.
#[no_mangle]
pub unsafe extern "C" fn lacasse_q_float(n: i64, out: *mut f64) -> LacasseStatus {
    check_null!(out);
    guard(|| {
        *out = q_float(non_negative(n, "n")?)?;
        Ok(())
    })
}
