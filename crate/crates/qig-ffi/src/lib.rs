//! C ABI over the toolkit: opaque handles, integer error codes, and
//! JSON/CSV string outputs. The matching header lives in `include/qig.h`
//! and is maintained by hand (a test checks every export appears in it).
//!
//! Conventions:
//! - constructors write an opaque pointer through an out-parameter and
//!   return `QIG_OK` on success;
//! - every returned `char*` is owned by the caller and must be released
//!   with `qig_string_free`;
//! - on any nonzero return, `qig_last_error` yields a message for the
//!   calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};

use qig_core::monotone::Verdict;
use qig_core::{
    conformal_factor, loewner_scan, matrix_monotonicity_test, metric_monotonicity_test,
    parse_metric_spec, solve_ode, Error, MetricCoeffs, PetzFunction, Region, SpectralMap,
};

pub const QIG_OK: c_int = 0;
pub const QIG_ERR_NULL: c_int = 1;
pub const QIG_ERR_UTF8: c_int = 2;
pub const QIG_ERR_PARSE: c_int = 3;
pub const QIG_ERR_DOMAIN: c_int = 4;
pub const QIG_ERR_SINGULAR: c_int = 5;
pub const QIG_ERR_NUMERIC: c_int = 6;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn code_for(err: &Error) -> c_int {
    match err {
        Error::Parse(_) => QIG_ERR_PARSE,
        Error::DomainError(_) | Error::InvalidState(_) | Error::InvalidPetzFunction(_) => {
            QIG_ERR_DOMAIN
        }
        Error::Singular(_) | Error::RemovableSingularity => QIG_ERR_SINGULAR,
        _ => QIG_ERR_NUMERIC,
    }
}

fn fail(err: Error) -> c_int {
    let code = code_for(&err);
    set_error(&err.to_string());
    code
}

/// # Safety
/// `ptr` must be a valid NUL-terminated C string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, c_int> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(QIG_ERR_NULL);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        QIG_ERR_UTF8
    })
}

fn give_string(s: String, out: *mut *mut c_char) -> c_int {
    if out.is_null() {
        set_error("null output pointer");
        return QIG_ERR_NULL;
    }
    match CString::new(s) {
        Ok(cs) => {
            unsafe { *out = cs.into_raw() };
            QIG_OK
        }
        Err(_) => {
            set_error("output contained an interior NUL");
            QIG_ERR_NUMERIC
        }
    }
}

macro_rules! out_write {
    ($ptr:expr, $val:expr) => {{
        if $ptr.is_null() {
            set_error("null output pointer");
            return QIG_ERR_NULL;
        }
        unsafe { *$ptr = $val };
    }};
}

/// Copy the calling thread's last error message into `buf` (truncated to
/// `cap` bytes including the terminator). Returns the full message length.
///
/// # Safety
/// `buf` must point to at least `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn qig_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            // always terminate
            *buf.add(n - 1) = 0;
        }
        bytes.len() - 1
    })
}

/// Release a string produced by this library.
///
/// # Safety
/// `s` must have been returned by a `qig_*` function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn qig_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Petz functions
// ---------------------------------------------------------------------------

pub struct QigPetz(PetzFunction);

/// Build a function from a flat spec (`vn`, `tsallis:0.5`, `power:0.25`,
/// `exp-scheme:2`, `exp-scheme-raw:2`, `square-control`).
///
/// # Safety
/// `spec` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qig_petz_new(spec: *const c_char, out: *mut *mut QigPetz) -> c_int {
    let spec = match read_str(spec) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match PetzFunction::parse(spec) {
        Ok(f) => {
            out_write!(out, Box::into_raw(Box::new(QigPetz(f))));
            QIG_OK
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `f` must be a live handle from `qig_petz_new`.
#[no_mangle]
pub unsafe extern "C" fn qig_petz_free(f: *mut QigPetz) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Evaluate on (0, infinity).
///
/// # Safety
/// `f` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qig_petz_eval(
    f: *const QigPetz,
    t: c_double,
    out: *mut c_double,
) -> c_int {
    let Some(f) = f.as_ref() else {
        set_error("null function handle");
        return QIG_ERR_NULL;
    };
    if !t.is_finite() || t <= 0.0 {
        set_error("t must be positive");
        return QIG_ERR_DOMAIN;
    }
    out_write!(out, f.0.eval(t));
    QIG_OK
}

/// Evaluate the holomorphic extension at re + i im. Fails with
/// `QIG_ERR_DOMAIN` for tabulated functions.
///
/// # Safety
/// `f` must be a live handle; `out_re`, `out_im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qig_petz_eval_complex(
    f: *const QigPetz,
    re: c_double,
    im: c_double,
    out_re: *mut c_double,
    out_im: *mut c_double,
) -> c_int {
    let Some(f) = f.as_ref() else {
        set_error("null function handle");
        return QIG_ERR_NULL;
    };
    match f.0.eval_complex(qig_core::qubit::C64::new(re, im)) {
        Some(v) => {
            out_write!(out_re, v.re);
            out_write!(out_im, v.im);
            QIG_OK
        }
        None => {
            set_error("function has no complex evaluator");
            QIG_ERR_DOMAIN
        }
    }
}

/// f(t) - t f(1/t).
///
/// # Safety
/// `f` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qig_petz_symmetry_residual(
    f: *const QigPetz,
    t: c_double,
    out: *mut c_double,
) -> c_int {
    let Some(f) = f.as_ref() else {
        set_error("null function handle");
        return QIG_ERR_NULL;
    };
    if !t.is_finite() || t <= 0.0 {
        set_error("t must be positive");
        return QIG_ERR_DOMAIN;
    }
    out_write!(out, f.0.symmetry_residual(t));
    QIG_OK
}

// ---------------------------------------------------------------------------
// Scheme maps
// ---------------------------------------------------------------------------

pub struct QigMap(SpectralMap);

/// Build a scheme map from a spec (`identity`, `neg`, `exp:beta`).
///
/// # Safety
/// `spec` must be a valid C string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qig_map_new(spec: *const c_char, out: *mut *mut QigMap) -> c_int {
    let spec = match read_str(spec) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match SpectralMap::parse(spec) {
        Ok(m) => {
            out_write!(out, Box::into_raw(Box::new(QigMap(m))));
            QIG_OK
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `m` must be a live handle from `qig_map_new`.
#[no_mangle]
pub unsafe extern "C" fn qig_map_free(m: *mut QigMap) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qig_map_value(m: *const QigMap, w: c_double, out: *mut c_double) -> c_int {
    let Some(m) = m.as_ref() else {
        set_error("null map handle");
        return QIG_ERR_NULL;
    };
    out_write!(out, m.0.value(w));
    QIG_OK
}

/// # Safety
/// `m` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qig_map_derivative(
    m: *const QigMap,
    w: c_double,
    out: *mut c_double,
) -> c_int {
    let Some(m) = m.as_ref() else {
        set_error("null map handle");
        return QIG_ERR_NULL;
    };
    out_write!(out, m.0.derivative(w));
    QIG_OK
}

/// Conformal factor (1-w^2)/(1-w~^2) (dw~/dw)^2 of the map at w.
///
/// # Safety
/// `m` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qig_conformal_factor(
    m: *const QigMap,
    w: c_double,
    out: *mut c_double,
) -> c_int {
    let Some(m) = m.as_ref() else {
        set_error("null map handle");
        return QIG_ERR_NULL;
    };
    match conformal_factor(&m.0, w) {
        Ok(a) => {
            out_write!(out, a);
            QIG_OK
        }
        Err(e) => fail(e),
    }
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

pub struct QigMetric(MetricCoeffs);

/// Build a metric from a spec (`vn`, `tsallis:q`, `petz-tsallis:q`, or any
/// Petz function spec lifted through the canonical correspondence).
///
/// # Safety
/// `spec` must be a valid C string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qig_metric_new(spec: *const c_char, out: *mut *mut QigMetric) -> c_int {
    let spec = match read_str(spec) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match parse_metric_spec(spec) {
        Ok(g) => {
            out_write!(out, Box::into_raw(Box::new(QigMetric(g))));
            QIG_OK
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `g` must be a live handle from `qig_metric_new`.
#[no_mangle]
pub unsafe extern "C" fn qig_metric_free(g: *mut QigMetric) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Canonical-polar coefficients at w (radial and tangential).
///
/// # Safety
/// `g` must be a live handle; `g_w`, `g_perp` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qig_metric_coeffs(
    g: *const QigMetric,
    w: c_double,
    g_w: *mut c_double,
    g_perp: *mut c_double,
) -> c_int {
    let Some(g) = g.as_ref() else {
        set_error("null metric handle");
        return QIG_ERR_NULL;
    };
    if w.abs() >= 1.0 {
        set_error("w must lie in (-1, 1)");
        return QIG_ERR_DOMAIN;
    }
    out_write!(g_w, g.0.radial(w));
    out_write!(g_perp, g.0.tangential(w));
    QIG_OK
}

// ---------------------------------------------------------------------------
// Monotonicity tests (JSON reports)
// ---------------------------------------------------------------------------

fn report_json(
    report: Result<qig_core::MonotonicityReport, Error>,
    out: *mut *mut c_char,
) -> c_int {
    match report {
        Ok(r) => match serde_json::to_string_pretty(&r) {
            Ok(json) => give_string(json, out),
            Err(e) => {
                set_error(&e.to_string());
                QIG_ERR_NUMERIC
            }
        },
        Err(e) => fail(e),
    }
}

/// Scan Im f(z) on a grid over the rectangle; the JSON report carries the
/// verdict and any witnesses.
///
/// # Safety
/// `f` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qig_loewner_scan_json(
    f: *const QigPetz,
    re_min: c_double,
    re_max: c_double,
    im_min: c_double,
    im_max: c_double,
    nr: u32,
    ni: u32,
    tol: c_double,
    out_json: *mut *mut c_char,
) -> c_int {
    let Some(f) = f.as_ref() else {
        set_error("null function handle");
        return QIG_ERR_NULL;
    };
    let region = match Region::new(re_min, re_max, im_min, im_max) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    report_json(
        loewner_scan(&f.0, region, nr as usize, ni as usize, tol),
        out_json,
    )
}

/// Randomized matrix-pair search; `clean_is_pass` picks the verdict a clean
/// search earns (nonzero: pass, zero: inconclusive).
///
/// # Safety
/// `f` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qig_matrix_test_json(
    f: *const QigPetz,
    dim: u32,
    samples: u64,
    seed: u64,
    tol: c_double,
    clean_is_pass: c_int,
    out_json: *mut *mut c_char,
) -> c_int {
    let Some(f) = f.as_ref() else {
        set_error("null function handle");
        return QIG_ERR_NULL;
    };
    let clean = if clean_is_pass != 0 {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    report_json(
        matrix_monotonicity_test(&f.0, dim as usize, samples, seed, tol, clean),
        out_json,
    )
}

/// Channel Monte Carlo for the metric inequality; see `qig_matrix_test_json`
/// for the `clean_is_pass` convention.
///
/// # Safety
/// `f` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qig_cptp_test_json(
    f: *const QigPetz,
    samples: u64,
    seed: u64,
    tol: c_double,
    clean_is_pass: c_int,
    out_json: *mut *mut c_char,
) -> c_int {
    let Some(f) = f.as_ref() else {
        set_error("null function handle");
        return QIG_ERR_NULL;
    };
    let clean = if clean_is_pass != 0 {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    report_json(
        metric_monotonicity_test(&f.0, samples, seed, tol, clean),
        out_json,
    )
}

// ---------------------------------------------------------------------------
// Scheme equation
// ---------------------------------------------------------------------------

/// Solve the scheme equation and return the grid as CSV
/// (`w,wt,dwt_dw,residual`). Branch must be +1 or -1.
///
/// # Safety
/// `f_spec`, `h_spec` must be valid C strings; `out_csv` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qig_solve_ode_csv(
    f_spec: *const c_char,
    h_spec: *const c_char,
    w0: c_double,
    wt0: c_double,
    branch: c_int,
    lo: c_double,
    hi: c_double,
    out_csv: *mut *mut c_char,
) -> c_int {
    let f_spec = match read_str(f_spec) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let h_spec = match read_str(h_spec) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let f = match PetzFunction::parse(f_spec) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let h = match PetzFunction::parse(h_spec) {
        Ok(h) => h,
        Err(e) => return fail(e),
    };
    if branch != 1 && branch != -1 {
        set_error("branch must be +1 or -1");
        return QIG_ERR_DOMAIN;
    }
    match solve_ode(&f, &h, w0, wt0, branch as i8, (lo, hi)) {
        Ok(sol) => {
            let mut csv = String::from("w,wt,dwt_dw,residual\n");
            for p in &sol.points {
                csv.push_str(&format!(
                    "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    p.w, p.wt, p.dwt, p.residual
                ));
            }
            give_string(csv, out_csv)
        }
        Err(e) => fail(e),
    }
}
