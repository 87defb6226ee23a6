//! C interface to the coco coherent-configuration toolkit.
//!
//! Configurations travel through opaque `CocoConfig` handles; analysis
//! results come back as JSON strings in the same schema the `coco`
//! command-line tool emits. Every entry point returns a `CocoStatus`;
//! on any failure `coco_last_error` describes the most recent error on
//! the calling thread. Strings returned through out-parameters are owned
//! by the caller and must be released with `coco_string_free`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use coco::gq::{generate, gq_feasibility};
use coco::report::{analyze, Meta, Report};
use coco::{parse_json, validate_axioms, Error, Tolerances, ValidationMode};

/// Result of every fallible call in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CocoStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    Utf8Error = 2,
    /// The input was malformed: bad JSON, axiom violations, unknown
    /// generator family, or out-of-range parameters.
    InvalidInput = 3,
    /// The configuration is coherent but some diagonal block algebra is
    /// not commutative, so no matrix-unit decomposition exists.
    NotFiberCommutative = 4,
    /// Numerical analysis failed to converge or to meet its residual
    /// gates.
    NumericalError = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// Tuning knobs shared by every analysis call.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CocoOptions {
    /// Seed for probe matrices and gauge choices; reports are
    /// deterministic given a seed.
    pub seed: u64,
    /// Eigenvalue convergence tolerance.
    pub tol_eig: f64,
    /// Positive-semidefiniteness tolerance.
    pub tol_psd: f64,
    /// Numeric-rank tolerance.
    pub tol_rank: f64,
    /// Integrality tolerance for multiplicities.
    pub tol_int: f64,
}

/// An owned, structurally validated coherent configuration.
pub struct CocoConfig {
    inner: coco::CoherentConfiguration,
    source: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl std::fmt::Display) {
    let text = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).expect("nul bytes were stripped");
    });
}

fn status_of(err: &Error) -> CocoStatus {
    match err {
        Error::NotFiberCommutative { .. } => CocoStatus::NotFiberCommutative,
        Error::Malformed(_)
        | Error::BlockStraddle { .. }
        | Error::Json(_)
        | Error::Io(_)
        | Error::InvalidArgument(_)
        | Error::UnknownFamily(_)
        | Error::GqViolation { .. }
        | Error::NoSuchIdeal(_)
        | Error::EmptySupport { .. }
        | Error::InputNotPsd { .. }
        | Error::NonUnimodular { .. } => CocoStatus::InvalidInput,
        _ => CocoStatus::NumericalError,
    }
}

fn fail(err: &Error) -> CocoStatus {
    set_error(err);
    status_of(err)
}

fn guarded(f: impl FnOnce() -> CocoStatus) -> CocoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            CocoStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, CocoStatus> {
    if ptr.is_null() {
        set_error("required string argument is null");
        return Err(CocoStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        CocoStatus::Utf8Error
    })
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> CocoStatus {
    match CString::new(text) {
        Ok(cs) => {
            *out = cs.into_raw();
            CocoStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior nul byte");
            CocoStatus::NumericalError
        }
    }
}

fn tolerances(opts: &CocoOptions) -> Result<Tolerances, CocoStatus> {
    let t = Tolerances {
        eig: opts.tol_eig,
        psd: opts.tol_psd,
        rank: opts.tol_rank,
        integrality: opts.tol_int,
    };
    for v in [t.eig, t.psd, t.rank, t.integrality] {
        if !(v > 0.0 && v.is_finite()) {
            set_error(format!(
                "tolerances must be positive finite numbers, got {v}"
            ));
            return Err(CocoStatus::InvalidInput);
        }
    }
    Ok(t)
}

/// Returns the default options: seed 42 and the library's standard
/// tolerances.
#[no_mangle]
pub extern "C" fn coco_options_default() -> CocoOptions {
    let t = Tolerances::default();
    CocoOptions {
        seed: 42,
        tol_eig: t.eig,
        tol_psd: t.psd,
        tol_rank: t.rank,
        tol_int: t.integrality,
    }
}

/// Pointer to a description of the most recent error on this thread.
/// Valid until the next failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn coco_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a configuration from JSON (`{"fibers": [...], "colors":
/// [[...]], "labels": [...]}`) and performs structural validation.
///
/// # Safety
/// `json` must be a valid nul-terminated string and `out` a valid
/// location for one pointer. On success `*out` owns the configuration
/// and must be released with `coco_config_free`.
#[no_mangle]
pub unsafe extern "C" fn coco_config_parse(
    json: *const c_char,
    out: *mut *mut CocoConfig,
) -> CocoStatus {
    guarded(|| {
        if out.is_null() {
            set_error("output pointer is null");
            return CocoStatus::NullPointer;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_json(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CocoConfig {
                    inner,
                    source: "capi:parse".to_string(),
                }));
                CocoStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Builds a bundled example configuration: `gq-w2`, `gq-grid`,
/// `gq-dualgrid`, `cyclic`, or `hamming-2-2`. Pass a negative `param`
/// for families that take no parameter.
///
/// # Safety
/// `family` must be a valid nul-terminated string and `out` a valid
/// location for one pointer. On success `*out` owns the configuration
/// and must be released with `coco_config_free`.
#[no_mangle]
pub unsafe extern "C" fn coco_config_generate(
    family: *const c_char,
    param: i64,
    out: *mut *mut CocoConfig,
) -> CocoStatus {
    guarded(|| {
        if out.is_null() {
            set_error("output pointer is null");
            return CocoStatus::NullPointer;
        }
        let name = match read_str(family) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let param = (param >= 0).then_some(param as u64);
        match generate(name, param) {
            Ok(inner) => {
                let source = match param {
                    Some(p) => format!("gen:{name}({p})"),
                    None => format!("gen:{name}"),
                };
                *out = Box::into_raw(Box::new(CocoConfig { inner, source }));
                CocoStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a configuration handle. Null is ignored.
///
/// # Safety
/// `cfg` must be null or a pointer returned by `coco_config_parse` or
/// `coco_config_generate` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn coco_config_free(cfg: *mut CocoConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `cfg` must be null or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn coco_config_points(cfg: *const CocoConfig) -> usize {
    cfg.as_ref().map_or(0, |c| c.inner.n())
}

/// Number of colors, or 0 for a null handle.
///
/// # Safety
/// `cfg` must be null or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn coco_config_rank(cfg: *const CocoConfig) -> usize {
    cfg.as_ref().map_or(0, |c| c.inner.rank())
}

/// Number of fibers, or 0 for a null handle.
///
/// # Safety
/// `cfg` must be null or a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn coco_config_fiber_count(cfg: *const CocoConfig) -> usize {
    cfg.as_ref().map_or(0, |c| c.inner.fiber_count())
}

/// Checks the coherent-configuration axioms exhaustively and writes a
/// JSON report (`{meta, validation, verdict}`). Axiom failures still
/// return `Ok`; the verdict field carries the outcome.
///
/// # Safety
/// `cfg` must be a live configuration handle and `out_json` a valid
/// location for one pointer. On success `*out_json` must be released
/// with `coco_string_free`.
#[no_mangle]
pub unsafe extern "C" fn coco_validate(
    cfg: *const CocoConfig,
    opts: CocoOptions,
    out_json: *mut *mut c_char,
) -> CocoStatus {
    guarded(|| {
        if cfg.is_null() || out_json.is_null() {
            set_error("configuration handle or output pointer is null");
            return CocoStatus::NullPointer;
        }
        let tols = match tolerances(&opts) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let handle = &*cfg;
        let validation = validate_axioms(&handle.inner, ValidationMode::Exhaustive);
        let pass = validation.axioms_pass();
        let report = Report {
            meta: Meta::new(
                &handle.source,
                opts.seed,
                tols,
                handle.inner.n(),
                handle.inner.fiber_sizes().to_vec(),
            ),
            validation: Some(validation),
            ideals: None,
            krein: None,
            bounds: None,
            verdict: if pass { "valid" } else { "invalid" }.to_string(),
        };
        write_string(out_json, report.to_json())
    })
}

/// Runs the full pipeline (validation, matrix-unit decomposition, Krein
/// matrices, feasibility tests) and writes the standard JSON report.
/// Mathematical infeasibility is reported inside the JSON verdict, not
/// as an error status.
///
/// # Safety
/// `cfg` must be a live configuration handle and `out_json` a valid
/// location for one pointer. On success `*out_json` must be released
/// with `coco_string_free`.
#[no_mangle]
pub unsafe extern "C" fn coco_analyze(
    cfg: *const CocoConfig,
    opts: CocoOptions,
    out_json: *mut *mut c_char,
) -> CocoStatus {
    guarded(|| {
        if cfg.is_null() || out_json.is_null() {
            set_error("configuration handle or output pointer is null");
            return CocoStatus::NullPointer;
        }
        let tols = match tolerances(&opts) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let handle = &*cfg;
        match analyze(&handle.inner, &handle.source, opts.seed, &tols) {
            Ok(report) => write_string(out_json, report.to_json()),
            Err(e) => fail(&e),
        }
    })
}

/// Screens a generalized-quadrangle order (s, t) against the closed-form
/// Krein matrices and writes the verdict as JSON (`{s, t, verdict,
/// witness, checks}`).
///
/// # Safety
/// `out_json` must be a valid location for one pointer. On success
/// `*out_json` must be released with `coco_string_free`.
#[no_mangle]
pub unsafe extern "C" fn coco_gq_feasibility(
    s: u64,
    t: u64,
    out_json: *mut *mut c_char,
) -> CocoStatus {
    guarded(|| {
        if out_json.is_null() {
            set_error("output pointer is null");
            return CocoStatus::NullPointer;
        }
        match gq_feasibility(s, t) {
            Ok(feas) => {
                let json = serde_json::to_string_pretty(&feas)
                    .expect("screening result serialization cannot fail");
                write_string(out_json, json)
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a string returned by this interface. Null is ignored.
///
/// # Safety
/// `s` must be null or a string pointer produced by this interface that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn coco_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
