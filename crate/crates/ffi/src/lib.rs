//! C ABI over `tstwr-core`.
//!
//! Every fallible function returns a [`TstwrStatus`] and writes its result
//! through an out-pointer. Configurations and sweep results are opaque
//! handles owned by the caller and released with the matching `_free`
//! function. After a failure, [`tstwr_last_error`] returns a description
//! valid until the next call on the same thread. Panics never cross the
//! boundary; they are reported as [`TstwrStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use tstwr_core::experiments::{emit_csv, run_sweep, SweepRow, SweepSpec};
use tstwr_core::{
    fair_sum_rate, lambert_w0, non_eh_msr, optimize, ChannelState, Error, GridSpec, Method, PolicyPoint,
    SystemConfig,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TstwrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Convergence = 4,
    Validation = 5,
    Io = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TstwrMethod {
    Alternating = 0,
    Grid = 1,
    ExactTheta = 2,
}

impl From<TstwrMethod> for Method {
    fn from(m: TstwrMethod) -> Self {
        match m {
            TstwrMethod::Alternating => Method::Alternating,
            TstwrMethod::Grid => Method::Grid,
            TstwrMethod::ExactTheta => Method::ExactTheta,
        }
    }
}

/// Channel gains plus system parameters.
pub struct TstwrConfig {
    cfg: SystemConfig,
    ch: ChannelState,
}

/// Rows of a completed sweep.
pub struct TstwrSweep {
    rows: Vec<SweepRow>,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TstwrOptimum {
    pub theta_star: f64,
    pub omega_star: f64,
    pub r_sum: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TstwrSweepSpec {
    pub h1: f64,
    pub beta_db_min: f64,
    pub beta_db_max: f64,
    pub beta_steps: usize,
    pub ptot_dbw_min: f64,
    pub ptot_dbw_max: f64,
    pub ptot_steps: usize,
    pub eta: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TstwrSweepRow {
    pub beta_db: f64,
    pub ptot_dbw: f64,
    pub eta: f64,
    pub theta_star: f64,
    pub omega_star: f64,
    pub r_sum_ts: f64,
    pub r_sum_non_eh: f64,
    pub gain_ts_vs_non_eh: f64,
    pub converged: bool,
}

impl From<&SweepRow> for TstwrSweepRow {
    fn from(r: &SweepRow) -> Self {
        Self {
            beta_db: r.beta_db,
            ptot_dbw: r.ptot_dbw,
            eta: r.eta,
            theta_star: r.theta_star,
            omega_star: r.omega_star,
            r_sum_ts: r.r_sum_ts,
            r_sum_non_eh: r.r_sum_non_eh,
            gain_ts_vs_non_eh: r.gain_ts_vs_non_eh,
            converged: r.converged,
        }
    }
}

impl From<TstwrSweepSpec> for SweepSpec {
    fn from(s: TstwrSweepSpec) -> Self {
        Self {
            h1: s.h1,
            beta_db_min: s.beta_db_min,
            beta_db_max: s.beta_db_max,
            beta_steps: s.beta_steps,
            ptot_dbw_min: s.ptot_dbw_min,
            ptot_dbw_max: s.ptot_dbw_max,
            ptot_steps: s.ptot_steps,
            eta: s.eta,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(TstwrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Domain(_) => TstwrStatus::Domain,
            Error::InvalidParameter(_) | Error::Parse { .. } => TstwrStatus::InvalidArgument,
            Error::Convergence { .. } => TstwrStatus::Convergence,
            Error::Validation(_) => TstwrStatus::Validation,
            Error::Io { .. } => TstwrStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TstwrStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> TstwrStatus {
    let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".to_string());
        Err(Failure(TstwrStatus::Panic, msg))
    });
    match outcome {
        Ok(()) => {
            set_last_error("");
            TstwrStatus::Ok
        }
        Err(Failure(status, msg)) => {
            set_last_error(&msg);
            status
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn in_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn tstwr_status_message(status: TstwrStatus) -> *const c_char {
    let s: &'static CStr = match status {
        TstwrStatus::Ok => c"ok",
        TstwrStatus::NullPointer => c"null pointer argument",
        TstwrStatus::InvalidArgument => c"invalid argument",
        TstwrStatus::Domain => c"argument outside the function's domain",
        TstwrStatus::Convergence => c"iteration did not converge",
        TstwrStatus::Validation => c"input cannot produce the requested output",
        TstwrStatus::Io => c"I/O failure",
        TstwrStatus::OutOfRange => c"index out of range",
        TstwrStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Detail of the most recent failure on this thread; empty after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn tstwr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a configuration with unit block time, base-2 logarithms and
/// the default stopping tolerance.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn tstwr_config_new(
    h1: f64,
    h2: f64,
    p_tot: f64,
    eta: f64,
    out: *mut *mut TstwrConfig,
) -> TstwrStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let handle = TstwrConfig { cfg: SystemConfig::new(p_tot, eta)?, ch: ChannelState::new(h1, h2)? };
        *out = Box::into_raw(Box::new(handle));
        Ok(())
    })
}

/// # Safety
/// `config` must be null or a live handle from [`tstwr_config_new`].
#[no_mangle]
pub unsafe extern "C" fn tstwr_config_set_epsilon(config: *mut TstwrConfig, epsilon: f64) -> TstwrStatus {
    guard(|| {
        let c = out_ref(config, "config")?;
        c.cfg = c.cfg.with_epsilon(epsilon)?;
        Ok(())
    })
}

/// Releases a configuration; null is ignored.
///
/// # Safety
/// `config` must be null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tstwr_config_free(config: *mut TstwrConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Equal-rate sum rate at `(theta, omega)`, both strictly inside (0, 1).
///
/// # Safety
/// `config` must be a live handle, `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tstwr_fair_sum_rate(
    config: *const TstwrConfig,
    theta: f64,
    omega: f64,
    out: *mut f64,
) -> TstwrStatus {
    guard(|| {
        let c = in_ref(config, "config")?;
        let out = out_ref(out, "out")?;
        *out = fair_sum_rate(&PolicyPoint::new(theta, omega)?, &c.cfg, &c.ch);
        Ok(())
    })
}

/// Jointly optimizes `(θ, ω)`; `grid_n` is the nodes per axis used by
/// [`TstwrMethod::Grid`] and ignored otherwise.
///
/// # Safety
/// `config` must be a live handle, `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tstwr_optimize(
    config: *const TstwrConfig,
    method: TstwrMethod,
    grid_n: usize,
    out: *mut TstwrOptimum,
) -> TstwrStatus {
    guard(|| {
        let c = in_ref(config, "config")?;
        let out = out_ref(out, "out")?;
        let grid = if method == TstwrMethod::Grid { GridSpec::square(grid_n)? } else { GridSpec::default() };
        let r = optimize(&c.cfg, &c.ch, method.into(), &grid)?;
        *out = TstwrOptimum {
            theta_star: r.policy.theta(),
            omega_star: r.policy.omega(),
            r_sum: r.r_sum,
            iterations: r.iterations,
            converged: r.converged,
        };
        Ok(())
    })
}

/// Maximum sum rate of the non-harvesting benchmark.
///
/// # Safety
/// `config` must be a live handle, `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tstwr_non_eh_msr(config: *const TstwrConfig, out: *mut f64) -> TstwrStatus {
    guard(|| {
        let c = in_ref(config, "config")?;
        *out_ref(out, "out")? = non_eh_msr(&c.cfg, &c.ch);
        Ok(())
    })
}

/// Principal-branch Lambert W for `x ≥ −1/e`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tstwr_lambert_w0(x: f64, out: *mut f64) -> TstwrStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = lambert_w0(x)?;
        Ok(())
    })
}

/// The default 21 x 21 grid over β and P_tot in [−10, 10] with
/// `H1 = 1` and `η = 1`.
#[no_mangle]
pub extern "C" fn tstwr_sweep_spec_default() -> TstwrSweepSpec {
    let s = SweepSpec::default();
    TstwrSweepSpec {
        h1: s.h1,
        beta_db_min: s.beta_db_min,
        beta_db_max: s.beta_db_max,
        beta_steps: s.beta_steps,
        ptot_dbw_min: s.ptot_dbw_min,
        ptot_dbw_max: s.ptot_dbw_max,
        ptot_steps: s.ptot_steps,
        eta: s.eta,
    }
}

/// Runs a sweep, rows ordered β-major.
///
/// # Safety
/// `spec` must be readable and `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn tstwr_sweep_run(
    spec: *const TstwrSweepSpec,
    method: TstwrMethod,
    grid_n: usize,
    out: *mut *mut TstwrSweep,
) -> TstwrStatus {
    guard(|| {
        let spec: SweepSpec = (*in_ref(spec, "spec")?).into();
        let out = out_ref(out, "out")?;
        let grid = if method == TstwrMethod::Grid { GridSpec::square(grid_n)? } else { GridSpec::default() };
        let rows = run_sweep(&spec, method.into(), &grid)?;
        *out = Box::into_raw(Box::new(TstwrSweep { rows }));
        Ok(())
    })
}

/// Number of rows; 0 for null.
///
/// # Safety
/// `sweep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tstwr_sweep_len(sweep: *const TstwrSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.rows.len())
}

/// # Safety
/// `sweep` must be a live handle, `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn tstwr_sweep_row(
    sweep: *const TstwrSweep,
    index: usize,
    out: *mut TstwrSweepRow,
) -> TstwrStatus {
    guard(|| {
        let s = in_ref(sweep, "sweep")?;
        let out = out_ref(out, "out")?;
        let row = s
            .rows
            .get(index)
            .ok_or_else(|| Failure(TstwrStatus::OutOfRange, format!("row {index} of {}", s.rows.len())))?;
        *out = row.into();
        Ok(())
    })
}

/// Writes the sweep as CSV to a UTF-8 path.
///
/// # Safety
/// `sweep` must be a live handle, `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn tstwr_sweep_write_csv(sweep: *const TstwrSweep, path: *const c_char) -> TstwrStatus {
    guard(|| {
        let s = in_ref(sweep, "sweep")?;
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Failure(TstwrStatus::InvalidArgument, "path is not UTF-8".into()))?;
        emit_csv(&s.rows, Path::new(path))?;
        Ok(())
    })
}

/// Releases a sweep; null is ignored.
///
/// # Safety
/// `sweep` must be null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tstwr_sweep_free(sweep: *mut TstwrSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}
