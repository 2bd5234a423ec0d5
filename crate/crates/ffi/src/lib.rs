//! C interface to `bcgo`.
//!
//! Every entry point returns a [`BcgoStatus`]; on failure the message is
//! available from [`bcgo_last_error`] on the calling thread. Objects are
//! opaque handles released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use bcgo::cgo::{axis_zeta, build_cgo, CgoEvaluator, CgoOptions, CgoSolution, Derivatives, SolutionEval, DEFAULT_SPREAD};
use bcgo::harness::{parameter_schedule, run_sweep, Config, ScheduleParams, StabilityRecord};
use bcgo::recon::{PairingSource, Reconstructor};
use bcgo::reflection::Potential;
use bcgo::Error;

/// Result codes.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcgoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Precondition = 4,
    Convergence = 5,
    Io = 6,
    Panic = 7,
}

/// Parsed configuration.
pub struct BcgoConfig(Config);

/// A potential evaluated pointwise.
pub struct BcgoPotential(Potential);

/// A converged CGO solution with a fast evaluator.
pub struct BcgoSolution {
    sol: CgoSolution,
    eval: CgoEvaluator,
}

/// The rows of a stability sweep.
pub struct BcgoSweep(Vec<StabilityRecord>);

/// Derived parameters for one `(k, δ)` pair.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BcgoSchedule {
    pub k: f64,
    pub delta: f64,
    pub a: f64,
    pub tau: f64,
    pub rho: f64,
    pub alpha: f64,
}

/// One sweep row.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BcgoRecord {
    pub schedule: BcgoSchedule,
    pub err_hminus1: f64,
    pub bound_value: f64,
    pub runtime_s: f64,
    pub nodes: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(err: &Error) -> BcgoStatus {
    match err {
        Error::Config(_) | Error::Format(_) => BcgoStatus::Config,
        Error::Io(_) => BcgoStatus::Io,
        Error::DimensionMismatch { .. } | Error::ParameterRange(_) => BcgoStatus::InvalidArgument,
        Error::IterationLimit { .. } | Error::BoundViolated { .. } | Error::ContractionNotGuaranteed { .. } => {
            BcgoStatus::Convergence
        }
        _ => BcgoStatus::Precondition,
    }
}

struct Fail(BcgoStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BcgoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            BcgoStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            BcgoStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(BcgoStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(BcgoStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(p))));
    }
}

fn select(cfg: &Config, which: u32) -> Result<Potential, Fail> {
    let (q1, q2) = cfg.potentials()?;
    match which {
        1 => Ok(q1),
        2 => Ok(q2),
        _ => Err(Fail(BcgoStatus::InvalidArgument, format!("potential index must be 1 or 2, got {which}"))),
    }
}

fn schedule_of(p: &ScheduleParams) -> BcgoSchedule {
    BcgoSchedule { k: p.k, delta: p.delta, a: p.a, tau: p.tau, rho: p.rho, alpha: p.alpha }
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn bcgo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bcgo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default configuration.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bcgo_config_default(out: *mut *mut BcgoConfig) -> BcgoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(BcgoConfig(Config::default()));
        Ok(())
    })
}

/// Parses and validates a TOML configuration.
///
/// # Safety
/// `text` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bcgo_config_from_toml(text: *const c_char, out: *mut *mut BcgoConfig) -> BcgoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let cfg = Config::from_toml(string(text, "text")?)?;
        *out = boxed(BcgoConfig(cfg));
        Ok(())
    })
}

/// Reads a TOML configuration file.
///
/// # Safety
/// `path` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bcgo_config_load(path: *const c_char, out: *mut *mut BcgoConfig) -> BcgoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let cfg = Config::load(Path::new(string(path, "path")?))?;
        *out = boxed(BcgoConfig(cfg));
        Ok(())
    })
}

/// # Safety
/// `cfg` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn bcgo_config_free(cfg: *mut BcgoConfig) {
    release(cfg)
}

/// Potential `which` (1 or 2) of a configuration.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bcgo_potential_from_config(
    cfg: *const BcgoConfig,
    which: u32,
    out: *mut *mut BcgoPotential,
) -> BcgoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let q = select(&borrow(cfg, "cfg")?.0, which)?;
        *out = boxed(BcgoPotential(q));
        Ok(())
    })
}

/// # Safety
/// `q` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bcgo_potential_dim(q: *const BcgoPotential) -> usize {
    q.as_ref().map_or(0, |q| q.0.dim())
}

/// Evaluates the potential at `x[0..len]`.
///
/// # Safety
/// `x` must hold `len` values and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn bcgo_potential_eval(
    q: *const BcgoPotential,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> BcgoStatus {
    guard(|| {
        let q = &borrow(q, "q")?.0;
        let out = out_ptr(out, "out")?;
        let x = slice(x, len, "x")?;
        if len != q.dim() {
            return Err(Error::DimensionMismatch { expected: q.dim(), got: len }.into());
        }
        *out = q.eval(x);
        Ok(())
    })
}

/// # Safety
/// `q` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn bcgo_potential_free(q: *mut BcgoPotential) {
    release(q)
}

/// Builds the CGO solution for the even extension of potential `which`
/// with `ζ` along the last axis, `|Re ζ|² − |Im ζ|² = k²` and `|Im ζ| = a`.
/// `modes == 0` keeps the configured resolution.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bcgo_cgo_build(
    cfg: *const BcgoConfig,
    which: u32,
    k: f64,
    a: f64,
    modes: usize,
    out: *mut *mut BcgoSolution,
) -> BcgoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let cfg = &borrow(cfg, "cfg")?.0;
        let dom = cfg.domain_spec()?;
        let q = select(cfg, which)?.even_extension()?;
        let opts = CgoOptions {
            kappa: dom.kappa(),
            modes: if modes == 0 { cfg.resolution.modes } else { modes },
            ..cfg.resolution.cgo()
        };
        let sol = build_cgo(&q, &axis_zeta(dom.dim, k, a), k, &opts)?;
        let eval = CgoEvaluator::new(&sol, Derivatives::Full, DEFAULT_SPREAD);
        *out = boxed(BcgoSolution { sol, eval });
        Ok(())
    })
}

/// # Safety
/// `sol` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bcgo_solution_dim(sol: *const BcgoSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.sol.dim())
}

/// # Safety
/// `sol` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bcgo_solution_iterations(sol: *const BcgoSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.sol.iterations)
}

/// Normalized remainder norm, or NaN for a null handle.
///
/// # Safety
/// `sol` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bcgo_solution_remainder_norm(sol: *const BcgoSolution) -> f64 {
    sol.as_ref().map_or(f64::NAN, |s| s.sol.remainder_norm)
}

/// Certified remainder bound, or NaN for a null handle.
///
/// # Safety
/// `sol` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bcgo_solution_certified_bound(sol: *const BcgoSolution) -> f64 {
    sol.as_ref().map_or(f64::NAN, |s| s.sol.certified_bound)
}

/// Evaluates `u(x) = e^{iζ·x}(1 + r(x))`.
///
/// # Safety
/// `x` must hold `len` values; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bcgo_solution_eval(
    sol: *const BcgoSolution,
    x: *const f64,
    len: usize,
    re: *mut f64,
    im: *mut f64,
) -> BcgoStatus {
    guard(|| {
        let s = borrow(sol, "sol")?;
        let (re, im) = (out_ptr(re, "re")?, out_ptr(im, "im")?);
        let x = slice(x, len, "x")?;
        if len != s.sol.dim() {
            return Err(Error::DimensionMismatch { expected: s.sol.dim(), got: len }.into());
        }
        let v = s.eval.value(x);
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// # Safety
/// `sol` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn bcgo_solution_free(sol: *mut BcgoSolution) {
    release(sol)
}

/// Parameter schedule for `(k, δ)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bcgo_schedule(
    k: f64,
    delta: f64,
    s: f64,
    n: usize,
    m: f64,
    r: f64,
    c0: f64,
    out: *mut BcgoSchedule,
) -> BcgoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = schedule_of(&parameter_schedule(k, delta, s, n, m, r, c0)?);
        Ok(())
    })
}

/// Estimates `F(q₁ − q₂)` of the even extensions at `xi[0..len]`.
/// `boundary` selects the Cauchy-data pairing instead of the volume one.
///
/// # Safety
/// `cfg` must be a live handle, `xi` must hold `len` values, `re` and `im`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn bcgo_estimate_fourier(
    cfg: *const BcgoConfig,
    xi: *const f64,
    len: usize,
    k: f64,
    a: f64,
    boundary: bool,
    re: *mut f64,
    im: *mut f64,
) -> BcgoStatus {
    guard(|| {
        let cfg = &borrow(cfg, "cfg")?.0;
        let (re, im) = (out_ptr(re, "re")?, out_ptr(im, "im")?);
        let xi = slice(xi, len, "xi")?;
        let dom = cfg.domain_spec()?;
        if len != dom.dim {
            return Err(Error::DimensionMismatch { expected: dom.dim, got: len }.into());
        }
        let (q1, q2) = cfg.potentials()?;
        let mut opts = cfg.resolution.recon();
        opts.source = if boundary { PairingSource::Boundary } else { PairingSource::Oracle };
        let v = Reconstructor::new(&q1, &q2, &dom, &opts)?.estimate(xi, k, a)?.value;
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// Runs the configured sweep. Rows that fail are dropped; the call fails
/// only if none succeed. With `write_files` the CSV and plot are written
/// to the configured output directory.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bcgo_sweep_run(
    cfg: *const BcgoConfig,
    write_files: bool,
    out: *mut *mut BcgoSweep,
) -> BcgoStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let outcome = run_sweep(&borrow(cfg, "cfg")?.0, write_files)?;
        if outcome.records.is_empty() {
            let msg = outcome.failures.first().map_or("no rows".to_string(), |f| format!("{f:?}"));
            return Err(Fail(BcgoStatus::Precondition, msg));
        }
        *out = boxed(BcgoSweep(outcome.records));
        Ok(())
    })
}

/// # Safety
/// `sweep` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bcgo_sweep_len(sweep: *const BcgoSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.0.len())
}

/// Copies row `index` into `out`.
///
/// # Safety
/// `sweep` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bcgo_sweep_record(
    sweep: *const BcgoSweep,
    index: usize,
    out: *mut BcgoRecord,
) -> BcgoStatus {
    guard(|| {
        let rows = &borrow(sweep, "sweep")?.0;
        let out = out_ptr(out, "out")?;
        let r = rows.get(index).ok_or_else(|| {
            Fail(BcgoStatus::InvalidArgument, format!("row {index} out of range ({} rows)", rows.len()))
        })?;
        *out = BcgoRecord {
            schedule: schedule_of(&r.schedule),
            err_hminus1: r.err_hminus1,
            bound_value: r.bound_value,
            runtime_s: r.runtime_s,
            nodes: r.nodes,
        };
        Ok(())
    })
}

/// # Safety
/// `sweep` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn bcgo_sweep_free(sweep: *mut BcgoSweep) {
    release(sweep)
}
