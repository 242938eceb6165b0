//! C ABI over the `lifting` library.
//!
//! Every function returns a [`LiftingStatus`]; on failure a message is kept
//! per thread and read with [`lifting_last_error`]. Handles are opaque and
//! released with their `_free` function. No function unwinds across the
//! boundary: panics become `LIFTING_STATUS_PANIC`.

use lifting::asymptotics::{exponential_lifting, linear_lifting, universal_lifting, LiftingResult};
use lifting::cli::{run_scenario, RunOptions, Scenario};
use lifting::lineshape::{rosen_zener, trig_lineshape, LineshapePoint};
use lifting::propagator::{mixing_angle, propagate, state_to_adiabatic, DEFAULT_TOL};
use lifting::specfun::log_gamma;
use lifting::{Error, ExpSign, PulseKind, PulseShape, StateVector, SystemParams};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftingStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    Pole = 4,
    IntegrationFailure = 5,
    ValidityViolation = 6,
    NonFinite = 7,
    ConfigError = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftingPulseKind {
    PowerRise = 0,
    PowerFall = 1,
    ExponentialRise = 2,
    ExponentialFall = 3,
    Gaussian = 4,
    Sech = 5,
    TrigPower = 6,
    LinearTruncated = 7,
}

/// A complex number as two doubles.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LiftingComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for LiftingComplex {
    fn from(z: Complex64) -> Self {
        LiftingComplex { re: z.re, im: z.im }
    }
}

/// SU(2) propagator [[u11, u12], [-conj(u12), conj(u11)]].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LiftingOperator {
    pub u11: LiftingComplex,
    pub u12: LiftingComplex,
}

/// Amplitudes of the two states (adiabatic or bare, depending on the call).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LiftingAmplitudes {
    pub minus: LiftingComplex,
    pub plus: LiftingComplex,
}

/// Asymptotic lifting populations and phases.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LiftingLifting {
    pub p_minus: f64,
    pub p_plus: f64,
    pub chi_minus: f64,
    pub chi_plus: f64,
    pub common_phase: f64,
    /// Nonzero when the formula was used outside its stated regime.
    pub warning: i32,
}

/// Opaque scenario: one pulse and one parameter point.
pub struct LiftingScenario {
    params: SystemParams,
    shape: PulseShape,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LiftingStatus {
    match e {
        Error::Pole { .. } => LiftingStatus::Pole,
        Error::OutOfRange { .. } => LiftingStatus::OutOfRange,
        Error::IntegrationFailure { .. } => LiftingStatus::IntegrationFailure,
        Error::Validity(_) | Error::Adiabaticity(_) | Error::NonAdiabaticJunction { .. } => {
            LiftingStatus::ValidityViolation
        }
        Error::NonFinite(_) => LiftingStatus::NonFinite,
        Error::UndefinedAngle | Error::InvalidArgument(_) | Error::AreaTooSmall { .. } => {
            LiftingStatus::InvalidArgument
        }
    }
}

/// Runs `f`, recording any error or panic for [`lifting_last_error`].
fn guard(f: impl FnOnce() -> Result<(), (LiftingStatus, String)>) -> LiftingStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LiftingStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            LiftingStatus::Panic
        }
    }
}

fn lib(e: Error) -> (LiftingStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (LiftingStatus, String) {
    (LiftingStatus::NullPointer, format!("{what} is null"))
}

fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), (LiftingStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and, per the API contract, valid for writes
    unsafe { out.write(v) };
    Ok(())
}

/// Message of the last failed call on this thread, or NULL after a
/// successful one. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lifting_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a scenario. `n` is the power for power and trig pulses (ignored
/// otherwise). Free with [`lifting_scenario_free`].
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lifting_scenario_new(
    kind: LiftingPulseKind,
    n: u32,
    t0_omega0: f64,
    t0_delta0: f64,
    tau_start: f64,
    tau_end: f64,
    out: *mut *mut LiftingScenario,
) -> LiftingStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = match kind {
            LiftingPulseKind::PowerRise => PulseKind::PowerRise(n),
            LiftingPulseKind::PowerFall => PulseKind::PowerFall(n),
            LiftingPulseKind::ExponentialRise => PulseKind::Exponential(ExpSign::Rising),
            LiftingPulseKind::ExponentialFall => PulseKind::Exponential(ExpSign::Falling),
            LiftingPulseKind::Gaussian => PulseKind::Gaussian,
            LiftingPulseKind::Sech => PulseKind::Sech,
            LiftingPulseKind::TrigPower => PulseKind::TrigPower(n),
            LiftingPulseKind::LinearTruncated => PulseKind::LinearTruncated,
        };
        let shape = PulseShape::new(kind, t0_omega0, tau_start, tau_end).map_err(lib)?;
        let params = SystemParams::new(t0_omega0, t0_delta0, n.max(1)).map_err(lib)?;
        write(out, Box::into_raw(Box::new(LiftingScenario { params, shape })), "out")
    })
}

/// Releases a scenario; NULL is ignored.
///
/// # Safety
/// `h` must be NULL or a handle from [`lifting_scenario_new`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn lifting_scenario_free(h: *mut LiftingScenario) {
    if !h.is_null() {
        // SAFETY: created by lifting_scenario_new and not freed before
        drop(unsafe { Box::from_raw(h) });
    }
}

fn scenario<'a>(h: *const LiftingScenario) -> Result<&'a LiftingScenario, (LiftingStatus, String)> {
    // SAFETY: non-null handles come from lifting_scenario_new
    unsafe { h.as_ref() }.ok_or_else(|| null("scenario"))
}

fn tol_or_default(tol: f64) -> f64 {
    if tol > 0.0 {
        tol
    } else {
        DEFAULT_TOL
    }
}

/// Numerical propagator from `tau_a` to `tau_b`. `tol <= 0` selects the
/// default tolerance.
///
/// # Safety
/// `h` must be NULL or a live scenario handle; `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lifting_propagate(
    h: *const LiftingScenario,
    tau_a: f64,
    tau_b: f64,
    tol: f64,
    out: *mut LiftingOperator,
) -> LiftingStatus {
    guard(|| {
        let s = scenario(h)?;
        let u = propagate(&s.params, &s.shape, tau_a, tau_b, tol_or_default(tol)).map_err(lib)?;
        write(out, LiftingOperator { u11: u.u11.into(), u12: u.u12.into() }, "out")
    })
}

/// Adiabatic amplitudes (A-, A+) at `tau` after starting in |-> at the
/// start of the pulse support.
///
/// # Safety
/// `h` must be NULL or a live scenario handle; `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lifting_adiabatic_amplitudes(
    h: *const LiftingScenario,
    tau: f64,
    tol: f64,
    out: *mut LiftingAmplitudes,
) -> LiftingStatus {
    guard(|| {
        let s = scenario(h)?;
        let u = propagate(&s.params, &s.shape, s.shape.tau_start, tau, tol_or_default(tol)).map_err(lib)?;
        let w = lifting::rabi_at(&s.shape, tau);
        let d = s.params.t0_delta0;
        let theta = if w == 0.0 && d == 0.0 { 0.0 } else { mixing_angle(w, d).map_err(lib)? };
        let a = state_to_adiabatic(&StateVector { b_minus: u.u11, b_plus: -u.u12.conj() }, theta);
        write(out, LiftingAmplitudes { minus: a.b_minus.into(), plus: a.b_plus.into() }, "out")
    })
}

fn lifting_out(l: &LiftingResult) -> LiftingLifting {
    LiftingLifting {
        p_minus: l.p_minus,
        p_plus: l.p_plus,
        chi_minus: l.chi_minus,
        chi_plus: l.chi_plus,
        common_phase: l.common_phase,
        warning: l.warning.is_some() as i32,
    }
}

/// Exact asymptotic lifting for linear rising at Landau-Zener parameter omega.
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lifting_linear(omega: f64, out: *mut LiftingLifting) -> LiftingStatus {
    guard(|| write(out, lifting_out(&linear_lifting(omega).map_err(lib)?), "out"))
}

/// Approximate lifting for power-law rising Omega0 tau^n.
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lifting_universal(n: u32, t0_delta0: f64, t0_omega0: f64, out: *mut LiftingLifting) -> LiftingStatus {
    guard(|| write(out, lifting_out(&universal_lifting(n, t0_delta0, t0_omega0).map_err(lib)?), "out"))
}

/// Exact lifting for exponential rising: varpi = T0*Delta0, zeta the half
/// area reached, s_i the coupling area at the start.
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lifting_exponential(varpi: f64, zeta: f64, s_i: f64, out: *mut LiftingLifting) -> LiftingStatus {
    guard(|| write(out, lifting_out(&exponential_lifting(varpi, zeta, s_i).map_err(lib)?), "out"))
}

fn lineshape_out(l: &LineshapePoint) -> LiftingAmplitudes {
    LiftingAmplitudes { minus: l.b_minus.into(), plus: l.b_plus.into() }
}

/// Bare amplitudes after a sech pulse (closed form).
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lifting_rosen_zener(t0_omega0: f64, t0_delta0: f64, out: *mut LiftingAmplitudes) -> LiftingStatus {
    guard(|| write(out, lineshape_out(&rosen_zener(t0_omega0, t0_delta0)), "out"))
}

/// Approximate bare amplitudes after Omega0 sin^n(tau) on [0, pi].
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lifting_trig_lineshape(
    n: u32,
    t0_omega0: f64,
    t0_delta0: f64,
    out: *mut LiftingAmplitudes,
) -> LiftingStatus {
    guard(|| write(out, lineshape_out(&trig_lineshape(n, t0_omega0, t0_delta0).map_err(lib)?), "out"))
}

/// Principal log Gamma(z).
///
/// # Safety
/// `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lifting_log_gamma(z: LiftingComplex, out: *mut LiftingComplex) -> LiftingStatus {
    guard(|| write(out, log_gamma(Complex64::new(z.re, z.im)).map_err(lib)?.into(), "out"))
}

/// Runs a TOML scenario and returns its JSON report in `*out`, to be
/// released with [`lifting_string_free`].
///
/// # Safety
/// `config` must be NULL or a NUL-terminated string; `out` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lifting_run_scenario_json(
    config: *const c_char,
    tol: f64,
    out: *mut *mut c_char,
) -> LiftingStatus {
    guard(|| {
        if config.is_null() {
            return Err(null("config"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: non-null, NUL-terminated by contract
        let text = unsafe { CStr::from_ptr(config) }
            .to_str()
            .map_err(|e| (LiftingStatus::ConfigError, format!("config is not UTF-8: {e}")))?;
        let cfg = |e: lifting::cli::CliError| (LiftingStatus::ConfigError, e.to_string());
        let s = Scenario::from_toml(text, "config").map_err(cfg)?;
        let report = run_scenario(&s, &RunOptions { tol: tol_or_default(tol), workers: 1 }).map_err(cfg)?;
        let json = CString::new(report.to_json()).map_err(|e| (LiftingStatus::NonFinite, e.to_string()))?;
        write(out, json.into_raw(), "out")
    })
}

/// Releases a string returned by this library; NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn lifting_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw in this crate
        drop(unsafe { CString::from_raw(s) });
    }
}
