//! C ABI over `cipc-core`.
//!
//! Every fallible function returns a [`CipcStatus`] and writes its result
//! through an out-pointer. On failure the out-pointer is left untouched and
//! [`cipc_last_error_message`] describes what went wrong. Models are opaque
//! handles created by [`cipc_model_new`] and released by [`cipc_model_free`].
//!
//! The generated header lives at `include/cipc.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cipc_core::covert_opt::{self, EctStatus};
use cipc_core::detection::{self, DetectorContext};
use cipc_core::mc::{self, Hypothesis, McConfig};
use cipc_core::model::{Scheme, SchemeConfig, SystemParams};
use cipc_core::{outage, specfun, CipcError};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CipcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    Overflow = 4,
    NonConvergence = 5,
    Tolerance = 6,
    BracketNotFound = 7,
    EmptyFeasibleSet = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CipcScheme {
    Truncated = 0,
    Conventional = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CipcHypothesis {
    /// Alice is silent.
    H0 = 0,
    /// Alice transmits.
    H1 = 1,
}

/// Channel means, noise powers and the self-interference coefficient.
/// The reverse channel `λ_ba` is taken equal to `lambda_ab`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CipcSystemParams {
    pub lambda_ab: f64,
    pub lambda_aw: f64,
    pub lambda_bw: f64,
    pub lambda_bb: f64,
    pub sigma2_b: f64,
    pub sigma2_w: f64,
    pub phi: f64,
}

/// A design point. Powers are linear; `p_a_max` is ignored by the
/// conventional scheme.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CipcSchemeConfig {
    pub scheme: CipcScheme,
    pub p_a_max: f64,
    pub q: f64,
    pub p_b_max: f64,
    pub rate: f64,
    pub epsilon: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CipcEctResult {
    pub q_star: f64,
    /// The configured rate, or the optimal one when the rate was optimized.
    pub rate: f64,
    pub ect: f64,
    pub xi_bar: f64,
    pub constraint_slack: f64,
    /// NaN when no bound applies (truncated scheme).
    pub asymptotic_bound: f64,
    /// False when the rate cannot be decoded at `q_star` and `ect` is zero.
    pub decodable: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CipcMcEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
}

/// Opaque handle holding a validated design point and its environment.
pub struct CipcModel {
    cfg: SchemeConfig,
    sys: SystemParams,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure {
    status: CipcStatus,
    message: String,
}

impl From<CipcError> for Failure {
    fn from(e: CipcError) -> Self {
        let status = match e {
            CipcError::InvalidParameter(_) => CipcStatus::InvalidParameter,
            CipcError::Domain(_) => CipcStatus::Domain,
            CipcError::Overflow(_) => CipcStatus::Overflow,
            CipcError::NonConvergence { .. } => CipcStatus::NonConvergence,
            CipcError::Tolerance { .. } => CipcStatus::Tolerance,
            CipcError::BracketNotFound { .. } => CipcStatus::BracketNotFound,
            CipcError::EmptyFeasibleSet => CipcStatus::EmptyFeasibleSet,
        };
        Failure { status, message: e.to_string() }
    }
}

fn null(what: &str) -> Failure {
    Failure { status: CipcStatus::NullPointer, message: format!("{what} is null") }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CipcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            CipcStatus::Ok
        }
        Ok(Err(f)) => {
            set_last_error(&f.message);
            f.status
        }
        Err(_) => {
            set_last_error("internal panic");
            CipcStatus::Panic
        }
    }
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    match out.as_mut() {
        Some(slot) => {
            *slot = value;
            Ok(())
        }
        None => Err(null("output pointer")),
    }
}

/// # Safety
/// `model` must be null or a live handle from [`cipc_model_new`].
unsafe fn model<'a>(model: *const CipcModel) -> Result<&'a CipcModel, Failure> {
    model.as_ref().ok_or_else(|| null("model"))
}

fn to_core(params: &CipcSystemParams, config: &CipcSchemeConfig) -> (SchemeConfig, SystemParams) {
    let sys = SystemParams {
        lambda_ab: params.lambda_ab,
        lambda_aw: params.lambda_aw,
        lambda_bw: params.lambda_bw,
        lambda_bb: params.lambda_bb,
        lambda_ba: params.lambda_ab,
        sigma2_b: params.sigma2_b,
        sigma2_w: params.sigma2_w,
        phi: params.phi,
    };
    let scheme = match config.scheme {
        CipcScheme::Truncated => Scheme::Truncated { p_a_max: config.p_a_max },
        CipcScheme::Conventional => Scheme::Conventional,
    };
    let cfg = SchemeConfig { scheme, q: config.q, p_b_max: config.p_b_max, rate: config.rate, epsilon: config.epsilon };
    (cfg, sys)
}

/// Validates the inputs and allocates a model.
///
/// # Safety
/// `params` and `config` must point to readable structs and `out` must be
/// valid for writes. The handle written to `out` must be released with
/// [`cipc_model_free`].
#[no_mangle]
pub unsafe extern "C" fn cipc_model_new(
    params: *const CipcSystemParams,
    config: *const CipcSchemeConfig,
    out: *mut *mut CipcModel,
) -> CipcStatus {
    guard(|| {
        let params = params.as_ref().ok_or_else(|| null("params"))?;
        let config = config.as_ref().ok_or_else(|| null("config"))?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let (cfg, sys) = to_core(params, config);
        cfg.validate(&sys)?;
        write(out, Box::into_raw(Box::new(CipcModel { cfg, sys })))
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle from [`cipc_model_new`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn cipc_model_free(model: *mut CipcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Message for the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn cipc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// False alarm probability at threshold `tau` for warden gain `g_bw`.
///
/// # Safety
/// `m` must be a live model handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_false_alarm(m: *const CipcModel, g_bw: f64, tau: f64, out: *mut f64) -> CipcStatus {
    guard(|| {
        let m = model(m)?;
        let ctx = DetectorContext::new(g_bw, &m.cfg, &m.sys)?;
        write(out, detection::false_alarm(tau, &ctx, &m.cfg, &m.sys))
    })
}

/// Miss detection probability at threshold `tau` for warden gain `g_bw`.
///
/// # Safety
/// `m` must be a live model handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_miss_detection(m: *const CipcModel, g_bw: f64, tau: f64, out: *mut f64) -> CipcStatus {
    guard(|| {
        let m = model(m)?;
        let ctx = DetectorContext::new(g_bw, &m.cfg, &m.sys)?;
        write(out, detection::miss_detection(tau, &ctx, &m.cfg, &m.sys)?)
    })
}

/// The warden's optimal threshold.
///
/// # Safety
/// `m` must be a live model handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_optimal_threshold(m: *const CipcModel, g_bw: f64, out: *mut f64) -> CipcStatus {
    guard(|| {
        let m = model(m)?;
        let ctx = DetectorContext::new(g_bw, &m.cfg, &m.sys)?;
        write(out, detection::optimal_threshold(&ctx))
    })
}

/// Minimum total detection error for warden gain `g_bw`.
///
/// # Safety
/// `m` must be a live model handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_xi_star(m: *const CipcModel, g_bw: f64, out: *mut f64) -> CipcStatus {
    guard(|| {
        let m = model(m)?;
        write(out, detection::xi_star(g_bw, &m.cfg, &m.sys)?)
    })
}

/// Expected minimum detection error at received-power target `q`.
///
/// # Safety
/// `m` must be a live model handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_xi_bar(m: *const CipcModel, q: f64, out: *mut f64) -> CipcStatus {
    guard(|| {
        let m = model(m)?;
        write(out, covert_opt::xi_bar(q, &m.cfg, &m.sys)?)
    })
}

/// Outage probability at the model's design point.
///
/// # Safety
/// `m` must be a live model handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_outage_probability(m: *const CipcModel, out: *mut f64) -> CipcStatus {
    guard(|| {
        let m = model(m)?;
        write(out, outage::outage_probability(&m.cfg, &m.sys)?)
    })
}

/// Effective covert throughput at target `q` and `rate`.
///
/// # Safety
/// `m` must be a live model handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_ect(m: *const CipcModel, q: f64, rate: f64, out: *mut f64) -> CipcStatus {
    guard(|| {
        let m = model(m)?;
        write(out, covert_opt::ect(q, rate, &m.cfg, &m.sys)?)
    })
}

/// Largest covert target of the conventional scheme.
///
/// # Safety
/// `m` must be a live model handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_solve_q_epsilon(m: *const CipcModel, out: *mut f64) -> CipcStatus {
    guard(|| {
        let m = model(m)?;
        write(out, covert_opt::solve_q_epsilon(&m.cfg, &m.sys)?)
    })
}

/// Throughput limit of the conventional scheme as the jamming budget grows.
///
/// # Safety
/// `m` must be a live model handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_asymptotic_bound(m: *const CipcModel, out: *mut f64) -> CipcStatus {
    guard(|| {
        let m = model(m)?;
        write(out, covert_opt::asymptotic_ect_bound(&m.cfg, &m.sys)?)
    })
}

/// Optimizes the target (and the rate when `optimize_rate` is set) under
/// the covertness constraint.
///
/// # Safety
/// `m` must be a live model handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_optimize(
    m: *const CipcModel,
    optimize_rate: bool,
    out: *mut CipcEctResult,
) -> CipcStatus {
    guard(|| {
        let m = model(m)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let r = covert_opt::optimize(&m.cfg, &m.sys, optimize_rate)?;
        write(
            out,
            CipcEctResult {
                q_star: r.q_star,
                rate: r.r_used,
                ect: r.ect,
                xi_bar: r.xi_bar_at_q_star,
                constraint_slack: r.constraint_slack,
                asymptotic_bound: r.asymptotic_bound.unwrap_or(f64::NAN),
                decodable: r.status == EctStatus::Ok,
            },
        )
    })
}

fn estimate(e: mc::McEstimate) -> CipcMcEstimate {
    CipcMcEstimate { mean: e.mean, std_error: e.std_error, n: e.n }
}

/// Monte Carlo estimate of the false alarm (`H0`) or miss detection (`H1`)
/// probability. Results depend only on `seed`, `stream` and `n_draws`.
///
/// # Safety
/// `m` must be a live model handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_simulate_detection(
    m: *const CipcModel,
    g_bw: f64,
    tau: f64,
    hypothesis: CipcHypothesis,
    seed: u64,
    stream: u64,
    n_draws: u64,
    out: *mut CipcMcEstimate,
) -> CipcStatus {
    guard(|| {
        let m = model(m)?;
        let h = match hypothesis {
            CipcHypothesis::H0 => Hypothesis::H0,
            CipcHypothesis::H1 => Hypothesis::H1,
        };
        let mc = McConfig::new(seed, n_draws).with_stream(stream);
        write(out, estimate(mc::simulate_detection(tau, h, g_bw, &m.cfg, &m.sys, &mc)?))
    })
}

/// Monte Carlo estimate of the outage probability.
///
/// # Safety
/// `m` must be a live model handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_simulate_outage(
    m: *const CipcModel,
    seed: u64,
    stream: u64,
    n_draws: u64,
    out: *mut CipcMcEstimate,
) -> CipcStatus {
    guard(|| {
        let m = model(m)?;
        let mc = McConfig::new(seed, n_draws).with_stream(stream);
        write(out, estimate(mc::simulate_outage(&m.cfg, &m.sys, &mc)?))
    })
}

/// Exponential integral `Ei(x)` for real `x != 0`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cipc_ei(x: f64, out: *mut f64) -> CipcStatus {
    guard(|| write(out, specfun::ei(x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    fn message() -> String {
        unsafe { CStr::from_ptr(cipc_last_error_message()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn every_core_error_has_a_status() {
        let cases = [
            (CipcError::InvalidParameter("x".into()), CipcStatus::InvalidParameter),
            (CipcError::Domain("x".into()), CipcStatus::Domain),
            (CipcError::Overflow("x".into()), CipcStatus::Overflow),
            (CipcError::NonConvergence { terms: 3 }, CipcStatus::NonConvergence),
            (CipcError::Tolerance { estimate: 1.0, error: 1.0 }, CipcStatus::Tolerance),
            (CipcError::BracketNotFound { lo: 1.0, hi: 2.0 }, CipcStatus::BracketNotFound),
            (CipcError::EmptyFeasibleSet, CipcStatus::EmptyFeasibleSet),
        ];
        for (error, status) in cases {
            assert_eq!(Failure::from(error).status, status);
        }
    }

    #[test]
    fn panics_do_not_cross_the_boundary() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, CipcStatus::Panic);
        assert_eq!(message(), "internal panic");
    }

    #[test]
    fn interior_nul_is_sanitized() {
        set_last_error("a\0b");
        assert_eq!(message(), "a b");
    }
}
