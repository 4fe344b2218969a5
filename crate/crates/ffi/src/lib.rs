//! C interface to the MMPP samplers.
//!
//! Every function returns an [`MmppStatus`]; results go through out
//! pointers. On failure, [`mmpp_last_error`] describes the error of the
//! calling thread. Handles are opaque and must be released with their
//! `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use mmpp_rwm::diagnostics::act_window;
use mmpp_rwm::math::diffusion_speed;
use mmpp_rwm::mmpp::{log_likelihood, simulate, EventData, MmppParams, PriorSpec};
use mmpp_rwm::samplers::{
    adaptive_multiplicative_run, rwm_block, Algorithm, ChainOutput, MmppPosterior, ProposalSpec, RunConfig, Target,
};
use mmpp_rwm::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmppStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SupportViolation = 3,
    DegeneratePoint = 4,
    UndefinedVariance = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// Posterior of an MMPP given an event record and exponential priors.
pub struct MmppPosteriorHandle(MmppPosterior);

/// Output of one chain.
pub struct MmppChainHandle(ChainOutput);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MmppStatus {
    match e {
        Error::SupportViolation(_) => MmppStatus::SupportViolation,
        Error::DegeneratePoint(_) => MmppStatus::DegeneratePoint,
        Error::UndefinedVariance => MmppStatus::UndefinedVariance,
        Error::InvalidArgument(_) | Error::Usage(_) => MmppStatus::InvalidArgument,
        _ => MmppStatus::Internal,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (MmppStatus, String)>) -> MmppStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MmppStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MmppStatus::Internal
        }
    }
}

fn lift<T>(r: mmpp_rwm::Result<T>) -> Result<T, (MmppStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(name: &str) -> (MmppStatus, String) {
    (MmppStatus::NullPointer, format!("{name} is null"))
}

/// # Safety
/// `p` must be null only if `len` is 0, otherwise valid for `len` reads.
unsafe fn input<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], (MmppStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(slice::from_raw_parts(p, len))
}

fn out<T>(p: *mut T, name: &str) -> Result<*mut T, (MmppStatus, String)> {
    if p.is_null() {
        Err(null(name))
    } else {
        Ok(p)
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mmpp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Log-likelihood of `n_events` sorted event times in `[0, t_obs]` under a
/// `d`-state MMPP with intensities `psi` and `d * (d - 1)` row-major
/// off-diagonal rates `q`. Writes `-inf` when the likelihood underflows.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn mmpp_log_likelihood(
    psi: *const f64,
    d: usize,
    q: *const f64,
    t_obs: f64,
    events: *const f64,
    n_events: usize,
    out_value: *mut f64,
) -> MmppStatus {
    guard(|| {
        let out_value = out(out_value, "out_value")?;
        let psi = input(psi, d, "psi")?;
        let q = input(q, d * d.saturating_sub(1), "q")?;
        let events = input(events, n_events, "events")?;
        let params = lift(MmppParams::from_rates(psi.to_vec(), q))?;
        let data = lift(EventData::new(t_obs, events.to_vec()))?;
        *out_value = log_likelihood(&params, &data).unwrap_or(f64::NEG_INFINITY);
        Ok(())
    })
}

/// Simulates an MMPP over `[0, t_obs]` into `buf` (capacity `cap`). The
/// event count is written to `out_n` even when it exceeds `cap`, in which
/// case `BufferTooSmall` is returned and `buf` is left untouched.
///
/// # Safety
/// Pointers must be valid for the stated lengths; `buf` may be null when `cap` is 0.
#[no_mangle]
pub unsafe extern "C" fn mmpp_simulate(
    psi: *const f64,
    d: usize,
    q: *const f64,
    t_obs: f64,
    seed: u64,
    buf: *mut f64,
    cap: usize,
    out_n: *mut usize,
) -> MmppStatus {
    guard(|| {
        let out_n = out(out_n, "out_n")?;
        let psi = input(psi, d, "psi")?;
        let q = input(q, d * d.saturating_sub(1), "q")?;
        let params = lift(MmppParams::from_rates(psi.to_vec(), q))?;
        let sim = lift(simulate(&params, t_obs, seed))?;
        let events = sim.data.events();
        *out_n = events.len();
        if events.len() > cap {
            return Err((
                MmppStatus::BufferTooSmall,
                format!("{} events do not fit a buffer of {cap}", events.len()),
            ));
        }
        if !events.is_empty() {
            ptr::copy_nonoverlapping(events.as_ptr(), out(buf, "buf")?, events.len());
        }
        Ok(())
    })
}

/// Builds a posterior from an event record and `n_params = d * d` prior
/// means (intensities, then off-diagonal rates).
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn mmpp_posterior_new(
    t_obs: f64,
    events: *const f64,
    n_events: usize,
    prior_means: *const f64,
    n_params: usize,
    out_handle: *mut *mut MmppPosteriorHandle,
) -> MmppStatus {
    guard(|| {
        let out_handle = out(out_handle, "out_handle")?;
        let events = input(events, n_events, "events")?;
        let means = input(prior_means, n_params, "prior_means")?;
        let data = lift(EventData::new(t_obs, events.to_vec()))?;
        let prior = lift(PriorSpec::new(means.to_vec()))?;
        let post = lift(MmppPosterior::new(data, prior))?;
        *out_handle = Box::into_raw(Box::new(MmppPosteriorHandle(post)));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from [`mmpp_posterior_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mmpp_posterior_free(handle: *mut MmppPosteriorHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of parameters of the posterior.
///
/// # Safety
/// `handle` must be a live posterior handle.
#[no_mangle]
pub unsafe extern "C" fn mmpp_posterior_dim(handle: *const MmppPosteriorHandle, out_dim: *mut usize) -> MmppStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        *out(out_dim, "out_dim")? = h.0.dim();
        Ok(())
    })
}

/// Log-posterior up to a constant; `-inf` outside the support.
///
/// # Safety
/// `handle` must be live and `theta` valid for `n` reads.
#[no_mangle]
pub unsafe extern "C" fn mmpp_posterior_log_density(
    handle: *const MmppPosteriorHandle,
    theta: *const f64,
    n: usize,
    out_value: *mut f64,
) -> MmppStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let out_value = out(out_value, "out_value")?;
        let theta = input(theta, n, "theta")?;
        if n != h.0.dim() {
            return Err((MmppStatus::InvalidArgument, format!("expected {} parameters, got {n}", h.0.dim())));
        }
        *out_value = h.0.log_density(theta).unwrap_or(f64::NEG_INFINITY);
        Ok(())
    })
}

/// Spherical Gaussian block random walk with the given scale.
///
/// # Safety
/// `handle` must be live, `initial` valid for `n` reads.
#[no_mangle]
pub unsafe extern "C" fn mmpp_run_block(
    handle: *const MmppPosteriorHandle,
    scale: f64,
    iterations: usize,
    burn_in: usize,
    seed: u64,
    initial: *const f64,
    n: usize,
    out_chain: *mut *mut MmppChainHandle,
) -> MmppStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let out_chain = out(out_chain, "out_chain")?;
        let initial = input(initial, n, "initial")?;
        let config = lift(RunConfig::new(Algorithm::Blk, iterations, burn_in, seed, initial.to_vec()))?;
        let chain = lift(ProposalSpec::spherical(scale).and_then(|p| rwm_block(&h.0, &p, &config)))?;
        *out_chain = Box::into_raw(Box::new(MmppChainHandle(chain)));
        Ok(())
    })
}

/// Adaptive multiplicative block random walk with default constants.
///
/// # Safety
/// `handle` must be live, `initial` valid for `n` reads.
#[no_mangle]
pub unsafe extern "C" fn mmpp_run_adaptive(
    handle: *const MmppPosteriorHandle,
    iterations: usize,
    burn_in: usize,
    seed: u64,
    initial: *const f64,
    n: usize,
    out_chain: *mut *mut MmppChainHandle,
) -> MmppStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let out_chain = out(out_chain, "out_chain")?;
        let initial = input(initial, n, "initial")?;
        let config = lift(RunConfig::new(Algorithm::BlkAdpMul, iterations, burn_in, seed, initial.to_vec()))?;
        let chain = lift(adaptive_multiplicative_run(&h.0, &config))?;
        *out_chain = Box::into_raw(Box::new(MmppChainHandle(chain)));
        Ok(())
    })
}

/// # Safety
/// `chain` must come from a run function and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mmpp_chain_free(chain: *mut MmppChainHandle) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Rows (iterations, including burn-in) and columns (parameters).
///
/// # Safety
/// `chain` must be live.
#[no_mangle]
pub unsafe extern "C" fn mmpp_chain_shape(
    chain: *const MmppChainHandle,
    out_rows: *mut usize,
    out_cols: *mut usize,
) -> MmppStatus {
    guard(|| {
        let c = chain.as_ref().ok_or_else(|| null("chain"))?;
        *out(out_rows, "out_rows")? = c.0.n_rows();
        *out(out_cols, "out_cols")? = c.0.dim;
        Ok(())
    })
}

/// Copies the row-major samples into `buf`, which must hold rows * cols values.
///
/// # Safety
/// `chain` must be live and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn mmpp_chain_samples(chain: *const MmppChainHandle, buf: *mut f64, cap: usize) -> MmppStatus {
    guard(|| {
        let c = chain.as_ref().ok_or_else(|| null("chain"))?;
        let s = &c.0.samples;
        if cap < s.len() {
            return Err((MmppStatus::BufferTooSmall, format!("need {} values, buffer holds {cap}", s.len())));
        }
        ptr::copy_nonoverlapping(s.as_ptr(), out(buf, "buf")?, s.len());
        Ok(())
    })
}

/// Fraction of accepted proposals.
///
/// # Safety
/// `chain` must be live.
#[no_mangle]
pub unsafe extern "C" fn mmpp_chain_acceptance(chain: *const MmppChainHandle, out_rate: *mut f64) -> MmppStatus {
    guard(|| {
        let c = chain.as_ref().ok_or_else(|| null("chain"))?;
        *out(out_rate, "out_rate")? = c.0.acceptance_rate();
        Ok(())
    })
}

/// Integrated autocorrelation time of parameter `column` after burn-in.
///
/// # Safety
/// `chain` must be live.
#[no_mangle]
pub unsafe extern "C" fn mmpp_chain_act(chain: *const MmppChainHandle, column: usize, out_act: *mut f64) -> MmppStatus {
    guard(|| {
        let c = chain.as_ref().ok_or_else(|| null("chain"))?;
        let out_act = out(out_act, "out_act")?;
        if column >= c.0.dim {
            return Err((MmppStatus::InvalidArgument, format!("column {column} out of range")));
        }
        *out_act = lift(act_window(&c.0.kept_column(column)))?.act;
        Ok(())
    })
}

/// Limiting acceptance and speed of a random walk with rescaled scale `mu`
/// on a target of roughness `j`.
///
/// # Safety
/// Out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mmpp_diffusion_speed(mu: f64, j: f64, out_speed: *mut f64, out_acceptance: *mut f64) -> MmppStatus {
    guard(|| {
        let p = lift(diffusion_speed(mu, j))?;
        *out(out_speed, "out_speed")? = p.speed;
        *out(out_acceptance, "out_acceptance")? = p.acceptance;
        Ok(())
    })
}
