//! Exact MMPP likelihood by forward propagation of the state distribution.

use crate::error::{Error, Result};
use crate::math::{fixed, stationary_dist};

use super::events::EventData;
use super::params::{states_for_len, MmppParams, ParamVector, PriorSpec};

/// Log-density value; `None` marks a point outside the support.
pub type LogDensity = Option<f64>;

/// Log-likelihood with the hidden chain started from its stationary
/// distribution. Returns `None` when the generator is reducible, since the
/// stationary distribution is then not unique.
pub fn log_likelihood(params: &MmppParams, data: &EventData) -> LogDensity {
    let nu = stationary_dist(params.generator()).ok()?;
    log_likelihood_from(params, data, nu.as_slice())
}

/// Log-likelihood with an explicit initial distribution over hidden states.
///
/// The row vector is propagated through `exp((Q - Psi) t_i) Psi` for each
/// event and renormalized after every step; the log normalizers accumulate
/// into the result.
pub fn log_likelihood_from(params: &MmppParams, data: &EventData, initial: &[f64]) -> LogDensity {
    let d = params.n_states();
    if initial.len() != d {
        return None;
    }
    match d {
        1 => propagate_fixed::<1>(params, data, initial),
        2 => propagate_fixed::<2>(params, data, initial),
        3 => propagate_fixed::<3>(params, data, initial),
        4 => propagate_fixed::<4>(params, data, initial),
        5 => propagate_fixed::<5>(params, data, initial),
        6 => propagate_fixed::<6>(params, data, initial),
        _ => None,
    }
}

fn propagate_fixed<const N: usize>(params: &MmppParams, data: &EventData, initial: &[f64]) -> LogDensity {
    let psi = params.psi();
    let q = params.generator();
    let mut drift = [[0.0; N]; N];
    for (i, row) in drift.iter_mut().enumerate() {
        row.copy_from_slice(q.row(i));
        row[i] -= psi[i];
    }
    let mut v = [0.0; N];
    v.copy_from_slice(initial);

    let mut log_l = 0.0;
    let gaps = data.gaps();
    let (last, inner) = gaps.split_last().expect("event data always has a trailing gap");
    for &gap in inner {
        v = fixed::left_mul(&v, &fixed::expm(&drift, gap)?);
        let mut total = 0.0;
        for (vi, &p) in v.iter_mut().zip(psi) {
            *vi *= p;
            total += *vi;
        }
        if !(total > 0.0 && total.is_finite()) {
            return if total == 0.0 { Some(f64::NEG_INFINITY) } else { None };
        }
        v.iter_mut().for_each(|x| *x /= total);
        log_l += total.ln();
    }
    let v = fixed::left_mul(&v, &fixed::expm(&drift, *last)?);
    let total: f64 = v.iter().sum();
    if !(total > 0.0) {
        return Some(f64::NEG_INFINITY);
    }
    Some(log_l + total.ln())
}

/// Log-posterior under independent exponential priors. `Ok(None)` when any
/// component is not strictly positive.
pub fn log_posterior(theta: &[f64], data: &EventData, prior: &PriorSpec) -> Result<LogDensity> {
    states_for_len(theta.len())?;
    if prior.len() != theta.len() {
        return Err(Error::invalid(format!(
            "prior has {} means but theta has {} components",
            prior.len(),
            theta.len()
        )));
    }
    if theta.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Ok(None);
    }
    let params = match MmppParams::from_vector(&ParamVector(theta.to_vec())) {
        Ok(p) => p,
        Err(_) => return Ok(None),
    };
    Ok(log_likelihood(&params, data).map(|ll| ll + prior.log_density(theta)))
}
