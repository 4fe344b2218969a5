//! Mean-intensity / asymmetry coordinates for two-state MMPPs.
//!
//! With `q = q12 + q21`, `nu = (q21, q12) / q`, `psi_bar = nu' psi` and
//! `delta = (psi2 - psi1) / psi_bar`, the coordinates are
//! `alpha = 2 delta sqrt(nu1 nu2)` and `beta = delta (nu2 - nu1)`.
//! Since `4 nu1 nu2 + (nu2 - nu1)^2 = 1`, `(alpha, beta)` are polar
//! coordinates with radius `delta`, which gives the inverse map.

use crate::error::{Error, Result};

use super::params::ParamVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReparamPoint {
    pub psi_bar: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ReparamPoint {
    pub fn to_array(self) -> [f64; 4] {
        [self.psi_bar, self.q, self.alpha, self.beta]
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        match v {
            &[psi_bar, q, alpha, beta] => Ok(Self { psi_bar, q, alpha, beta }),
            _ => Err(Error::invalid(format!("reparameterized point needs 4 values, got {}", v.len()))),
        }
    }
}

pub const REPARAM_NAMES: [&str; 4] = ["psi_bar", "q", "alpha", "beta"];

/// Maps a canonical two-state parameter vector `(psi1, psi2, q12, q21)` to
/// `(psi_bar, q, alpha, beta)`.
pub fn to_reparam(theta: &ParamVector) -> Result<ReparamPoint> {
    let &[psi1, psi2, q12, q21] = theta.as_slice() else {
        return Err(Error::invalid("reparameterization is defined for two-state models only"));
    };
    if [psi1, psi2, q12, q21].iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::invalid("all parameters must be positive"));
    }
    if psi2 < psi1 {
        return Err(Error::invalid("parameters must be canonical (psi1 <= psi2)"));
    }
    if psi2 == psi1 {
        return Err(Error::DegeneratePoint("equal intensities give delta = 0".into()));
    }
    let q = q12 + q21;
    let nu1 = q21 / q;
    let nu2 = q12 / q;
    let psi_bar = nu1 * psi1 + nu2 * psi2;
    let delta = (psi2 - psi1) / psi_bar;
    Ok(ReparamPoint {
        psi_bar,
        q,
        alpha: 2.0 * delta * (nu1 * nu2).sqrt(),
        beta: delta * (nu2 - nu1),
    })
}

/// Inverse of [`to_reparam`]. Points whose implied `nu1` leaves `(0, 1)` or
/// whose `psi1` is not positive are outside the support.
pub fn from_reparam(p: &ReparamPoint) -> Result<ParamVector> {
    if !(p.alpha > 0.0 && p.alpha.is_finite()) {
        return Err(Error::invalid(format!("alpha must be positive, got {}", p.alpha)));
    }
    if !(p.psi_bar > 0.0 && p.q > 0.0 && p.psi_bar.is_finite() && p.q.is_finite()) {
        return Err(Error::invalid("psi_bar and q must be positive"));
    }
    if !p.beta.is_finite() {
        return Err(Error::invalid("beta must be finite"));
    }
    let delta = p.alpha.hypot(p.beta);
    let nu1 = 0.5 * (1.0 - p.beta / delta);
    let nu2 = 1.0 - nu1;
    if !(nu1 > 0.0 && nu1 < 1.0) {
        return Err(Error::SupportViolation(format!("stationary probability {nu1} outside (0, 1)")));
    }
    let psi1 = p.psi_bar * (1.0 - nu2 * delta);
    let psi2 = p.psi_bar * (1.0 + nu1 * delta);
    if !(psi1 > 0.0) {
        return Err(Error::SupportViolation(format!("implied psi1 = {psi1} is not positive")));
    }
    Ok(ParamVector(vec![psi1, psi2, nu2 * p.q, nu1 * p.q]))
}

/// `log |d(psi1, psi2, q12, q21) / d(psi_bar, q, alpha, beta)|`, which equals
/// `log(psi_bar q alpha / (2 delta^2))`.
pub fn log_jacobian(p: &ReparamPoint) -> f64 {
    let delta_sq = p.alpha * p.alpha + p.beta * p.beta;
    p.psi_bar.ln() + p.q.ln() + p.alpha.ln() - std::f64::consts::LN_2 - delta_sq.ln()
}
