//! Closed-form efficiency curves for random walk Metropolis.

use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// One point on the limiting speed/acceptance curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyCurvePoint {
    /// Rescaled proposal scale (dimensionless).
    pub mu: f64,
    /// Speed of the limiting diffusion, with the leading constant set to 1.
    pub speed: f64,
    /// Expected acceptance rate.
    pub acceptance: f64,
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Limiting acceptance `2 Phi(-mu sqrt(j) / 2)` and speed `mu^2 * acceptance`
/// for a target with roughness `j`.
pub fn diffusion_speed(mu: f64, j: f64) -> Result<EfficiencyCurvePoint> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::invalid(format!("mu must be positive, got {mu}")));
    }
    if !(j > 0.0 && j.is_finite()) {
        return Err(Error::invalid(format!("roughness must be positive, got {j}")));
    }
    let acceptance = 2.0 * normal_cdf(-0.5 * mu * j.sqrt());
    Ok(EfficiencyCurvePoint {
        mu,
        speed: mu * mu * acceptance,
        acceptance,
    })
}

/// Evaluates [`diffusion_speed`] on `points` log-spaced values in `[mu_min, mu_max]`.
pub fn diffusion_curve(j: f64, mu_min: f64, mu_max: f64, points: usize) -> Result<Vec<EfficiencyCurvePoint>> {
    if !(mu_min > 0.0 && mu_max > mu_min) {
        return Err(Error::invalid("mu range must satisfy 0 < mu_min < mu_max"));
    }
    if points < 2 {
        return Err(Error::invalid("need at least two curve points"));
    }
    let (lo, hi) = (mu_min.ln(), mu_max.ln());
    (0..points)
        .map(|i| {
            let mu = if i == 0 {
                mu_min
            } else if i == points - 1 {
                mu_max
            } else {
                (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp()
            };
            diffusion_speed(mu, j)
        })
        .collect()
}

/// Ratio of the arithmetic to the harmonic mean of the per-block mean
/// squared inverse scales: the limiting gain of Metropolis-within-Gibbs
/// over an optimally scaled block update.
pub fn mwg_efficiency_ratio(block_mean_sq_inverse_scales: &[f64]) -> Result<f64> {
    if block_mean_sq_inverse_scales.is_empty() {
        return Err(Error::invalid("need at least one block"));
    }
    if block_mean_sq_inverse_scales
        .iter()
        .any(|&c| !(c > 0.0 && c.is_finite()))
    {
        return Err(Error::invalid("block inverse scales must be positive and finite"));
    }
    let k = block_mean_sq_inverse_scales.len() as f64;
    let arithmetic = block_mean_sq_inverse_scales.iter().sum::<f64>() / k;
    let harmonic = k / block_mean_sq_inverse_scales.iter().map(|c| 1.0 / c).sum::<f64>();
    Ok((arithmetic / harmonic).max(1.0))
}
