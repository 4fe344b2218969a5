use crate::error::{Error, Result};

/// Autocorrelations stop being summed at the first lag below this value.
pub const ACT_CUTOFF: f64 = 0.05;

/// Minimum series length accepted by [`act_window`].
pub const MIN_ACT_LEN: usize = 100;

fn centered(series: &[f64]) -> Result<(Vec<f64>, f64)> {
    if series.len() < 2 {
        return Err(Error::invalid("series needs at least two values"));
    }
    if series.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("series contains non-finite values"));
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let c: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let gamma0 = c.iter().map(|v| v * v).sum::<f64>() / n;
    // spread at the level of rounding in the mean counts as constant
    let scale = series.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if !(gamma0 > (4.0 * f64::EPSILON * scale).powi(2)) {
        return Err(Error::UndefinedVariance);
    }
    Ok((c, gamma0))
}

#[inline]
fn lag_covariance(c: &[f64], lag: usize) -> f64 {
    let m = c.len() - lag;
    c[..m].iter().zip(&c[lag..]).map(|(a, b)| a * b).sum::<f64>() / m as f64
}

/// Sample autocorrelations at lags `0..=max_lag`. Lag-`i` covariances are
/// averaged over the `n - i` available products and divided by the lag-0
/// covariance.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if max_lag >= series.len() {
        return Err(Error::invalid(format!(
            "max lag {max_lag} must be below the series length {}",
            series.len()
        )));
    }
    let (c, gamma0) = centered(series)?;
    let mut rho = Vec::with_capacity(max_lag + 1);
    rho.push(1.0);
    rho.extend((1..=max_lag).map(|i| lag_covariance(&c, i) / gamma0));
    Ok(rho)
}

/// Windowed integrated autocorrelation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActEstimate {
    pub act: f64,
    /// First lag whose autocorrelation fell below the cutoff, or `n / 2`.
    pub lag: usize,
    /// Set when no lag below `n / 2` fell under the cutoff.
    pub truncated: bool,
}

/// `1 + 2 * sum(rho_i)` over lags before the first one whose
/// autocorrelation drops below 0.05. When none does before `n / 2` the sum
/// stops there and the estimate is flagged.
pub fn act_window(series: &[f64]) -> Result<ActEstimate> {
    if series.len() < MIN_ACT_LEN {
        return Err(Error::invalid(format!(
            "ACT needs at least {MIN_ACT_LEN} values, got {}",
            series.len()
        )));
    }
    let (c, gamma0) = centered(series)?;
    Ok(window_sum(|lag| lag_covariance(&c, lag) / gamma0, series.len() / 2))
}

fn window_sum(rho_at: impl Fn(usize) -> f64, half: usize) -> ActEstimate {
    let mut sum = 0.0;
    for lag in 1..half {
        let rho = rho_at(lag);
        if rho < ACT_CUTOFF {
            return ActEstimate {
                act: 1.0 + 2.0 * sum,
                lag,
                truncated: false,
            };
        }
        sum += rho;
    }
    ActEstimate {
        act: 1.0 + 2.0 * sum,
        lag: half,
        truncated: true,
    }
}

/// Effective sample size `n / act`.
pub fn ess(n: usize, act: f64) -> f64 {
    n as f64 / act
}

/// ACT scaled by the number of target evaluations per iteration.
pub fn cpu_adjusted_act(act: f64, evals_per_iteration: f64) -> Result<f64> {
    if !(evals_per_iteration >= 1.0) {
        return Err(Error::invalid("evaluations per iteration must be at least 1"));
    }
    Ok(act * evals_per_iteration)
}
