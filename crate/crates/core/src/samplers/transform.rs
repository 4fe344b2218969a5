use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Coordinate system in which a random walk moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transform {
    /// Additive walk on the original parameters.
    #[default]
    Identity,
    /// Walk on `log(x)`; a multiplicative walk in the original space.
    Log,
    /// Walk on `sign(x) log(1 + |x|)`.
    SignedLog,
}

impl Transform {
    /// Original value to walk coordinate. `None` when `x` is outside the
    /// transform's domain.
    #[inline]
    pub fn forward(self, x: f64) -> Option<f64> {
        match self {
            Transform::Identity => Some(x),
            Transform::Log => (x > 0.0).then(|| x.ln()),
            Transform::SignedLog => Some(x.signum() * x.abs().ln_1p()),
        }
    }

    #[inline]
    pub fn inverse(self, y: f64) -> f64 {
        match self {
            Transform::Identity => y,
            Transform::Log => y.exp(),
            Transform::SignedLog => y.signum() * y.abs().exp_m1(),
        }
    }

    /// `log |dx/dy|` at walk coordinate `y`.
    #[inline]
    pub fn log_jacobian(self, y: f64) -> f64 {
        match self {
            Transform::Identity => 0.0,
            Transform::Log => y,
            Transform::SignedLog => y.abs(),
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transform::Identity => "none",
            Transform::Log => "log",
            Transform::SignedLog => "signed-log",
        })
    }
}

impl FromStr for Transform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "none" | "identity" => Ok(Transform::Identity),
            "log" => Ok(Transform::Log),
            "signed-log" => Ok(Transform::SignedLog),
            other => Err(Error::invalid(format!("unknown transform `{other}`"))),
        }
    }
}
