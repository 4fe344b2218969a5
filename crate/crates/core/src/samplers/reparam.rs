use crate::error::{Error, Result};
use crate::mmpp::{canonicalize, from_reparam, log_jacobian, to_reparam, LogDensity, ParamVector, ReparamPoint};

use super::chain::{Algorithm, ChainOutput, RunConfig};
use super::rwm::{component_sweep, Component};
use super::transform::Transform;
use super::Target;

/// Walk coordinates of the reparameterized sweep: multiplicative for
/// `psi_bar`, `q` and `alpha`, additive for `beta`.
pub const REPARAM_TRANSFORMS: [Transform; 4] = [Transform::Log, Transform::Log, Transform::Log, Transform::Identity];

/// Jump law for the signed coordinate `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaFamily {
    Gaussian,
    Cauchy,
}

/// A two-state target expressed in `(psi_bar, q, alpha, beta)`, including
/// the Jacobian of the map back to the rates. Recorded states and
/// log-posterior values are those of the original parameters.
pub struct ReparamTarget<T> {
    inner: T,
}

impl<T: Target> ReparamTarget<T> {
    pub fn new(inner: T) -> Result<Self> {
        if inner.dim() != 4 {
            return Err(Error::invalid("the reparameterization needs a two-state target"));
        }
        Ok(Self { inner })
    }

    pub fn inner(&self) -> &T {
        &self.inner
    }

    fn original(p: &[f64]) -> Option<(ReparamPoint, ParamVector)> {
        let point = ReparamPoint::from_slice(p).ok()?;
        from_reparam(&point).ok().map(|theta| (point, theta))
    }
}

impl<T: Target> Target for ReparamTarget<T> {
    fn dim(&self) -> usize {
        4
    }

    fn log_density(&self, p: &[f64]) -> LogDensity {
        let (point, theta) = Self::original(p)?;
        Some(self.inner.log_density(theta.as_slice())? + log_jacobian(&point))
    }

    fn names(&self) -> Vec<String> {
        self.inner.names()
    }

    fn record(&self, p: &[f64]) -> Vec<f64> {
        match Self::original(p) {
            Some((_, theta)) => self.inner.record(theta.as_slice()),
            None => p.to_vec(),
        }
    }

    fn record_logpost(&self, p: &[f64], lp: f64) -> f64 {
        match ReparamPoint::from_slice(p) {
            Ok(point) => lp - log_jacobian(&point),
            Err(_) => lp,
        }
    }
}

/// Within-Gibbs sweep over `(psi_bar, q, alpha, beta)` for a two-state
/// target: Gaussian multiplicative updates for the three positive
/// coordinates, then an additive Gaussian or Cauchy update for `beta`.
/// `scales` are in walk coordinates; `config.initial` holds the original
/// rates.
pub fn mwg_reparam_run<T: Target>(target: &T, scales: &[f64], beta: BetaFamily, config: &RunConfig) -> Result<ChainOutput> {
    if scales.len() != 4 {
        return Err(Error::invalid("the reparameterized sweep takes four scales"));
    }
    let wrapped = ReparamTarget::new(target)?;
    let theta = canonicalize(&ParamVector(config.initial.clone()))?;
    let start = to_reparam(&theta)?;
    let mut config = config.clone();
    config.initial = start.to_array().to_vec();
    if !matches!(config.algorithm, Algorithm::MwGRep | Algorithm::MwGRepCau) {
        config.algorithm = match beta {
            BetaFamily::Gaussian => Algorithm::MwGRep,
            BetaFamily::Cauchy => Algorithm::MwGRepCau,
        };
    }
    let mut components: Vec<Component> = scales.iter().map(|&s| Component::gaussian(s)).collect();
    if beta == BetaFamily::Cauchy {
        components[3] = Component::cauchy(scales[3]);
    }
    component_sweep(&wrapped, &REPARAM_TRANSFORMS, &components, &config)
}
