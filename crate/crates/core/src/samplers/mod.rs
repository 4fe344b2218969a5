//! Metropolis-type samplers over an abstract log-density target.
//!
//! Every chain is driven by a seeded `ChaCha8Rng`, so identical
//! configurations give bit-identical output. Acceptance decisions compare
//! `log U` against the log-density difference (plus the Jacobian of the walk
//! coordinates when a transform is in use).

mod adaptive;
mod chain;
mod independence;
mod io;
mod proposal;
mod reparam;
mod rwm;
mod transform;
mod tune;

pub use adaptive::{adaptive_multiplicative_run, rwm_mixture};
pub use chain::{AdaptConfig, AdaptTrace, Algorithm, BlockStats, ChainOutput, RunConfig};
pub use independence::{independence_sampler_run, student_t_log_kernel};
pub use io::{chain_csv, read_chain_csv, write_adapt_csv, write_chain_csv, ChainTable};
pub use proposal::{
    sample_covariance, sample_mean, sample_shaped_cauchy, sample_shaped_student_t, shape_factor, shaped_gaussian,
    ProposalFamily, ProposalSpec, ShapeEstimate,
};
pub use reparam::{mwg_reparam_run, BetaFamily, ReparamTarget, REPARAM_TRANSFORMS};
pub use rwm::{mwg_sweep, rwm_block, rwm_multiplicative};
pub use transform::Transform;
pub use tune::{tune_cauchy_component, tune_component_scales, tune_scale, ComponentTuneResult, TuneKind, TuneMode, TuneResult, MIN_BUDGET};

use crate::error::Result;
use crate::mmpp::{canonicalize, log_posterior, param_names, EventData, LogDensity, ParamVector, PriorSpec};

/// A log-density known up to an additive constant.
///
/// `None` (or negative infinity) marks a point of zero density; samplers
/// reject such proposals outright.
pub trait Target: Sync {
    fn dim(&self) -> usize;

    fn log_density(&self, x: &[f64]) -> LogDensity;

    /// Parameter names used in output headers.
    fn names(&self) -> Vec<String> {
        (1..=self.dim()).map(|i| format!("x{i}")).collect()
    }

    /// Maps a chain state to the value recorded in the sample matrix.
    fn record(&self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }

    /// Log-posterior value recorded for state `x` whose log density is `lp`.
    fn record_logpost(&self, _x: &[f64], lp: f64) -> f64 {
        lp
    }
}

impl<T: Target + ?Sized> Target for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn log_density(&self, x: &[f64]) -> LogDensity {
        (**self).log_density(x)
    }
    fn names(&self) -> Vec<String> {
        (**self).names()
    }
    fn record(&self, x: &[f64]) -> Vec<f64> {
        (**self).record(x)
    }
    fn record_logpost(&self, x: &[f64], lp: f64) -> f64 {
        (**self).record_logpost(x, lp)
    }
}

/// Target backed by a closure.
pub struct FnTarget<F> {
    dim: usize,
    f: F,
}

impl<F> FnTarget<F>
where
    F: Fn(&[f64]) -> LogDensity + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> Target for FnTarget<F>
where
    F: Fn(&[f64]) -> LogDensity + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn log_density(&self, x: &[f64]) -> LogDensity {
        (self.f)(x)
    }
}

/// MMPP posterior under independent exponential priors. Recorded samples
/// are relabeled so that intensities are non-decreasing.
#[derive(Debug, Clone)]
pub struct MmppPosterior {
    data: EventData,
    prior: PriorSpec,
    n_states: usize,
}

impl MmppPosterior {
    pub fn new(data: EventData, prior: PriorSpec) -> Result<Self> {
        let n_states = ParamVector(prior.means().to_vec()).n_states()?;
        Ok(Self { data, prior, n_states })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn data(&self) -> &EventData {
        &self.data
    }

    pub fn prior(&self) -> &PriorSpec {
        &self.prior
    }
}

impl Target for MmppPosterior {
    fn dim(&self) -> usize {
        self.prior.len()
    }

    fn log_density(&self, x: &[f64]) -> LogDensity {
        log_posterior(x, &self.data, &self.prior).ok().flatten()
    }

    fn names(&self) -> Vec<String> {
        param_names(self.n_states)
    }

    fn record(&self, x: &[f64]) -> Vec<f64> {
        canonicalize(&ParamVector(x.to_vec()))
            .map(ParamVector::into_inner)
            .unwrap_or_else(|_| x.to_vec())
    }
}
