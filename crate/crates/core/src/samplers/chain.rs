use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::math::SquareMatrix;

use super::transform::Transform;
use super::Target;

/// Sampler identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Block random walk with spherical Gaussian jumps.
    Blk,
    /// Gaussian random walk within Gibbs, one parameter at a time.
    MwG,
    /// Block random walk shaped by an estimated covariance.
    BlkShp,
    /// Shaped block walk with multivariate Cauchy jumps.
    BlkShpCau,
    /// Shaped block walk on the log parameters.
    BlkShpMul,
    /// Adaptive block walk on the log parameters.
    BlkAdpMul,
    /// Adaptive variant with a later gate and a lower equilibrium acceptance.
    BlkAdpMulB,
    /// Within-Gibbs walk on the two-state reparameterization.
    MwGRep,
    /// As `MwGRep` with Cauchy jumps for the signed coordinate.
    MwGRepCau,
    /// Independence sampler with a shaped Student-t proposal.
    IndShp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 10] = [
        Algorithm::Blk,
        Algorithm::MwG,
        Algorithm::BlkShp,
        Algorithm::BlkShpCau,
        Algorithm::BlkShpMul,
        Algorithm::BlkAdpMul,
        Algorithm::BlkAdpMulB,
        Algorithm::MwGRep,
        Algorithm::MwGRepCau,
        Algorithm::IndShp,
    ];

    /// Whether the algorithm needs a covariance estimated from an earlier run.
    pub fn needs_shape(self) -> bool {
        matches!(
            self,
            Algorithm::BlkShp | Algorithm::BlkShpCau | Algorithm::BlkShpMul | Algorithm::IndShp
        )
    }

    /// Whether each iteration is a sweep of single-parameter updates.
    pub fn is_componentwise(self) -> bool {
        matches!(self, Algorithm::MwG | Algorithm::MwGRep | Algorithm::MwGRepCau)
    }

    pub fn is_adaptive(self) -> bool {
        matches!(self, Algorithm::BlkAdpMul | Algorithm::BlkAdpMulB)
    }

    /// Coordinates in which the walk (and any shape estimate) lives.
    pub fn default_transform(self) -> Transform {
        match self {
            Algorithm::BlkShpMul | Algorithm::BlkAdpMul | Algorithm::BlkAdpMulB => Transform::Log,
            _ => Transform::Identity,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Blk => "Blk",
            Algorithm::MwG => "MwG",
            Algorithm::BlkShp => "BlkShp",
            Algorithm::BlkShpCau => "BlkShpCau",
            Algorithm::BlkShpMul => "BlkShpMul",
            Algorithm::BlkAdpMul => "BlkAdpMul",
            Algorithm::BlkAdpMulB => "BlkAdpMulB",
            Algorithm::MwGRep => "MwGRep",
            Algorithm::MwGRepCau => "MwGRepCau",
            Algorithm::IndShp => "IndShp",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown algorithm `{s}`")))
    }
}

/// Constants of the adaptive block sampler.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptConfig {
    /// Probability of the fixed, non-adaptive mixture component.
    pub delta_mix: f64,
    /// Initial overall scaling; `None` means `2.38 / sqrt(d)`.
    pub m0: Option<f64>,
    /// Adaptation step; `None` means `m0 / 100`.
    pub step: Option<f64>,
    /// Accepted jumps required before adaptive proposals are allowed.
    pub gate: usize,
    /// Multiplier on the step after an accepted adaptive proposal.
    pub accept_multiplier: f64,
    /// Scale of the non-adaptive component, whose covariance is `lambda0^2 / d * I`.
    pub lambda0: f64,
    /// Iterations between stored covariance snapshots.
    pub snapshot_every: usize,
    /// Covariance held fixed in place of the running estimate.
    pub frozen_covariance: Option<SquareMatrix>,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        Self {
            delta_mix: 0.05,
            m0: None,
            step: None,
            gate: 10,
            accept_multiplier: 2.3,
            lambda0: 0.5,
            snapshot_every: 100,
            frozen_covariance: None,
        }
    }
}

impl AdaptConfig {
    /// Late-gate variant targeting an acceptance rate near 0.25.
    pub fn variant_b() -> Self {
        Self {
            gate: 100,
            accept_multiplier: 3.0,
            ..Self::default()
        }
    }

    pub fn for_algorithm(algorithm: Algorithm) -> Self {
        if algorithm == Algorithm::BlkAdpMulB {
            Self::variant_b()
        } else {
            Self::default()
        }
    }

    pub fn initial_scale(&self, dim: usize) -> f64 {
        self.m0.unwrap_or(2.38 / (dim as f64).sqrt())
    }

    pub fn step_size(&self, dim: usize) -> f64 {
        self.step.unwrap_or(self.initial_scale(dim) / 100.0)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.delta_mix) {
            return Err(Error::invalid("mixture weight must lie in [0, 1]"));
        }
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return Err(Error::invalid("lambda0 must be positive"));
        }
        if self.m0.is_some_and(|m| !(m > 0.0 && m.is_finite())) {
            return Err(Error::invalid("m0 must be positive"));
        }
        if self.step.is_some_and(|s| !(s >= 0.0 && s.is_finite())) {
            return Err(Error::invalid("adaptation step must be non-negative"));
        }
        if !(self.accept_multiplier > 0.0) || self.snapshot_every == 0 {
            return Err(Error::invalid("accept multiplier and snapshot interval must be positive"));
        }
        Ok(())
    }
}

/// Settings for one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub n_iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub transform: Transform,
    pub adapt: AdaptConfig,
    /// Starting state in the original parameter space.
    pub initial: Vec<f64>,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, n_iterations: usize, burn_in: usize, seed: u64, initial: Vec<f64>) -> Result<Self> {
        let config = Self {
            algorithm,
            n_iterations,
            burn_in,
            seed,
            transform: algorithm.default_transform(),
            adapt: AdaptConfig::for_algorithm(algorithm),
            initial,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_transform(mut self, transform: Transform) -> Self {
        self.transform = transform;
        self
    }

    pub fn with_adapt(mut self, adapt: AdaptConfig) -> Self {
        self.adapt = adapt;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_iterations <= self.burn_in {
            return Err(Error::invalid(format!(
                "iterations ({}) must exceed burn-in ({})",
                self.n_iterations, self.burn_in
            )));
        }
        if self.initial.is_empty() || self.initial.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("initial state must be non-empty and finite"));
        }
        self.adapt.validate()
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        self.validate()?;
        if self.initial.len() != dim {
            return Err(Error::invalid(format!(
                "initial state has {} components but the target has {dim}",
                self.initial.len()
            )));
        }
        Ok(())
    }
}

/// Proposal and acceptance counts for one update block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStats {
    pub name: String,
    pub proposed: u64,
    pub accepted: u64,
}

impl BlockStats {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            proposed: 0,
            accepted: 0,
        }
    }

    pub fn rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    pub(crate) fn count(&mut self, accepted: bool) {
        self.proposed += 1;
        self.accepted += u64::from(accepted);
    }
}

/// Per-iteration record of the adaptive sampler.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptTrace {
    /// Overall scaling after each iteration.
    pub m: Vec<f64>,
    /// Whether each iteration's proposal came from the adaptive component.
    pub adaptive: Vec<bool>,
    /// `(iteration, covariance)` snapshots of the running estimate.
    pub snapshots: Vec<(usize, SquareMatrix)>,
}

impl AdaptTrace {
    /// Index of the latest snapshot taken at or before 1-based iteration `iter`.
    pub fn snapshot_id(&self, iter: usize) -> Option<usize> {
        self.snapshots.partition_point(|(i, _)| *i <= iter).checked_sub(1)
    }

    /// Acceptance rate of adaptive proposals among iterations `from..` (0-based).
    pub fn adaptive_acceptance(&self, accepted_blocks: &[u32], from: usize) -> Option<f64> {
        let (mut n, mut acc) = (0u64, 0u64);
        for (flag, a) in self.adaptive.iter().zip(accepted_blocks).skip(from) {
            if *flag {
                n += 1;
                acc += u64::from(*a > 0);
            }
        }
        (n > 0).then(|| acc as f64 / n as f64)
    }
}

/// Output of one chain. Row `i` of the sample matrix is the state after
/// iteration `i + 1`, in the original parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput {
    pub algorithm: Algorithm,
    pub names: Vec<String>,
    pub dim: usize,
    pub burn_in: usize,
    pub samples: Vec<f64>,
    pub logpost: Vec<f64>,
    pub accepted_blocks: Vec<u32>,
    pub blocks: Vec<BlockStats>,
    pub adaptation: Option<AdaptTrace>,
    /// Target evaluations spent on proposals.
    pub likelihood_evals: u64,
}

impl ChainOutput {
    pub fn n_rows(&self) -> usize {
        self.logpost.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.samples[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.samples.chunks_exact(self.dim)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    /// Rows after burn-in.
    pub fn kept_rows(&self) -> Vec<Vec<f64>> {
        self.rows().skip(self.burn_in).map(<[f64]>::to_vec).collect()
    }

    pub fn kept_column(&self, j: usize) -> Vec<f64> {
        self.rows().skip(self.burn_in).map(|r| r[j]).collect()
    }

    pub fn evals_per_iteration(&self) -> f64 {
        self.likelihood_evals as f64 / self.n_rows() as f64
    }

    /// Overall acceptance rate across all blocks.
    pub fn acceptance_rate(&self) -> f64 {
        let proposed: u64 = self.blocks.iter().map(|b| b.proposed).sum();
        let accepted: u64 = self.blocks.iter().map(|b| b.accepted).sum();
        if proposed == 0 {
            0.0
        } else {
            accepted as f64 / proposed as f64
        }
    }

    /// Acceptance rate attributed to each parameter: the component rate for
    /// within-Gibbs samplers, the overall rate otherwise.
    pub fn parameter_acceptance(&self) -> Vec<f64> {
        if self.blocks.len() == self.dim && self.algorithm.is_componentwise() {
            self.blocks.iter().map(BlockStats::rate).collect()
        } else {
            vec![self.acceptance_rate(); self.dim]
        }
    }
}

/// Current state of a chain in walk coordinates, with the cached log target.
pub(crate) struct Walker<'t, T: Target + ?Sized> {
    target: &'t T,
    transforms: Vec<Transform>,
    pub y: Vec<f64>,
    pub x: Vec<f64>,
    pub lp: f64,
    log_target: f64,
    pub evals: u64,
}

impl<'t, T: Target + ?Sized> Walker<'t, T> {
    pub fn new(target: &'t T, transforms: Vec<Transform>, initial: &[f64]) -> Result<Self> {
        if transforms.len() != initial.len() || initial.len() != target.dim() {
            return Err(Error::invalid("initial state, transforms and target disagree in dimension"));
        }
        let y = initial
            .iter()
            .zip(&transforms)
            .map(|(&x, t)| t.forward(x))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::SupportViolation("initial state outside the transform domain".into()))?;
        let mut walker = Self {
            target,
            transforms,
            y: Vec::new(),
            x: Vec::new(),
            lp: 0.0,
            log_target: 0.0,
            evals: 0,
        };
        let (x, lp, lt) = walker
            .evaluate(&y)
            .ok_or_else(|| Error::SupportViolation("initial state has zero target density".into()))?;
        walker.evals = 0;
        walker.y = y;
        walker.x = x;
        walker.lp = lp;
        walker.log_target = lt;
        Ok(walker)
    }

    fn evaluate(&mut self, y: &[f64]) -> Option<(Vec<f64>, f64, f64)> {
        self.evals += 1;
        let x: Vec<f64> = y.iter().zip(&self.transforms).map(|(&v, t)| t.inverse(v)).collect();
        if x.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let lp = self.target.log_density(&x)?;
        if !lp.is_finite() {
            return None;
        }
        let jac: f64 = y.iter().zip(&self.transforms).map(|(&v, t)| t.log_jacobian(v)).sum();
        Some((x, lp, lp + jac))
    }

    /// Metropolis-Hastings step to walk coordinates `y_new`. `extra` is added
    /// to the log acceptance ratio and is a function of `y_new` only through
    /// the caller. Zero-density proposals are rejected without a uniform draw.
    pub fn step_with<R: Rng + ?Sized>(&mut self, y_new: Vec<f64>, extra: impl FnOnce(&[f64]) -> f64, rng: &mut R) -> bool {
        let Some((x, lp, lt)) = self.evaluate(&y_new) else {
            return false;
        };
        let log_ratio = lt - self.log_target + extra(&y_new);
        let u: f64 = rng.random();
        if u.ln() < log_ratio {
            self.y = y_new;
            self.x = x;
            self.lp = lp;
            self.log_target = lt;
            true
        } else {
            false
        }
    }

    pub fn step<R: Rng + ?Sized>(&mut self, y_new: Vec<f64>, rng: &mut R) -> bool {
        self.step_with(y_new, |_| 0.0, rng)
    }
}

/// Accumulates per-iteration records.
pub(crate) struct Recorder {
    out: ChainOutput,
}

impl Recorder {
    pub fn new<T: Target + ?Sized>(target: &T, config: &RunConfig, blocks: Vec<BlockStats>) -> Self {
        let dim = target.dim();
        let n = config.n_iterations;
        Self {
            out: ChainOutput {
                algorithm: config.algorithm,
                names: target.names(),
                dim,
                burn_in: config.burn_in,
                samples: Vec::with_capacity(n * dim),
                logpost: Vec::with_capacity(n),
                accepted_blocks: Vec::with_capacity(n),
                blocks,
                adaptation: None,
                likelihood_evals: 0,
            },
        }
    }

    pub fn blocks_mut(&mut self) -> &mut [BlockStats] {
        &mut self.out.blocks
    }

    pub fn push<T: Target + ?Sized>(&mut self, walker: &Walker<'_, T>, accepted: u32) {
        self.out.samples.extend(walker.target.record(&walker.x));
        self.out.logpost.push(walker.target.record_logpost(&walker.x, walker.lp));
        self.out.accepted_blocks.push(accepted);
    }

    pub fn finish<T: Target + ?Sized>(mut self, walker: &Walker<'_, T>, adaptation: Option<AdaptTrace>) -> ChainOutput {
        self.out.likelihood_evals = walker.evals;
        self.out.adaptation = adaptation;
        self.out
    }
}
