use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math::SquareMatrix;

use super::chain::{AdaptTrace, BlockStats, ChainOutput, Recorder, RunConfig, Walker};
use super::proposal::{shaped_gaussian, standard_normals};
use super::transform::Transform;
use super::Target;

/// Running mean and covariance (divisor `n - 1`) of the walk coordinates.
struct RunningMoments {
    n: usize,
    mean: Vec<f64>,
    // lower triangle of the sum of centered cross-products
    cross: SquareMatrix,
}

impl RunningMoments {
    fn new(first: &[f64]) -> Self {
        Self {
            n: 1,
            mean: first.to_vec(),
            cross: SquareMatrix::zeros(first.len()),
        }
    }

    fn push(&mut self, x: &[f64]) {
        self.n += 1;
        let n = self.n as f64;
        let delta: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        for (m, dl) in self.mean.iter_mut().zip(&delta) {
            *m += dl / n;
        }
        for i in 0..x.len() {
            let after_i = x[i] - self.mean[i];
            for j in 0..=i {
                let v = self.cross.get(i, j) + after_i * delta[j];
                self.cross.set(i, j, v);
            }
        }
    }

    fn covariance(&self) -> SquareMatrix {
        let d = self.mean.len();
        let mut cov = SquareMatrix::zeros(d);
        if self.n < 2 {
            return cov;
        }
        let denom = (self.n - 1) as f64;
        for i in 0..d {
            for j in 0..=i {
                let v = self.cross.get(i, j) / denom;
                cov.set(i, j, v);
                cov.set(j, i, v);
            }
        }
        cov
    }
}

/// Adaptive block random walk on the log parameters.
///
/// Each proposal comes from `N(0, m^2 S)` with probability `1 - delta_mix`,
/// where `S` is the covariance of the log samples so far, and otherwise from
/// `N(0, lambda0^2 / d I)`. The adaptive component is unavailable until
/// `gate` jumps have been accepted, and on any iteration where `S` has no
/// Cholesky factor. After an adaptive proposal at iteration `i`, `m` drops
/// by `step / sqrt(i)` on rejection and rises by `c * step / sqrt(i)` on
/// acceptance.
pub fn adaptive_multiplicative_run<T: Target + ?Sized>(target: &T, config: &RunConfig) -> Result<ChainOutput> {
    let d = target.dim();
    config.check_dim(d)?;
    let adapt = &config.adapt;
    let m0 = adapt.initial_scale(d);
    let step = adapt.step_size(d);
    let m_floor = m0 * 1e-6;
    let fixed_sd = adapt.lambda0 / (d as f64).sqrt();
    let frozen = match &adapt.frozen_covariance {
        Some(cov) if cov.dim() != d => return Err(Error::invalid("frozen covariance has the wrong dimension")),
        Some(cov) => Some(
            cov.cholesky()
                .ok_or_else(|| Error::invalid("frozen covariance is not positive definite"))?,
        ),
        None => None,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut walker = Walker::new(target, vec![Transform::Log; d], &config.initial)?;
    let blocks = vec![BlockStats::new("adaptive"), BlockStats::new("nonadaptive")];
    let mut rec = Recorder::new(target, config, blocks);
    let mut moments = RunningMoments::new(&walker.y);
    let mut trace = AdaptTrace {
        m: Vec::with_capacity(config.n_iterations),
        adaptive: Vec::with_capacity(config.n_iterations),
        snapshots: Vec::new(),
    };
    let mut m = m0;
    let mut n_accepted = 0usize;

    for i in 1..=config.n_iterations {
        let u_branch: f64 = rng.random();
        let factor = if n_accepted >= adapt.gate && u_branch < 1.0 - adapt.delta_mix {
            match &frozen {
                Some(l) => Some(l.clone()),
                None => moments.covariance().cholesky(),
            }
        } else {
            None
        };
        let is_adaptive = factor.is_some();
        let jump = match &factor {
            Some(l) => shaped_gaussian(l, m, &mut rng),
            None => standard_normals(d, &mut rng).into_iter().map(|z| fixed_sd * z).collect(),
        };
        let y_new: Vec<f64> = walker.y.iter().zip(&jump).map(|(y, j)| y + j).collect();
        let accepted = walker.step(y_new, &mut rng);

        if is_adaptive {
            let size = step / (i as f64).sqrt();
            m = if accepted {
                m + adapt.accept_multiplier * size
            } else {
                (m - size).max(m_floor)
            };
        }
        n_accepted += usize::from(accepted);
        rec.blocks_mut()[usize::from(!is_adaptive)].count(accepted);
        if frozen.is_none() {
            moments.push(&walker.y);
        }
        trace.m.push(m);
        trace.adaptive.push(is_adaptive);
        if i % adapt.snapshot_every == 0 {
            let snap = match &adapt.frozen_covariance {
                Some(cov) => cov.clone(),
                None => moments.covariance(),
            };
            trace.snapshots.push((i, snap));
        }
        rec.push(&walker, u32::from(accepted));
    }
    Ok(rec.finish(&walker, Some(trace)))
}

/// Non-adaptive block random walk on the log parameters with the two-part
/// mixture proposal: `N(0, m^2 L L')` with probability `1 - delta_mix`,
/// otherwise `N(0, lambda0^2 / d I)`.
pub fn rwm_mixture<T: Target + ?Sized>(
    target: &T,
    m: f64,
    covariance: &SquareMatrix,
    lambda0: f64,
    delta_mix: f64,
    config: &RunConfig,
) -> Result<ChainOutput> {
    let d = target.dim();
    config.check_dim(d)?;
    let l = covariance
        .cholesky()
        .filter(|l| l.dim() == d)
        .ok_or_else(|| Error::invalid("mixture covariance must be positive definite with the target's dimension"))?;
    let fixed_sd = lambda0 / (d as f64).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut walker = Walker::new(target, vec![Transform::Log; d], &config.initial)?;
    let blocks = vec![BlockStats::new("adaptive"), BlockStats::new("nonadaptive")];
    let mut rec = Recorder::new(target, config, blocks);
    for _ in 0..config.n_iterations {
        let u_branch: f64 = rng.random();
        let shaped = u_branch < 1.0 - delta_mix;
        let jump = if shaped {
            shaped_gaussian(&l, m, &mut rng)
        } else {
            standard_normals(d, &mut rng).into_iter().map(|z| fixed_sd * z).collect()
        };
        let y_new: Vec<f64> = walker.y.iter().zip(&jump).map(|(y, j)| y + j).collect();
        let accepted = walker.step(y_new, &mut rng);
        rec.blocks_mut()[usize::from(!shaped)].count(accepted);
        rec.push(&walker, u32::from(accepted));
    }
    Ok(rec.finish(&walker, None))
}
