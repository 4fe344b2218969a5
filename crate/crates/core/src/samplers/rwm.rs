use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

use super::chain::{BlockStats, ChainOutput, Recorder, RunConfig, Walker};
use super::proposal::{cauchy, ProposalSpec};
use super::transform::Transform;
use super::Target;

/// Block random walk Metropolis: every iteration proposes a jump in all
/// coordinates at once from `proposal`, in the walk coordinates set by
/// `config.transform`.
pub fn rwm_block<T: Target + ?Sized>(target: &T, proposal: &ProposalSpec, config: &RunConfig) -> Result<ChainOutput> {
    let d = target.dim();
    config.check_dim(d)?;
    if proposal.family().is_componentwise() {
        return Err(Error::invalid(format!("{} is not a block proposal", proposal.family())));
    }
    if proposal.shape().is_some_and(|l| l.dim() != d) {
        return Err(Error::invalid("shape factor dimension does not match the target"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut walker = Walker::new(target, vec![config.transform; d], &config.initial)?;
    let mut rec = Recorder::new(target, config, vec![BlockStats::new("block")]);
    for _ in 0..config.n_iterations {
        let jump = proposal.draw_jump(d, &mut rng);
        let y_new: Vec<f64> = walker.y.iter().zip(&jump).map(|(y, j)| y + j).collect();
        let accepted = walker.step(y_new, &mut rng);
        rec.blocks_mut()[0].count(accepted);
        rec.push(&walker, u32::from(accepted));
    }
    Ok(rec.finish(&walker, None))
}

/// Block random walk on the logarithms of the parameters. The recorded
/// samples are in the original space.
pub fn rwm_multiplicative<T: Target + ?Sized>(
    target: &T,
    proposal: &ProposalSpec,
    config: &RunConfig,
) -> Result<ChainOutput> {
    let config = config.clone().with_transform(Transform::Log);
    rwm_block(target, proposal, &config)
}

/// Gaussian random walk within Gibbs: each iteration updates the
/// coordinates in order, one at a time.
pub fn mwg_sweep<T: Target + ?Sized>(target: &T, scales: &[f64], config: &RunConfig) -> Result<ChainOutput> {
    let d = target.dim();
    let components: Vec<Component> = scales.iter().map(|&s| Component::gaussian(s)).collect();
    component_sweep(target, &vec![config.transform; d], &components, config)
}

/// Jump law for one coordinate of a within-Gibbs sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Component {
    pub scale: f64,
    pub cauchy: bool,
}

impl Component {
    pub fn gaussian(scale: f64) -> Self {
        Self { scale, cauchy: false }
    }

    pub fn cauchy(scale: f64) -> Self {
        Self { scale, cauchy: true }
    }
}

pub(crate) fn component_sweep<T: Target + ?Sized>(
    target: &T,
    transforms: &[Transform],
    components: &[Component],
    config: &RunConfig,
) -> Result<ChainOutput> {
    let d = target.dim();
    config.check_dim(d)?;
    if components.len() != d || transforms.len() != d {
        return Err(Error::invalid(format!(
            "expected {d} component scales, got {}",
            components.len()
        )));
    }
    if components.iter().any(|c| !(c.scale > 0.0 && c.scale.is_finite())) {
        return Err(Error::invalid("component scales must be positive and finite"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut walker = Walker::new(target, transforms.to_vec(), &config.initial)?;
    let blocks = target.names().into_iter().map(BlockStats::new).collect();
    let mut rec = Recorder::new(target, config, blocks);
    for _ in 0..config.n_iterations {
        let mut accepted = 0;
        for (k, c) in components.iter().enumerate() {
            let jump = if c.cauchy {
                cauchy(c.scale, &mut rng)
            } else {
                let z: f64 = StandardNormal.sample(&mut rng);
                c.scale * z
            };
            let mut y_new = walker.y.clone();
            y_new[k] += jump;
            let ok = walker.step(y_new, &mut rng);
            rec.blocks_mut()[k].count(ok);
            accepted += u32::from(ok);
        }
        rec.push(&walker, accepted);
    }
    Ok(rec.finish(&walker, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{Algorithm, FnTarget};

    fn std_normal() -> FnTarget<impl Fn(&[f64]) -> Option<f64> + Sync> {
        FnTarget::new(1, |x: &[f64]| Some(-0.5 * x[0] * x[0]))
    }

    #[test]
    fn gaussian_optimal_scale_acceptance() {
        let config = RunConfig::new(Algorithm::Blk, 100_000, 0, 5, vec![0.0]).unwrap();
        let out = rwm_block(&std_normal(), &ProposalSpec::spherical(2.4).unwrap(), &config).unwrap();
        let rate = out.acceptance_rate();
        assert!((0.41..=0.47).contains(&rate), "rate {rate}");
        assert_eq!(out.likelihood_evals, 100_000);
    }

    #[test]
    fn mwg_counts_one_evaluation_per_component() {
        let t = FnTarget::new(4, |x: &[f64]| Some(-0.5 * x.iter().map(|v| v * v).sum::<f64>()));
        let config = RunConfig::new(Algorithm::MwG, 250, 10, 1, vec![0.0; 4]).unwrap();
        let out = mwg_sweep(&t, &[2.4; 4], &config).unwrap();
        assert_eq!(out.likelihood_evals, 1000);
        assert_eq!(out.blocks.len(), 4);
        assert!(mwg_sweep(&t, &[2.4, 0.0, 1.0, 1.0], &config).is_err());
    }

    #[test]
    fn support_violations_never_accepted() {
        let t = FnTarget::new(1, |x: &[f64]| (x[0] > 0.0).then(|| -x[0]));
        let config = RunConfig::new(Algorithm::Blk, 5000, 0, 3, vec![0.5]).unwrap();
        let out = rwm_block(&t, &ProposalSpec::spherical(3.0).unwrap(), &config).unwrap();
        assert!(out.samples.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn flat_log_target_always_accepts() {
        // density proportional to 1/x is flat in log coordinates
        let t = FnTarget::new(1, |x: &[f64]| (x[0] > 0.0).then(|| -x[0].ln()));
        let config = RunConfig::new(Algorithm::BlkShpMul, 2000, 0, 9, vec![1.0]).unwrap();
        let out = rwm_multiplicative(&t, &ProposalSpec::spherical(0.5).unwrap(), &config).unwrap();
        assert_eq!(out.blocks[0].accepted, 2000);
    }
}
