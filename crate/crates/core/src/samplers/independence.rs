use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math::SquareMatrix;

use super::chain::{BlockStats, ChainOutput, Recorder, RunConfig, Walker};
use super::proposal::{sample_shaped_student_t, ShapeEstimate};
use super::Target;

const DOF: f64 = 5.0;

/// Log kernel of a multivariate Student-t with scale matrix
/// `lambda^2 L L'`, at offset `z` from its center. Normalizing constants
/// are dropped.
pub fn student_t_log_kernel(z: &[f64], factor: &SquareMatrix, lambda: f64, dof: f64) -> f64 {
    // forward substitution for L w = z / lambda
    let d = z.len();
    let mut w = vec![0.0; d];
    for i in 0..d {
        let mut s = z[i] / lambda;
        for (j, wj) in w.iter().enumerate().take(i) {
            s -= factor.get(i, j) * wj;
        }
        w[i] = s / factor.get(i, i);
    }
    let q: f64 = w.iter().map(|v| v * v).sum();
    -0.5 * (dof + d as f64) * (q / dof).ln_1p()
}

/// Independence sampler with a Student-t (5 degrees of freedom) proposal
/// centered at the shape estimate's mean with scale matrix
/// `scale^2 * covariance`, in the shape estimate's walk coordinates.
pub fn independence_sampler_run<T: Target + ?Sized>(
    target: &T,
    shape: &ShapeEstimate,
    scale: f64,
    config: &RunConfig,
) -> Result<ChainOutput> {
    let d = target.dim();
    config.check_dim(d)?;
    if shape.dim() != d {
        return Err(Error::invalid("shape estimate dimension does not match the target"));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::invalid("independence proposal scale must be positive"));
    }
    let l = &shape.factor;
    let center = &shape.mean;
    let log_q = |y: &[f64]| {
        let z: Vec<f64> = y.iter().zip(center).map(|(a, c)| a - c).collect();
        student_t_log_kernel(&z, l, scale, DOF)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut walker = Walker::new(target, vec![shape.transform; d], &config.initial)?;
    let mut rec = Recorder::new(target, config, vec![BlockStats::new("block")]);
    let mut log_q_current = log_q(&walker.y);
    for _ in 0..config.n_iterations {
        let jump = sample_shaped_student_t(l, scale, DOF, &mut rng);
        let y_new: Vec<f64> = center.iter().zip(&jump).map(|(c, j)| c + j).collect();
        let log_q_new = log_q(&y_new);
        let accepted = walker.step_with(y_new, |_| log_q_current - log_q_new, &mut rng);
        if accepted {
            log_q_current = log_q_new;
        }
        rec.blocks_mut()[0].count(accepted);
        rec.push(&walker, u32::from(accepted));
    }
    Ok(rec.finish(&walker, None))
}
