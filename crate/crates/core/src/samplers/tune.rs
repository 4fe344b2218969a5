//! Pilot-run tuning of proposal scales.
//!
//! Bisection assumes acceptance decreases as the scale grows, which holds
//! for random walks on unimodal targets.

use crate::diagnostics::act_window;
use crate::error::{Error, Result};

use super::chain::{ChainOutput, RunConfig};
use super::independence::independence_sampler_run;
use super::proposal::{ProposalSpec, ShapeEstimate};
use super::rwm::{component_sweep, rwm_block, Component};
use super::transform::Transform;
use super::Target;

/// Pilot runs always allowed to a tuner.
pub const MIN_BUDGET: usize = 10;

/// Sampler whose single scale is tuned.
#[derive(Debug, Clone)]
pub enum TuneKind {
    /// Block random walk; the proposal's scale is the starting point.
    Block(ProposalSpec),
    /// Independence sampler with this shape, starting from scale 1.
    Independence(ShapeEstimate),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TuneMode {
    /// Bisect on `log(scale)` until the pilot acceptance lies in `[lo, hi]`.
    Acceptance { lo: f64, hi: f64 },
    /// Pick the grid scale whose pilot has the smallest mean ACT.
    ActGrid(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub scale: f64,
    /// Acceptance rate of the pilot at `scale`.
    pub acceptance: f64,
    pub pilots: usize,
    /// Whether the acceptance window was reached (always true in grid mode).
    pub converged: bool,
}

/// Per-component result of [`tune_component_scales`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTuneResult {
    pub scales: Vec<f64>,
    pub acceptance: Vec<f64>,
    pub pilots: usize,
    pub converged: bool,
}

pub(crate) fn pilot_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x5EED + k as u64)
}

fn pilot_config(config: &RunConfig, iterations: usize, k: usize) -> Result<RunConfig> {
    if iterations < 2 {
        return Err(Error::invalid("pilot runs need at least two iterations"));
    }
    let mut pilot = config.clone().with_seed(pilot_seed(config.seed, k));
    pilot.n_iterations = iterations;
    pilot.burn_in = 0;
    Ok(pilot)
}

fn check_window(lo: f64, hi: f64) -> Result<()> {
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return Err(Error::invalid(format!("acceptance window [{lo}, {hi}] must lie inside (0, 1)")));
    }
    Ok(())
}

fn mean_act(out: &ChainOutput) -> f64 {
    let acts: Vec<f64> = (0..out.dim)
        .map(|j| act_window(&out.column(j)).map_or(f64::INFINITY, |a| a.act))
        .collect();
    acts.iter().sum::<f64>() / acts.len() as f64
}

/// Bracketing bisection on `log(scale)` for one or more independent scales.
struct Bisection {
    log_scale: f64,
    too_small: Option<f64>,
    too_large: Option<f64>,
}

impl Bisection {
    const EXPAND: f64 = 1.0986122886681098; // ln 3

    fn new(scale: f64) -> Self {
        Self {
            log_scale: scale.ln(),
            too_small: None,
            too_large: None,
        }
    }

    fn scale(&self) -> f64 {
        self.log_scale.exp()
    }

    /// Records a pilot acceptance; returns true when it is inside the window.
    fn update(&mut self, acceptance: f64, lo: f64, hi: f64) -> bool {
        if (lo..=hi).contains(&acceptance) {
            return true;
        }
        if acceptance > hi {
            self.too_small = Some(self.log_scale);
        } else {
            self.too_large = Some(self.log_scale);
        }
        self.log_scale = match (self.too_small, self.too_large) {
            (Some(a), Some(b)) => 0.5 * (a + b),
            (Some(a), None) => a + Self::EXPAND,
            (None, Some(b)) => b - Self::EXPAND,
            (None, None) => unreachable!(),
        };
        false
    }
}

/// Tunes the scale of a block sampler with pilot chains of
/// `pilot_iterations` started from `config.initial`.
///
/// In acceptance mode the returned scale is that of the last pilot run,
/// whether or not the window was reached within `budget` pilots.
pub fn tune_scale<T: Target + ?Sized>(
    target: &T,
    kind: &TuneKind,
    mode: &TuneMode,
    config: &RunConfig,
    pilot_iterations: usize,
    budget: usize,
) -> Result<TuneResult> {
    if budget < MIN_BUDGET {
        return Err(Error::invalid(format!("tuning budget must be at least {MIN_BUDGET} pilots")));
    }
    let run = |scale: f64, k: usize| -> Result<ChainOutput> {
        let pilot = pilot_config(config, pilot_iterations, k)?;
        match kind {
            TuneKind::Block(spec) => rwm_block(target, &spec.with_scale(scale)?, &pilot),
            TuneKind::Independence(shape) => independence_sampler_run(target, shape, scale, &pilot),
        }
    };
    match mode {
        TuneMode::Acceptance { lo, hi } => {
            check_window(*lo, *hi)?;
            let start = match kind {
                TuneKind::Block(spec) => spec.scale(),
                TuneKind::Independence(_) => 1.0,
            };
            let mut bisect = Bisection::new(start);
            let mut last = (start, 0.0);
            for k in 0..budget {
                let scale = bisect.scale();
                let acceptance = run(scale, k)?.acceptance_rate();
                last = (scale, acceptance);
                if bisect.update(acceptance, *lo, *hi) {
                    return Ok(TuneResult {
                        scale,
                        acceptance,
                        pilots: k + 1,
                        converged: true,
                    });
                }
            }
            Ok(TuneResult {
                scale: last.0,
                acceptance: last.1,
                pilots: budget,
                converged: false,
            })
        }
        TuneMode::ActGrid(grid) => {
            if grid.is_empty() || grid.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
                return Err(Error::invalid("scale grid must be non-empty and positive"));
            }
            let mut best: Option<(f64, f64, f64)> = None;
            for (k, &scale) in grid.iter().enumerate() {
                let out = run(scale, k)?;
                let act = mean_act(&out);
                if best.is_none_or(|(_, b, _)| act < b) {
                    best = Some((scale, act, out.acceptance_rate()));
                }
            }
            let (scale, _, acceptance) = best.expect("grid is non-empty");
            Ok(TuneResult {
                scale,
                acceptance,
                pilots: grid.len(),
                converged: true,
            })
        }
    }
}

/// Tunes per-component Gaussian scales of a within-Gibbs sweep in the walk
/// coordinates `transforms`, bisecting every component at once from shared
/// pilot sweeps until each component's acceptance is in `[lo, hi]`.
pub fn tune_component_scales<T: Target + ?Sized>(
    target: &T,
    transforms: &[Transform],
    start: &[f64],
    (lo, hi): (f64, f64),
    config: &RunConfig,
    pilot_iterations: usize,
    budget: usize,
) -> Result<ComponentTuneResult> {
    check_window(lo, hi)?;
    if budget < MIN_BUDGET {
        return Err(Error::invalid(format!("tuning budget must be at least {MIN_BUDGET} pilots")));
    }
    if start.len() != target.dim() {
        return Err(Error::invalid("one starting scale per component is required"));
    }
    let mut bisect: Vec<Bisection> = start.iter().map(|&s| Bisection::new(s)).collect();
    let mut done = vec![false; start.len()];
    let mut scales = start.to_vec();
    let mut acceptance = vec![0.0; start.len()];
    for k in 0..budget {
        scales = bisect.iter().map(Bisection::scale).collect();
        let components: Vec<Component> = scales.iter().map(|&s| Component::gaussian(s)).collect();
        let out = component_sweep(target, transforms, &components, &pilot_config(config, pilot_iterations, k)?)?;
        for (j, b) in bisect.iter_mut().enumerate() {
            acceptance[j] = out.blocks[j].rate();
            done[j] = b.update(acceptance[j], lo, hi);
        }
        if done.iter().all(|&d| d) {
            return Ok(ComponentTuneResult {
                scales,
                acceptance,
                pilots: k + 1,
                converged: true,
            });
        }
    }
    Ok(ComponentTuneResult {
        scales,
        acceptance,
        pilots: budget,
        converged: false,
    })
}

/// Picks the scale of a Cauchy jump for component `k` of a within-Gibbs
/// sweep from `grid` by the smallest mean ACT of pilot sweeps. The other
/// components keep Gaussian jumps with scales `base`.
pub fn tune_cauchy_component<T: Target + ?Sized>(
    target: &T,
    transforms: &[Transform],
    base: &[f64],
    k: usize,
    grid: &[f64],
    config: &RunConfig,
    pilot_iterations: usize,
) -> Result<TuneResult> {
    if k >= base.len() || grid.is_empty() || grid.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::invalid("component index and a positive scale grid are required"));
    }
    let mut best: Option<(f64, f64, f64)> = None;
    for (i, &scale) in grid.iter().enumerate() {
        let mut components: Vec<Component> = base.iter().map(|&s| Component::gaussian(s)).collect();
        components[k] = Component::cauchy(scale);
        let out = component_sweep(target, transforms, &components, &pilot_config(config, pilot_iterations, i)?)?;
        let act = mean_act(&out);
        if best.is_none_or(|(_, b, _)| act < b) {
            best = Some((scale, act, out.blocks[k].rate()));
        }
    }
    let (scale, _, acceptance) = best.expect("grid is non-empty");
    Ok(TuneResult {
        scale,
        acceptance,
        pilots: grid.len(),
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{Algorithm, FnTarget};

    #[test]
    fn bisection_brackets_and_halves() {
        let mut b = Bisection::new(1.0);
        assert!(!b.update(0.9, 0.4, 0.5));
        assert!((b.scale() - 3.0).abs() < 1e-12);
        assert!(!b.update(0.1, 0.4, 0.5));
        assert!((b.scale() - 3.0f64.sqrt()).abs() < 1e-12);
        assert!(b.update(0.45, 0.4, 0.5));
    }

    #[test]
    fn gaussian_window_gives_textbook_scale() {
        let t = FnTarget::new(1, |x: &[f64]| Some(-0.5 * x[0] * x[0]));
        let config = RunConfig::new(Algorithm::Blk, 2000, 0, 31, vec![0.0]).unwrap();
        let kind = TuneKind::Block(ProposalSpec::spherical(0.5).unwrap());
        let res = tune_scale(&t, &kind, &TuneMode::Acceptance { lo: 0.40, hi: 0.47 }, &config, 2000, 10).unwrap();
        assert!(res.converged);
        assert!((1.8..=3.2).contains(&res.scale), "{res:?}");
    }

    #[test]
    fn budget_and_window_validated() {
        let t = FnTarget::new(1, |x: &[f64]| Some(-0.5 * x[0] * x[0]));
        let config = RunConfig::new(Algorithm::Blk, 2000, 0, 31, vec![0.0]).unwrap();
        let kind = TuneKind::Block(ProposalSpec::spherical(0.5).unwrap());
        let mode = TuneMode::Acceptance { lo: 0.40, hi: 0.47 };
        assert!(tune_scale(&t, &kind, &mode, &config, 2000, 9).is_err());
        let bad = TuneMode::Acceptance { lo: 0.5, hi: 0.4 };
        assert!(tune_scale(&t, &kind, &bad, &config, 2000, 10).is_err());
    }
}
