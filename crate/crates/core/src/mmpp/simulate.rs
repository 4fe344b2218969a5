use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::math::{is_irreducible, stationary_dist};

use super::events::{EventData, HiddenTrajectory};
use super::params::MmppParams;

/// Simulated events together with the hidden path that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub data: EventData,
    pub trajectory: HiddenTrajectory,
}

/// Simulates an MMPP on `(0, t_obs]`.
///
/// The hidden chain starts from its stationary distribution and moves by
/// exponential holding times and embedded-chain jumps; within each sojourn
/// events arrive as a Poisson process at that state's intensity.
pub fn simulate(params: &MmppParams, t_obs: f64, seed: u64) -> Result<Simulation> {
    if !(t_obs > 0.0 && t_obs.is_finite()) {
        return Err(Error::invalid(format!("observation time must be positive, got {t_obs}")));
    }
    let d = params.n_states();
    let q = params.generator();
    if d > 1 && !is_irreducible(q) {
        return Err(Error::invalid("generator must be irreducible"));
    }
    let nu = stationary_dist(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut state = draw_index(&mut rng, nu.as_slice());
    let mut now = 0.0;
    let mut events = Vec::new();
    let mut path = vec![(0.0, state)];
    while now < t_obs {
        let exit_rate = -q.get(state, state);
        let sojourn_end = if exit_rate > 0.0 {
            now + exp1(&mut rng) / exit_rate
        } else {
            f64::INFINITY
        };
        let stop = sojourn_end.min(t_obs);
        let intensity = params.psi()[state];
        if intensity > 0.0 {
            let mut t = now;
            loop {
                t += exp1(&mut rng) / intensity;
                if t > stop {
                    break;
                }
                // guard against duplicate times from rounding
                if events.last().is_none_or(|&last| t > last) {
                    events.push(t);
                }
            }
        }
        if sojourn_end >= t_obs {
            break;
        }
        now = sojourn_end;
        let jump_weights: Vec<f64> = (0..d)
            .map(|j| if j == state { 0.0 } else { q.get(state, j) })
            .collect();
        state = draw_index(&mut rng, &jump_weights);
        path.push((now, state));
    }
    Ok(Simulation {
        data: EventData::new(t_obs, events)?,
        trajectory: HiddenTrajectory(path),
    })
}

fn exp1<R: Rng>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

fn draw_index<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    // fall through only on round-off; pick the last state with positive weight
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}
