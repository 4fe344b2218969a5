//! Markov modulated Poisson process model: parameters, simulation,
//! likelihood and posterior, label canonicalization and the two-state
//! reparameterization.

mod events;
mod likelihood;
mod params;
mod reparam;
mod simulate;

pub use events::{EventData, HiddenTrajectory};
pub use likelihood::{log_likelihood, log_likelihood_from, log_posterior, LogDensity};
pub use params::{canonicalize, param_names, MmppParams, ParamVector, PriorSpec, MAX_STATES};
pub use reparam::{from_reparam, log_jacobian, to_reparam, ReparamPoint, REPARAM_NAMES};
pub use simulate::{simulate, Simulation};
