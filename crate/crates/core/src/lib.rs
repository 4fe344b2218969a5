//! Random walk Metropolis samplers for Bayesian inference on Markov
//! modulated Poisson processes, with the autocorrelation and jump-distance
//! diagnostics used to compare their efficiency.

pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod math;
pub mod mmpp;
pub mod samplers;

pub use error::{Error, Result};
