//! Small dense linear algebra and analytic efficiency curves.

mod curves;
mod expm;
pub(crate) mod fixed;
mod matrix;

pub use curves::{diffusion_curve, diffusion_speed, mwg_efficiency_ratio, normal_cdf, EfficiencyCurvePoint};
pub use expm::{check_generator, is_irreducible, mat_exp, stationary_dist};
pub use matrix::{ProbVector, SquareMatrix};
