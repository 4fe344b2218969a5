use std::fmt;

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::math::SquareMatrix;

use super::chain::ChainOutput;
use super::transform::Transform;

/// Jump distribution family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProposalFamily {
    SphericalGaussian,
    ShapedGaussian,
    ShapedCauchy,
    ComponentGaussian,
    ComponentCauchy,
    ShapedStudentT5,
}

impl ProposalFamily {
    pub fn is_shaped(self) -> bool {
        matches!(
            self,
            ProposalFamily::ShapedGaussian | ProposalFamily::ShapedCauchy | ProposalFamily::ShapedStudentT5
        )
    }

    pub fn is_componentwise(self) -> bool {
        matches!(self, ProposalFamily::ComponentGaussian | ProposalFamily::ComponentCauchy)
    }
}

impl fmt::Display for ProposalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProposalFamily::SphericalGaussian => "spherical-gaussian",
            ProposalFamily::ShapedGaussian => "shaped-gaussian",
            ProposalFamily::ShapedCauchy => "shaped-cauchy",
            ProposalFamily::ComponentGaussian => "component-gaussian",
            ProposalFamily::ComponentCauchy => "component-cauchy",
            ProposalFamily::ShapedStudentT5 => "shaped-student-t5",
        })
    }
}

/// Proposal family with its scale(s) and, for shaped families, the
/// lower-triangular factor `L` of the shape matrix `Sigma = L L'`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProposalSpec {
    family: ProposalFamily,
    scales: Vec<f64>,
    shape: Option<SquareMatrix>,
}

impl ProposalSpec {
    pub fn new(family: ProposalFamily, scales: Vec<f64>, shape: Option<SquareMatrix>) -> Result<Self> {
        if scales.is_empty() || scales.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::invalid("proposal scales must be positive and finite"));
        }
        if !family.is_componentwise() && scales.len() != 1 {
            return Err(Error::invalid(format!("{family} proposals take a single scale")));
        }
        match (&shape, family.is_shaped()) {
            (None, true) => return Err(Error::invalid(format!("{family} proposals need a shape factor"))),
            (Some(_), false) => return Err(Error::invalid(format!("{family} proposals take no shape factor"))),
            (Some(l), true) => {
                if !l.is_lower_triangular() || l.diagonal().iter().any(|&d| d == 0.0) {
                    return Err(Error::invalid("shape factor must be lower triangular and nonsingular"));
                }
            }
            (None, false) => {}
        }
        Ok(Self { family, scales, shape })
    }

    pub fn spherical(scale: f64) -> Result<Self> {
        Self::new(ProposalFamily::SphericalGaussian, vec![scale], None)
    }

    pub fn shaped(scale: f64, shape: SquareMatrix) -> Result<Self> {
        Self::new(ProposalFamily::ShapedGaussian, vec![scale], Some(shape))
    }

    pub fn shaped_cauchy(scale: f64, shape: SquareMatrix) -> Result<Self> {
        Self::new(ProposalFamily::ShapedCauchy, vec![scale], Some(shape))
    }

    pub fn family(&self) -> ProposalFamily {
        self.family
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// The single block scale (first scale for componentwise families).
    pub fn scale(&self) -> f64 {
        self.scales[0]
    }

    pub fn shape(&self) -> Option<&SquareMatrix> {
        self.shape.as_ref()
    }

    pub fn with_scale(&self, scale: f64) -> Result<Self> {
        let scales = if self.family.is_componentwise() {
            vec![scale; self.scales.len()]
        } else {
            vec![scale]
        };
        Self::new(self.family, scales, self.shape.clone())
    }

    /// Draws one additive block jump of dimension `dim`.
    pub fn draw_jump<R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> Vec<f64> {
        let lambda = self.scale();
        match (self.family, &self.shape) {
            (ProposalFamily::SphericalGaussian, _) => standard_normals(dim, rng).into_iter().map(|z| lambda * z).collect(),
            (ProposalFamily::ShapedGaussian, Some(l)) => shaped_gaussian(l, lambda, rng),
            (ProposalFamily::ShapedCauchy, Some(l)) => sample_shaped_cauchy(l, lambda, rng),
            (ProposalFamily::ShapedStudentT5, Some(l)) => sample_shaped_student_t(l, lambda, 5.0, rng),
            (ProposalFamily::ComponentGaussian | ProposalFamily::ComponentCauchy, _) => {
                panic!("componentwise proposals have no block jump")
            }
            _ => unreachable!("shape presence validated at construction"),
        }
    }
}

pub(crate) fn standard_normals<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// `lambda * L z` for standard normal `z`.
pub fn shaped_gaussian<R: Rng + ?Sized>(shape: &SquareMatrix, lambda: f64, rng: &mut R) -> Vec<f64> {
    let z = standard_normals(shape.dim(), rng);
    shape.mul_vec(&z).into_iter().map(|v| lambda * v).collect()
}

/// Multivariate Cauchy jump `V / Z` with `V ~ N(0, lambda^2 L L')` and an
/// independent scalar `Z ~ N(0, 1)`. A divisor small enough to overflow the
/// jump is redrawn.
pub fn sample_shaped_cauchy<R: Rng + ?Sized>(shape: &SquareMatrix, lambda: f64, rng: &mut R) -> Vec<f64> {
    let v = shaped_gaussian(shape, lambda, rng);
    loop {
        let z: f64 = StandardNormal.sample(rng);
        let jump: Vec<f64> = v.iter().map(|x| x / z).collect();
        if jump.iter().all(|x| x.is_finite()) {
            return jump;
        }
    }
}

/// Multivariate Student-t jump with `dof` degrees of freedom and scale
/// matrix `lambda^2 L L'`.
pub fn sample_shaped_student_t<R: Rng + ?Sized>(shape: &SquareMatrix, lambda: f64, dof: f64, rng: &mut R) -> Vec<f64> {
    let v = shaped_gaussian(shape, lambda, rng);
    let chi = ChiSquared::new(dof).expect("positive degrees of freedom");
    loop {
        let w: f64 = chi.sample(rng);
        let factor = (dof / w).sqrt();
        if factor.is_finite() {
            return v.into_iter().map(|x| x * factor).collect();
        }
    }
}

/// One-dimensional Cauchy draw with scale `lambda`, as a ratio of normals.
pub(crate) fn cauchy<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> f64 {
    let num: f64 = StandardNormal.sample(rng);
    loop {
        let den: f64 = StandardNormal.sample(rng);
        let x = lambda * num / den;
        if x.is_finite() {
            return x;
        }
    }
}

/// Lower-triangular factor of an estimated covariance. A matrix that is not
/// numerically positive definite gets `1e-10 * trace / d` added to its
/// diagonal (repeatedly, growing tenfold) until the factorization succeeds.
pub fn shape_factor(cov: &SquareMatrix) -> Result<SquareMatrix> {
    if let Some(l) = cov.cholesky() {
        return Ok(l);
    }
    let d = cov.dim() as f64;
    let base = (cov.trace().abs() / d).max(f64::MIN_POSITIVE);
    let mut jitter = 1e-10 * base;
    for _ in 0..12 {
        let mut reg = cov.clone();
        for i in 0..cov.dim() {
            reg.set(i, i, reg.get(i, i) + jitter);
        }
        if let Some(l) = reg.cholesky() {
            return Ok(l);
        }
        jitter *= 10.0;
    }
    Err(Error::invalid("shape matrix could not be regularized to positive definite"))
}

/// Sample covariance (divisor `n - 1`) of rows.
pub fn sample_covariance(rows: &[Vec<f64>]) -> Result<SquareMatrix> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::invalid("need at least two rows for a covariance estimate"));
    }
    let d = rows[0].len();
    let mean = sample_mean(rows);
    let mut cov = SquareMatrix::zeros(d);
    for r in rows {
        for i in 0..d {
            for j in 0..=i {
                let v = cov.get(i, j) + (r[i] - mean[i]) * (r[j] - mean[j]);
                cov.set(i, j, v);
            }
        }
    }
    for i in 0..d {
        for j in 0..=i {
            let v = cov.get(i, j) / (n - 1) as f64;
            cov.set(i, j, v);
            cov.set(j, i, v);
        }
    }
    Ok(cov)
}

pub fn sample_mean(rows: &[Vec<f64>]) -> Vec<f64> {
    let d = rows.first().map_or(0, Vec::len);
    let mut mean = vec![0.0; d];
    for r in rows {
        for (m, x) in mean.iter_mut().zip(r) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= rows.len() as f64);
    mean
}

/// Mean, covariance and shape factor of a sample window, in the walk
/// coordinates given by `transform`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeEstimate {
    pub transform: Transform,
    pub mean: Vec<f64>,
    pub covariance: SquareMatrix,
    pub factor: SquareMatrix,
}

impl ShapeEstimate {
    /// Estimate from rows given in the original parameter space.
    pub fn from_rows(rows: &[Vec<f64>], transform: Transform) -> Result<Self> {
        let walk: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| transform.forward(x)).collect::<Option<Vec<f64>>>())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::SupportViolation(format!("shape window leaves the {transform} domain")))?;
        let covariance = sample_covariance(&walk)?;
        let factor = shape_factor(&covariance)?;
        Ok(Self {
            transform,
            mean: sample_mean(&walk),
            covariance,
            factor,
        })
    }

    /// Estimate from rows `start..end` (0-based) of a chain.
    pub fn from_chain(chain: &ChainOutput, start: usize, end: usize, transform: Transform) -> Result<Self> {
        if start >= end || end > chain.n_rows() {
            return Err(Error::invalid(format!(
                "shape window {start}..{end} does not fit a chain of {} rows",
                chain.n_rows()
            )));
        }
        let rows: Vec<Vec<f64>> = (start..end).map(|i| chain.row(i).to_vec()).collect();
        Self::from_rows(&rows, transform)
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}
