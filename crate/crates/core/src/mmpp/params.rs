use crate::error::{Error, Result};
use crate::math::{check_generator, SquareMatrix};

/// Largest supported number of hidden states.
pub const MAX_STATES: usize = 6;

/// Intensities and generator of a Markov modulated Poisson process.
#[derive(Debug, Clone, PartialEq)]
pub struct MmppParams {
    psi: Vec<f64>,
    q: SquareMatrix,
}

impl MmppParams {
    /// Validates non-negative intensities and a conservative generator.
    pub fn new(psi: Vec<f64>, q: SquareMatrix) -> Result<Self> {
        if psi.is_empty() || psi.len() > MAX_STATES {
            return Err(Error::invalid(format!(
                "number of states must be in 1..={MAX_STATES}, got {}",
                psi.len()
            )));
        }
        if q.dim() != psi.len() {
            return Err(Error::invalid("generator dimension does not match intensity vector"));
        }
        if psi.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
            return Err(Error::SupportViolation("intensities must be finite and non-negative".into()));
        }
        check_generator(&q, 1e-12).map_err(|e| Error::SupportViolation(e.to_string()))?;
        Ok(Self { psi, q })
    }

    /// Builds the generator from off-diagonal rates given row-major
    /// (`q12, q13, ..., q21, ...`); diagonals are minus the row sums.
    pub fn from_rates(psi: Vec<f64>, off_diagonal: &[f64]) -> Result<Self> {
        let d = psi.len();
        if off_diagonal.len() != d * d.saturating_sub(1) {
            return Err(Error::invalid(format!(
                "expected {} off-diagonal rates for {d} states, got {}",
                d * d.saturating_sub(1),
                off_diagonal.len()
            )));
        }
        if off_diagonal.iter().any(|&r| !(r >= 0.0 && r.is_finite())) {
            return Err(Error::SupportViolation("transition rates must be finite and non-negative".into()));
        }
        let mut q = SquareMatrix::zeros(d);
        let mut rates = off_diagonal.iter();
        for i in 0..d {
            let mut total = 0.0;
            for j in 0..d {
                if i != j {
                    let r = *rates.next().expect("length checked above");
                    q.set(i, j, r);
                    total += r;
                }
            }
            q.set(i, i, -total);
        }
        Self::new(psi, q)
    }

    pub fn from_vector(theta: &ParamVector) -> Result<Self> {
        let d = theta.n_states()?;
        let (psi, rates) = theta.as_slice().split_at(d);
        Self::from_rates(psi.to_vec(), rates)
    }

    pub fn n_states(&self) -> usize {
        self.psi.len()
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn generator(&self) -> &SquareMatrix {
        &self.q
    }

    pub fn to_vector(&self) -> ParamVector {
        let d = self.n_states();
        let mut values = self.psi.clone();
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    values.push(self.q.get(i, j));
                }
            }
        }
        ParamVector(values)
    }
}

/// Flat parameter vector: `psi_1..psi_d` followed by the off-diagonal
/// generator entries in row-major order. Its length is always `d^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector(pub Vec<f64>);

impl ParamVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let v = ParamVector(values);
        v.n_states()?;
        Ok(v)
    }

    /// Number of hidden states implied by the vector length.
    pub fn n_states(&self) -> Result<usize> {
        states_for_len(self.0.len())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

pub(crate) fn states_for_len(len: usize) -> Result<usize> {
    (1..=MAX_STATES)
        .find(|d| d * d == len)
        .ok_or_else(|| Error::invalid(format!("parameter vector length {len} is not d^2 for d in 1..={MAX_STATES}")))
}

/// Column names in [`ParamVector`] order, e.g. `psi1, psi2, q12, q21`.
pub fn param_names(d: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=d).map(|i| format!("psi{i}")).collect();
    for i in 1..=d {
        for j in 1..=d {
            if i != j {
                names.push(format!("q{i}{j}"));
            }
        }
    }
    names
}

/// Independent exponential priors, one mean per parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorSpec {
    means: Vec<f64>,
}

impl PriorSpec {
    pub fn new(means: Vec<f64>) -> Result<Self> {
        if means.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return Err(Error::invalid("prior means must be positive and finite"));
        }
        Ok(Self { means })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// Sum of exponential log-densities; assumes every value is positive.
    pub fn log_density(&self, theta: &[f64]) -> f64 {
        theta
            .iter()
            .zip(&self.means)
            .map(|(x, m)| -x / m - m.ln())
            .sum()
    }
}

/// Relabels states so that intensities are non-decreasing, permuting the
/// generator consistently.
pub fn canonicalize(theta: &ParamVector) -> Result<ParamVector> {
    let d = theta.n_states()?;
    let v = theta.as_slice();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    if order.iter().enumerate().all(|(i, &o)| i == o) {
        return Ok(theta.clone());
    }
    let rate = |i: usize, j: usize| {
        // offset of q_ij in the flat layout
        let col = if j < i { j } else { j - 1 };
        v[d + i * (d - 1) + col]
    };
    let mut out: Vec<f64> = order.iter().map(|&o| v[o]).collect();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                out.push(rate(order[i], order[j]));
            }
        }
    }
    Ok(ParamVector(out))
}
