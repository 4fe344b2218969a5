use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Matrices up to 6x6 are stored inline.
type Storage = SmallVec<[f64; 36]>;

/// Dense square matrix stored in row-major order.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    entries: Storage,
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = (0..self.dim).map(|i| self.row(i)).collect();
        f.debug_struct("SquareMatrix")
            .field("dim", &self.dim)
            .field("rows", &rows)
            .finish()
    }
}

impl SquareMatrix {
    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn new(dim: usize, entries: &[f64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be at least 1"));
        }
        if entries.len() != dim * dim {
            return Err(Error::invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(Self {
            dim,
            entries: Storage::from_slice(entries),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("rows must all have length equal to the row count"));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(dim, &flat)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: smallvec::smallvec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * diag.len() + i] = d;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|x| x.is_finite())
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.entries.iter_mut().for_each(|x| *x *= factor);
        out
    }

    /// `self + factor * other`
    pub fn add_scaled(&self, other: &Self, factor: f64) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (o, b) in out.entries.iter_mut().zip(other.entries.iter()) {
            *o += factor * b;
        }
        out
    }

    /// Row vector times matrix: `v' A`.
    pub fn left_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for (i, &vi) in v.iter().enumerate().take(n) {
            for j in 0..n {
                out[j] += vi * self.entries[i * n + j];
            }
        }
        out
    }

    /// Matrix times column vector: `A v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Solves `self * X = rhs` by LU with partial pivoting. Returns `None`
    /// when a pivot vanishes.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a.get(r, col).abs().total_cmp(&a.get(s, col).abs()))
                .unwrap_or(col);
            let pv = a.get(pivot, col);
            if pv == 0.0 || !pv.is_finite() {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(pivot * n + j, col * n + j);
                    b.entries.swap(pivot * n + j, col * n + j);
                }
            }
            for r in col + 1..n {
                let f = a.get(r, col) / pv;
                if f == 0.0 {
                    continue;
                }
                for j in col..n {
                    a.entries[r * n + j] -= f * a.entries[col * n + j];
                }
                for j in 0..n {
                    b.entries[r * n + j] -= f * b.entries[col * n + j];
                }
            }
        }
        for col in (0..n).rev() {
            let pv = a.get(col, col);
            for j in 0..n {
                let mut s = b.get(col, j);
                for k in col + 1..n {
                    s -= a.get(col, k) * b.get(k, j);
                }
                b.set(col, j, s / pv);
            }
        }
        Some(b)
    }

    /// Solves `self * x = rhs` for a single column.
    pub fn solve_vec(&self, rhs: &[f64]) -> Option<Vec<f64>> {
        let n = self.dim;
        let mut b = Self::zeros(n);
        for (i, &v) in rhs.iter().enumerate() {
            b.set(i, 0, v);
        }
        let x = self.solve(&b)?;
        Some((0..n).map(|i| x.get(i, 0)).collect())
    }

    pub fn inverse(&self) -> Option<Self> {
        self.solve(&Self::identity(self.dim))
    }

    /// Lower-triangular Cholesky factor `L` with `self = L L'`, or `None`
    /// if the matrix is not numerically positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        let n = self.dim;
        let mut l = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return None;
                    }
                    l.set(i, i, s.sqrt());
                } else {
                    l.set(i, j, s / l.get(j, j));
                }
            }
        }
        Some(l)
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.dim).all(|i| (i + 1..self.dim).all(|j| self.get(i, j) == 0.0))
    }
}

/// Probability vector over a finite state space.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("probability vector must be non-empty"));
        }
        if entries.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::invalid("probabilities must lie in [0, 1]"));
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self(entries))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}
