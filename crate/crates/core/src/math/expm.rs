//! Matrix exponential and stationary distributions of small generators.

use crate::error::{Error, Result};

use super::fixed;
use super::matrix::{ProbVector, SquareMatrix};

/// Coefficients of the [13/13] Padé approximant to `exp`.
pub(crate) const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the unscaled [13/13] approximant attains double
/// precision backward error.
pub(crate) const THETA13: f64 = 5.371920351148152;

/// `exp(a * t)` by scaling and squaring with a fixed [13/13] Padé approximant.
pub fn mat_exp(a: &SquareMatrix, t: f64) -> Result<SquareMatrix> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::invalid(format!("time must be finite and non-negative, got {t}")));
    }
    if !a.is_finite() {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let n = a.dim();
    if t == 0.0 {
        return Ok(SquareMatrix::identity(n));
    }
    let r = match n {
        1 => fixed_path::<1>(a, t),
        2 => fixed_path::<2>(a, t),
        3 => fixed_path::<3>(a, t),
        4 => fixed_path::<4>(a, t),
        5 => fixed_path::<5>(a, t),
        6 => fixed_path::<6>(a, t),
        _ => general_path(a, t),
    }?;
    if !r.is_finite() {
        return Err(Error::invalid("matrix exponential overflowed"));
    }
    Ok(r)
}

fn fixed_path<const N: usize>(a: &SquareMatrix, t: f64) -> Result<SquareMatrix> {
    let mut m = [[0.0; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row.copy_from_slice(a.row(i));
    }
    let e = fixed::expm(&m, t).ok_or_else(|| Error::invalid("Padé denominator is singular"))?;
    SquareMatrix::new(N, e.as_flattened()).map_err(|_| Error::invalid("matrix exponential overflowed"))
}

fn general_path(a: &SquareMatrix, t: f64) -> Result<SquareMatrix> {
    let n = a.dim();
    let at = a.scaled(t);
    let norm = at.norm1();
    if norm == 0.0 {
        return Ok(SquareMatrix::identity(n));
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let x = at.scaled(0.5f64.powi(squarings));

    let b = &PADE13;
    let ident = SquareMatrix::identity(n);
    let x2 = x.matmul(&x);
    let x4 = x2.matmul(&x2);
    let x6 = x4.matmul(&x2);

    let u_inner = x6
        .scaled(b[13])
        .add_scaled(&x4, b[11])
        .add_scaled(&x2, b[9]);
    let u_tail = x6
        .scaled(b[7])
        .add_scaled(&x4, b[5])
        .add_scaled(&x2, b[3])
        .add_scaled(&ident, b[1]);
    let u = x.matmul(&x6.matmul(&u_inner).add_scaled(&u_tail, 1.0));

    let v_inner = x6
        .scaled(b[12])
        .add_scaled(&x4, b[10])
        .add_scaled(&x2, b[8]);
    let v = x6
        .matmul(&v_inner)
        .add_scaled(&x6, b[6])
        .add_scaled(&x4, b[4])
        .add_scaled(&x2, b[2])
        .add_scaled(&ident, b[0]);

    let numer = v.add_scaled(&u, 1.0);
    let denom = v.add_scaled(&u, -1.0);
    let mut r = denom
        .solve(&numer)
        .ok_or_else(|| Error::invalid("Padé denominator is singular"))?;
    for _ in 0..squarings {
        r = r.matmul(&r);
    }
    Ok(r)
}

/// Checks that `q` is a conservative generator: non-negative off-diagonal
/// rates and rows summing to zero within `tol` (relative to the row scale).
pub fn check_generator(q: &SquareMatrix, tol: f64) -> Result<()> {
    let n = q.dim();
    for i in 0..n {
        let mut scale = 0.0f64;
        let mut sum = 0.0;
        for j in 0..n {
            let v = q.get(i, j);
            if i != j && v < 0.0 {
                return Err(Error::invalid(format!("negative off-diagonal rate q[{i}][{j}] = {v}")));
            }
            scale = scale.max(v.abs());
            sum += v;
        }
        if sum.abs() > tol * scale.max(1.0) {
            return Err(Error::invalid(format!("row {i} of generator sums to {sum}")));
        }
    }
    Ok(())
}

/// True when every state can reach every other through positive rates.
pub fn is_irreducible(q: &SquareMatrix) -> bool {
    let n = q.dim();
    let reach_all = |transpose: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let rate = if transpose { q.get(j, i) } else { q.get(i, j) };
                if i != j && rate > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach_all(false) && reach_all(true)
}

/// Stationary distribution `nu` of an irreducible generator: `nu Q = 0`,
/// `sum(nu) = 1`.
///
/// Solved as the square system `Q' nu' = 0` with the last equation replaced
/// by the normalization constraint.
pub fn stationary_dist(q: &SquareMatrix) -> Result<ProbVector> {
    check_generator(q, 1e-12)?;
    let n = q.dim();
    if n == 1 {
        return ProbVector::new(vec![1.0]);
    }
    if !is_irreducible(q) {
        return Err(Error::invalid("generator is reducible"));
    }
    let mut system = q.transpose();
    for j in 0..n {
        system.set(n - 1, j, 1.0);
    }
    let mut rhs = vec![0.0; n];
    rhs[n - 1] = 1.0;
    let mut nu = system
        .solve_vec(&rhs)
        .ok_or_else(|| Error::invalid("stationary system is singular"))?;
    // Round-off can leave tiny negatives for nearly absorbing states.
    for p in nu.iter_mut() {
        *p = p.max(0.0);
    }
    let total: f64 = nu.iter().sum();
    nu.iter_mut().for_each(|p| *p /= total);
    ProbVector::new(nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Double-double arithmetic (about 32 significant digits) for the
    /// series oracle.
    #[derive(Clone, Copy, Debug)]
    struct Dd {
        hi: f64,
        lo: f64,
    }

    impl Dd {
        fn from(x: f64) -> Self {
            Dd { hi: x, lo: 0.0 }
        }
        fn two_sum(a: f64, b: f64) -> (f64, f64) {
            let s = a + b;
            let bb = s - a;
            (s, (a - (s - bb)) + (b - bb))
        }
        fn add(self, o: Dd) -> Dd {
            let (s, e) = Self::two_sum(self.hi, o.hi);
            let e = e + self.lo + o.lo;
            let (hi, lo) = Self::two_sum(s, e);
            Dd { hi, lo }
        }
        fn mul(self, o: Dd) -> Dd {
            let p = self.hi * o.hi;
            let e = self.hi.mul_add(o.hi, -p);
            let e = e + self.hi * o.lo + self.lo * o.hi;
            let (hi, lo) = Self::two_sum(p, e);
            Dd { hi, lo }
        }
        fn div_f64(self, d: f64) -> Dd {
            let q1 = self.hi / d;
            let r = self.add(Dd::from(d).mul(Dd::from(-q1)));
            let q2 = r.hi / d;
            let (hi, lo) = Self::two_sum(q1, q2);
            Dd { hi, lo }
        }
    }

    fn series_exp(a: &[Vec<f64>], t: f64, order: usize) -> Vec<Vec<f64>> {
        let n = a.len();
        let at: Vec<Vec<Dd>> = a
            .iter()
            .map(|r| r.iter().map(|&x| Dd::from(x).mul(Dd::from(t))).collect())
            .collect();
        let mut term: Vec<Vec<Dd>> = (0..n)
            .map(|i| (0..n).map(|j| Dd::from(if i == j { 1.0 } else { 0.0 })).collect())
            .collect();
        let mut sum = term.clone();
        for k in 1..=order {
            let mut next = vec![vec![Dd::from(0.0); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Dd::from(0.0);
                    for m in 0..n {
                        acc = acc.add(term[i][m].mul(at[m][j]));
                    }
                    next[i][j] = acc.div_f64(k as f64);
                }
            }
            term = next;
            for i in 0..n {
                for j in 0..n {
                    sum[i][j] = sum[i][j].add(term[i][j]);
                }
            }
        }
        sum.into_iter()
            .map(|r| r.into_iter().map(|d| d.hi + d.lo).collect())
            .collect()
    }

    #[test]
    fn zero_matrix_gives_identity() {
        let e = mat_exp(&SquareMatrix::zeros(2), 5.0).unwrap();
        assert_eq!(e, SquareMatrix::identity(2));
    }

    #[test]
    fn diagonal_case() {
        let e = mat_exp(&SquareMatrix::from_diag(&[-1.0, -2.0]), 1.0).unwrap();
        assert!((e.get(0, 0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((e.get(1, 1) - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(e.get(0, 1), 0.0);
    }

    #[test]
    fn matches_extended_precision_series() {
        let rows = vec![vec![-1.0, 1.0], vec![1.0, -1.0]];
        let a = SquareMatrix::from_rows(&rows).unwrap();
        let e = mat_exp(&a, 0.7).unwrap();
        let oracle = series_exp(&rows, 0.7, 30);
        for i in 0..2 {
            for j in 0..2 {
                assert!((e.get(i, j) - oracle[i][j]).abs() <= 1e-10);
            }
        }
        // the series itself against the closed form
        let closed = 0.5 * (1.0 + (-1.4f64).exp());
        assert!((oracle[0][0] - closed).abs() < 1e-15);
    }

    #[test]
    fn large_norm_uses_squaring() {
        let rows = vec![
            vec![-31.0, 1.0, 0.0],
            vec![2.0, -12.0, 10.0],
            vec![0.5, 0.5, -1.0],
        ];
        let a = SquareMatrix::from_rows(&rows).unwrap();
        let e = mat_exp(&a, 0.9).unwrap();
        // split the interval so the series stays well conditioned
        let mut oracle = series_exp(&rows, 0.9 / 16.0, 30);
        for _ in 0..4 {
            let m = SquareMatrix::from_rows(&oracle).unwrap();
            let sq = m.matmul(&m);
            oracle = (0..3).map(|i| sq.row(i).to_vec()).collect();
        }
        let o = SquareMatrix::from_rows(&oracle).unwrap();
        assert!(e.max_abs_diff(&o) < 1e-10, "{:?} vs {:?}", e, o);
    }

    #[test]
    fn general_path_agrees_with_fixed_path() {
        let rows = vec![
            vec![-2.0, 1.0, 1.0],
            vec![0.3, -0.5, 0.2],
            vec![4.0, 0.0, -4.0],
        ];
        let a = SquareMatrix::from_rows(&rows).unwrap();
        for t in [0.01, 0.5, 3.0, 40.0] {
            let f = mat_exp(&a, t).unwrap();
            let g = general_path(&a, t).unwrap();
            assert!(f.max_abs_diff(&g) < 1e-13);
        }
    }

    #[test]
    fn rejects_negative_time() {
        assert!(mat_exp(&SquareMatrix::identity(2), -1.0).is_err());
    }

    #[test]
    fn stationary_examples() {
        let q = SquareMatrix::new(2, &[-1.0, 1.0, 1.0, -1.0]).unwrap();
        let nu = stationary_dist(&q).unwrap();
        assert!((nu[0] - 0.5).abs() < 1e-15 && (nu[1] - 0.5).abs() < 1e-15);

        let q = SquareMatrix::new(2, &[-2.0, 2.0, 1.0, -1.0]).unwrap();
        let nu = stationary_dist(&q).unwrap();
        assert!((nu[0] - 1.0 / 3.0).abs() < 1e-14 && (nu[1] - 2.0 / 3.0).abs() < 1e-14);

        let q = SquareMatrix::new(3, &[-1.0, 0.5, 0.5, 0.5, -1.0, 0.5, 0.5, 0.5, -1.0]).unwrap();
        let nu = stationary_dist(&q).unwrap();
        for p in nu.as_slice() {
            assert!((p - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn stationary_rejects_bad_generators() {
        let reducible = SquareMatrix::new(2, &[-1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(stationary_dist(&reducible).is_err());
        let not_generator = SquareMatrix::new(2, &[-1.0, 2.0, 1.0, -1.0]).unwrap();
        assert!(stationary_dist(&not_generator).is_err());
        let negative = SquareMatrix::new(2, &[1.0, -1.0, 1.0, -1.0]).unwrap();
        assert!(stationary_dist(&negative).is_err());
    }
}
