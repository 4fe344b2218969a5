//! Stack-allocated `N x N` kernels for the hot likelihood loop.

pub(crate) type Mat<const N: usize> = [[f64; N]; N];

#[inline]
fn identity<const N: usize>() -> Mat<N> {
    let mut m = [[0.0; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

#[inline]
fn matmul<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> Mat<N> {
    let mut out = [[0.0; N]; N];
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            for j in 0..N {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// `sum_k c_k * m_k` plus `c_id * I`.
#[inline]
fn combine<const N: usize>(terms: &[(f64, &Mat<N>)], c_id: f64) -> Mat<N> {
    let mut out = [[0.0; N]; N];
    for (c, m) in terms {
        for i in 0..N {
            for j in 0..N {
                out[i][j] += c * m[i][j];
            }
        }
    }
    for (i, row) in out.iter_mut().enumerate() {
        row[i] += c_id;
    }
    out
}

fn norm1<const N: usize>(a: &Mat<N>) -> f64 {
    (0..N)
        .map(|j| (0..N).map(|i| a[i][j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves `a x = b` (matrix right-hand side) by Gaussian elimination with
/// partial pivoting.
fn solve<const N: usize>(mut a: Mat<N>, mut b: Mat<N>) -> Option<Mat<N>> {
    for col in 0..N {
        let mut pivot = col;
        for r in col + 1..N {
            if a[r][col].abs() > a[pivot][col].abs() {
                pivot = r;
            }
        }
        let pv = a[pivot][col];
        if pv == 0.0 || !pv.is_finite() {
            return None;
        }
        a.swap(pivot, col);
        b.swap(pivot, col);
        for r in col + 1..N {
            let f = a[r][col] / pv;
            for j in col..N {
                a[r][j] -= f * a[col][j];
            }
            for j in 0..N {
                b[r][j] -= f * b[col][j];
            }
        }
    }
    for col in (0..N).rev() {
        for j in 0..N {
            let mut s = b[col][j];
            for k in col + 1..N {
                s -= a[col][k] * b[k][j];
            }
            b[col][j] = s / a[col][col];
        }
    }
    Some(b)
}

/// `exp(a * t)` by scaling and squaring with the [13/13] Padé approximant.
pub(crate) fn expm<const N: usize>(a: &Mat<N>, t: f64) -> Option<Mat<N>> {
    use super::expm::{PADE13 as b, THETA13};

    let mut x = *a;
    x.iter_mut().flatten().for_each(|v| *v *= t);
    let norm = norm1(&x);
    if norm == 0.0 {
        return Some(identity());
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    if squarings > 0 {
        let s = 0.5f64.powi(squarings);
        x.iter_mut().flatten().for_each(|v| *v *= s);
    }
    let x2 = matmul(&x, &x);
    let x4 = matmul(&x2, &x2);
    let x6 = matmul(&x4, &x2);

    let u_inner = combine(&[(b[13], &x6), (b[11], &x4), (b[9], &x2)], 0.0);
    let u_outer = matmul(&x6, &u_inner);
    let u_sum = combine(&[(1.0, &u_outer), (b[7], &x6), (b[5], &x4), (b[3], &x2)], b[1]);
    let u = matmul(&x, &u_sum);

    let v_inner = combine(&[(b[12], &x6), (b[10], &x4), (b[8], &x2)], 0.0);
    let v_outer = matmul(&x6, &v_inner);
    let v = combine(&[(1.0, &v_outer), (b[6], &x6), (b[4], &x4), (b[2], &x2)], b[0]);

    let numer = combine(&[(1.0, &v), (1.0, &u)], 0.0);
    let denom = combine(&[(1.0, &v), (-1.0, &u)], 0.0);
    let mut r = solve(denom, numer)?;
    for _ in 0..squarings {
        r = matmul(&r, &r);
    }
    Some(r)
}

/// Row vector times matrix.
#[inline]
pub(crate) fn left_mul<const N: usize>(v: &[f64; N], m: &Mat<N>) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        for j in 0..N {
            out[j] += v[i] * m[i][j];
        }
    }
    out
}
