use crate::error::{Error, Result};
use crate::math::SquareMatrix;

fn check_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<usize> {
    if rows.len() < 2 {
        return Err(Error::invalid("jump distances need at least two rows"));
    }
    let d = rows[0].as_ref().len();
    if rows.iter().any(|r| r.as_ref().len() != d) {
        return Err(Error::invalid("rows differ in length"));
    }
    Ok(d)
}

/// Mean squared Euclidean jump distance between consecutive rows.
pub fn msejd<R: AsRef<[f64]>>(rows: &[R]) -> Result<f64> {
    check_rows(rows)?;
    let total: f64 = rows
        .windows(2)
        .map(|w| {
            w[0].as_ref()
                .iter()
                .zip(w[1].as_ref())
                .map(|(a, b)| (b - a) * (b - a))
                .sum::<f64>()
        })
        .sum();
    Ok(total / (rows.len() - 1) as f64)
}

/// Mean squared jump distance in the metric of `shape^-1`.
pub fn msjd<R: AsRef<[f64]>>(rows: &[R], shape: &SquareMatrix) -> Result<f64> {
    let d = check_rows(rows)?;
    if shape.dim() != d {
        return Err(Error::invalid("shape dimension does not match the rows"));
    }
    let l = shape
        .cholesky()
        .ok_or_else(|| Error::invalid("shape matrix must be positive definite"))?;
    let mut total = 0.0;
    let mut w = vec![0.0; d];
    for pair in rows.windows(2) {
        let (a, b) = (pair[0].as_ref(), pair[1].as_ref());
        // solve L w = b - a; the quadratic form is |w|^2
        for i in 0..d {
            let mut s = b[i] - a[i];
            for j in 0..i {
                s -= l.get(i, j) * w[j];
            }
            w[i] = s / l.get(i, i);
        }
        total += w.iter().map(|v| v * v).sum::<f64>();
    }
    Ok(total / (rows.len() - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_alternating() {
        assert_eq!(msejd(&[[1.0, 2.0]; 5]).unwrap(), 0.0);
        let rows = [[0.0, 0.0], [3.0, 4.0], [0.0, 0.0], [3.0, 4.0]];
        assert_eq!(msejd(&rows).unwrap(), 25.0);
    }

    #[test]
    fn diagonal_shape_weights_axes() {
        let rows = [[0.0, 0.0], [2.0, 0.0], [2.0, 3.0]];
        let shape = SquareMatrix::from_diag(&[4.0, 9.0]);
        // (4/4 + 9/9) / 2
        assert!((msjd(&rows, &shape).unwrap() - 1.0).abs() < 1e-15);
        assert!((msjd(&rows, &SquareMatrix::identity(2)).unwrap() - msejd(&rows).unwrap()).abs() < 1e-15);
        let scaled = shape.scaled(2.0);
        assert!((msjd(&rows, &scaled).unwrap() - 0.5).abs() < 1e-15);
    }
}
