//! Marginal-correlation screening.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::cmp::Ordering;

/// `|cor(x_j, y)|` for every column; a constant column (or response) scores 0.
pub fn abs_marginal_correlations(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<Vec<f64>> {
    if x.nrows() != y.len() {
        return Err(Error::Dimension(format!("X has {} rows but y has {}", x.nrows(), y.len())));
    }
    let ym = y.mean();
    let yc = y.add_scalar(-ym);
    let syy = yc.norm_squared();
    Ok(x.column_iter()
        .map(|c| {
            let m = c.mean();
            let (mut sxy, mut sxx) = (0.0, 0.0);
            for (a, b) in c.iter().zip(yc.iter()) {
                let d = a - m;
                sxy += d * b;
                sxx += d * d;
            }
            let r = sxy / (sxx * syy).sqrt();
            if r.is_finite() && sxx > 1e-24 * m.abs().max(1.0).powi(2) {
                r.abs()
            } else {
                0.0
            }
        })
        .collect())
}

/// Indices of the `k` columns with the largest `|cor(x_j, y)|`, best first;
/// ties go to the lower index.
pub fn screen_by_marginal_correlation(x: &DMatrix<f64>, y: &DVector<f64>, k: usize) -> Result<Vec<usize>> {
    if k > x.ncols() {
        return Err(Error::Config(format!("cannot keep {k} of {} columns", x.ncols())));
    }
    let r = abs_marginal_correlations(x, y)?;
    let mut idx: Vec<usize> = (0..r.len()).collect();
    idx.sort_by(|&a, &b| match r[b].total_cmp(&r[a]) {
        Ordering::Equal => a.cmp(&b),
        o => o,
    });
    idx.truncate(k);
    Ok(idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rngdist::{standard_normal, RngStream};

    #[test]
    fn response_column_ranks_first() {
        let mut rng = RngStream::new(2, 0);
        let x = DMatrix::from_fn(30, 12, |_, _| standard_normal(&mut rng));
        let y = x.column(7).into_owned();
        assert_eq!(screen_by_marginal_correlation(&x, &y, 3).unwrap()[0], 7);
        let all = screen_by_marginal_correlation(&x, &y, 12).unwrap();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, (0..12).collect::<Vec<_>>());
        assert!(screen_by_marginal_correlation(&x, &y, 13).is_err());
    }

    #[test]
    fn constant_columns_score_zero_and_ties_go_low() {
        let x = DMatrix::from_row_slice(3, 3, &[1.0, 4.0, 4.0, 1.0, 5.0, 5.0, 1.0, 6.0, 6.0]);
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let r = abs_marginal_correlations(&x, &y).unwrap();
        assert_eq!(r[0], 0.0);
        assert_eq!(screen_by_marginal_correlation(&x, &y, 3).unwrap(), vec![1, 2, 0]);
    }
}
