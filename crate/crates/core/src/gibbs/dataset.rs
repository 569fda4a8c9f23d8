use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// How the raw columns were mapped onto the modelling scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub column_means: Vec<f64>,
    /// Sample standard deviations (divisor `n - 1`).
    pub column_scales: Vec<f64>,
    pub response_mean: f64,
}

impl Standardization {
    fn identity(p: usize) -> Self {
        Standardization {
            column_means: vec![0.0; p],
            column_scales: vec![1.0; p],
            response_mean: 0.0,
        }
    }
}

/// Standardized design and centered response.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub standardization: Standardization,
}

impl Dataset {
    /// Centre and scale every column of `x` (sample SD, divisor `n - 1`) and
    /// centre `y`. Constant columns cannot be scaled and are rejected.
    pub fn standardize(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        let (n, p) = x.shape();
        if y.len() != n {
            return Err(Error::Dimension(format!("X has {n} rows but y has {}", y.len())));
        }
        if n < 2 || p == 0 {
            return Err(Error::Dimension(format!("need n >= 2 and p >= 1, got n={n}, p={p}")));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Config("data contain non-finite values".into()));
        }
        let mut x = x;
        let mut means = Vec::with_capacity(p);
        let mut scales = Vec::with_capacity(p);
        for j in 0..p {
            let mut col = x.column_mut(j);
            let m = col.mean();
            col.add_scalar_mut(-m);
            let s = (col.norm_squared() / (n - 1) as f64).sqrt();
            if !(s > 0.0) || s < 1e-12 * m.abs().max(1.0) {
                return Err(Error::Config(format!("column {} is constant and cannot be standardized", j + 1)));
            }
            col /= s;
            means.push(m);
            scales.push(s);
        }
        let ym = y.mean();
        let y = y.add_scalar(-ym);
        Ok(Dataset {
            x,
            y,
            standardization: Standardization {
                column_means: means,
                column_scales: scales,
                response_mean: ym,
            },
        })
    }

    /// Wrap data that are already on the modelling scale.
    pub fn from_standardized(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        if y.len() != x.nrows() {
            return Err(Error::Dimension(format!("X has {} rows but y has {}", x.nrows(), y.len())));
        }
        let p = x.ncols();
        Ok(Dataset {
            x,
            y,
            standardization: Standardization::identity(p),
        })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// Coefficients on the standardized scale mapped back to the raw columns.
    pub fn to_raw_scale(&self, beta: &[f64]) -> Vec<f64> {
        beta.iter()
            .zip(&self.standardization.column_scales)
            .map(|(b, s)| b / s)
            .collect()
    }

    /// Fitted responses for raw-scale rows `x_new` given standardized-scale
    /// coefficients.
    pub fn predict(&self, beta: &[f64], x_new: &DMatrix<f64>) -> Result<DVector<f64>> {
        if x_new.ncols() != self.p() || beta.len() != self.p() {
            return Err(Error::Dimension(format!(
                "prediction needs {} columns and coefficients, got {} and {}",
                self.p(),
                x_new.ncols(),
                beta.len()
            )));
        }
        let st = &self.standardization;
        let raw = self.to_raw_scale(beta);
        let intercept = st.response_mean - st.column_means.iter().zip(&raw).map(|(m, b)| m * b).sum::<f64>();
        Ok(x_new * DVector::from_vec(raw) + DVector::from_element(x_new.nrows(), intercept))
    }
}
