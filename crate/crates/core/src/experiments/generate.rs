//! Synthetic regression problems with AR(1)-correlated Gaussian designs.

use crate::error::{Error, Result};
use crate::gibbs::Dataset;
use crate::rngdist::{sample_student_t, standard_normal};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setup {
    /// Ten `t_3` coefficients at positions 11-15 and 46-50.
    Setup1,
    /// Five `15^(-1/2) t_3` coefficients at positions 11-15.
    Setup2,
}

impl Setup {
    pub fn label(&self) -> &'static str {
        match self {
            Setup::Setup1 => "setup1",
            Setup::Setup2 => "setup2",
        }
    }

    pub fn min_p(&self) -> usize {
        match self {
            Setup::Setup1 => 50,
            Setup::Setup2 => 15,
        }
    }
}

/// A generated problem: the standardized data and the coefficients that
/// produced the raw response.
#[derive(Clone, Debug)]
pub struct SimData {
    pub data: Dataset,
    pub beta_true: Vec<f64>,
}

/// One row of `N(0, Sigma)` with `Sigma_jk = rho^|j-k|`, by the causal
/// recursion `x_j = rho x_{j-1} + sqrt(1 - rho^2) z_j`.
pub fn ar1_row<R: Rng + ?Sized>(p: usize, rho: f64, rng: &mut R, out: &mut [f64]) {
    let s = (1.0 - rho * rho).sqrt();
    let mut prev = standard_normal(rng);
    out[0] = prev;
    for v in out.iter_mut().take(p).skip(1) {
        prev = rho * prev + s * standard_normal(rng);
        *v = prev;
    }
}

/// `n x p` design with independent AR(1) rows.
pub fn ar1_design<R: Rng + ?Sized>(n: usize, p: usize, rho: f64, rng: &mut R) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(n, p);
    let mut row = vec![0.0; p];
    for i in 0..n {
        ar1_row(p, rho, rng, &mut row);
        for (j, v) in row.iter().enumerate() {
            x[(i, j)] = *v;
        }
    }
    x
}

fn check(setup: Setup, n: usize, p: usize, rho: f64) -> Result<()> {
    if p < setup.min_p() {
        return Err(Error::Config(format!("{} needs p >= {}, got {p}", setup.label(), setup.min_p())));
    }
    if n < 2 {
        return Err(Error::Config(format!("need n >= 2, got {n}")));
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Config(format!("rho must lie in [0, 1), got {rho}")));
    }
    Ok(())
}

/// True coefficients for `setup` with `p` columns.
pub fn true_coefficients<R: Rng + ?Sized>(setup: Setup, p: usize, rng: &mut R) -> Result<Vec<f64>> {
    check(setup, 2, p, 0.0)?;
    let mut beta = vec![0.0; p];
    let t3 = |rng: &mut R| sample_student_t(3.0, rng).expect("df is positive");
    match setup {
        Setup::Setup1 => {
            for j in (10..15).chain(45..50) {
                beta[j] = t3(rng);
            }
        }
        Setup::Setup2 => {
            let s = 15f64.sqrt().recip();
            for b in &mut beta[10..15] {
                *b = s * t3(rng);
            }
        }
    }
    Ok(beta)
}

/// Coefficients first, then the design, then unit-variance noise, all from
/// `rng`; the result is standardized.
pub fn generate<R: Rng + ?Sized>(setup: Setup, n: usize, p: usize, rho: f64, rng: &mut R) -> Result<SimData> {
    check(setup, n, p, rho)?;
    let beta_true = true_coefficients(setup, p, rng)?;
    let x = ar1_design(n, p, rho, rng);
    let y = &x * DVector::from_column_slice(&beta_true) + DVector::from_fn(n, |_, _| standard_normal(rng));
    Ok(SimData {
        data: Dataset::standardize(x, y)?,
        beta_true,
    })
}

pub fn gen_setup1<R: Rng + ?Sized>(n: usize, p: usize, rho: f64, rng: &mut R) -> Result<SimData> {
    generate(Setup::Setup1, n, p, rho, rng)
}

pub fn gen_setup2<R: Rng + ?Sized>(n: usize, p: usize, rho: f64, rng: &mut R) -> Result<SimData> {
    generate(Setup::Setup2, n, p, rho, rng)
}

/// Monte Carlo value of `var(x'beta) / (var(x'beta) + 1)` with both the row
/// `x` and the coefficients redrawn for each of `draws` samples.
pub fn theoretical_r2<R: Rng + ?Sized>(setup: Setup, p: usize, rho: f64, draws: usize, rng: &mut R) -> Result<f64> {
    check(setup, 2, p, rho)?;
    if draws < 2 {
        return Err(Error::Config("need at least two draws".into()));
    }
    let mut row = vec![0.0; p];
    let mut sum = 0.0;
    let mut sum2 = 0.0;
    for _ in 0..draws {
        let beta = true_coefficients(setup, p, rng)?;
        ar1_row(p, rho, rng, &mut row);
        let eta: f64 = row.iter().zip(&beta).map(|(a, b)| a * b).sum();
        sum += eta;
        sum2 += eta * eta;
    }
    let m = draws as f64;
    let v = (sum2 - sum * sum / m) / (m - 1.0);
    Ok(v / (v + 1.0))
}
