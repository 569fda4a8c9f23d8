//! Marginal prior densities, prior mass near the origin, quartile
//! calibration and the numerical order checks behind the tail and origin
//! comparisons of the four priors.

mod mass;
mod marginal;

pub use marginal::{
    dl_log_marginal, dl_marginal, gdp_density, hs_log_marginal, hs_marginal, hs_marginal_bounds, hsplus_log_marginal,
    hsplus_marginal, hsplus_marginal_nested, r2d2_log_marginal, r2d2_marginal,
};
pub use mass::{
    dl_mass_within, hs_mass_within, hsplus_mass_within, interquartile_range, iqr_calibrate, prior_mass_near_zero,
    prior_mass_within, r2d2_mass_within, upper_quartile, upper_quartile_of,
};

use crate::error::{Error, Result};
use crate::priors::PriorSpec;
use crate::specialfns::EvalOptions;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `ln pi(beta)` for any prior with `sigma = 1`; `+inf` marks divergence at 0.
pub fn log_marginal(prior: &PriorSpec, beta: f64, opts: &EvalOptions) -> Result<f64> {
    if !beta.is_finite() {
        return Err(Error::domain(format!("beta must be finite, got {beta}")));
    }
    match prior {
        PriorSpec::R2d2(p) => r2d2_log_marginal(beta, p, opts),
        PriorSpec::Dl(p) => dl_log_marginal(beta, p, opts),
        PriorSpec::Hs(p) => hs_log_marginal(beta, p.tau, opts),
        PriorSpec::HsPlus(p) => hsplus_log_marginal(beta, p.tau, opts),
    }
}

pub fn marginal(prior: &PriorSpec, beta: f64, opts: &EvalOptions) -> Result<f64> {
    Ok(log_marginal(prior, beta, opts)?.exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub beta_grid: Vec<f64>,
    pub log_density: Vec<f64>,
    pub prior: String,
}

impl DensityCurve {
    /// Evaluate on `grid`, which must be strictly increasing. Points are
    /// evaluated in parallel; the result does not depend on the thread count.
    pub fn evaluate(prior: &PriorSpec, label: &str, grid: &[f64], opts: &EvalOptions) -> Result<Self> {
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("density grid must be strictly increasing"));
        }
        let log_density = grid
            .par_iter()
            .map(|&b| log_marginal(prior, b, opts))
            .collect::<Result<Vec<_>>>()?;
        Ok(DensityCurve {
            beta_grid: grid.to_vec(),
            log_density,
            prior: label.to_string(),
        })
    }
}

/// Least-squares slope of `y` on `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Log-log slope of the marginal density over `[lo, hi]` (both positive),
/// fitted on `points` log-spaced abscissae.
pub fn log_log_slope(prior: &PriorSpec, lo: f64, hi: f64, points: usize, opts: &EvalOptions) -> Result<f64> {
    let (x, y) = log_spaced(lo, hi, points)
        .into_iter()
        .map(|b| log_marginal(prior, b, opts).map(|l| (b.ln(), l)))
        .collect::<Result<(Vec<_>, Vec<_>)>>()?;
    Ok(ols_slope(&x, &y))
}

pub fn log_spaced(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1).max(1) as f64).exp())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GdpTailReport {
    pub alpha: f64,
    pub eta: f64,
    pub density_at_zero: f64,
    pub expected_tail_slope: f64,
    pub measured_tail_slope: f64,
    pub bounded_at_origin: bool,
    pub heavier_than_cauchy: bool,
}

/// Closed-form checks on the generalised double Pareto density: value at the
/// origin and the log-log tail slope measured far out in the tail.
pub fn gdp_tail_check(alpha: f64, eta: f64) -> Result<GdpTailReport> {
    if !(alpha > 0.0 && eta > 0.0) {
        return Err(Error::domain(format!("GDP needs alpha, eta > 0, got ({alpha}, {eta})")));
    }
    let lo = 1e6 * eta;
    let hi = 1e8 * eta;
    let (x, y): (Vec<f64>, Vec<f64>) = log_spaced(lo, hi, 20)
        .into_iter()
        .map(|b| (b.ln(), gdp_density(b, alpha, eta).ln()))
        .unzip();
    let f0 = gdp_density(0.0, alpha, eta);
    Ok(GdpTailReport {
        alpha,
        eta,
        density_at_zero: f0,
        expected_tail_slope: -(alpha + 1.0),
        measured_tail_slope: ols_slope(&x, &y),
        bounded_at_origin: f0.is_finite(),
        heavier_than_cauchy: alpha < 1.0,
    })
}
