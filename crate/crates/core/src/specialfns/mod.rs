//! Scalar special functions: log-gamma, regularized incomplete gamma, the
//! modified Bessel function of the second kind and the exponential integral.
//!
//! Each function that can overflow or underflow in the density code has a
//! log-scaled companion.

mod bessel;
mod expint;

pub use bessel::{bessel_k, log_bessel_k};
pub use expint::{exp_integral_e1, exp_integral_e1_scaled, log_exp_integral_e1};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            rel_tol: 1e-10,
            max_terms: 500,
        }
    }
}

impl EvalOptions {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        let o = EvalOptions { rel_tol, max_terms };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-6) {
            return Err(Error::domain(format!("rel_tol must lie in (0, 1e-6), got {}", self.rel_tol)));
        }
        if self.max_terms < 50 {
            return Err(Error::domain(format!("max_terms must be at least 50, got {}", self.max_terms)));
        }
        Ok(())
    }
}

/// `ln Gamma(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn reg_inc_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("reg_inc_gamma requires a > 0, got {a}")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(format!("reg_inc_gamma requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    Ok(statrs::function::gamma::gamma_lr(a, x).clamp(0.0, 1.0))
}
