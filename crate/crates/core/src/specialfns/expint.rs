//! Exponential integral `E1(z) = int_1^inf e^(-tz) / t dt` for real `z > 0`.
//!
//! Power series below `z = 1`, Lentz-evaluated continued fraction above.

use super::EvalOptions;
use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn check(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("exp_integral_e1 requires z > 0, got {z}")))
    }
}

fn series(z: f64, opts: &EvalOptions) -> Result<f64> {
    // E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..=opts.max_terms {
        let fk = k as f64;
        term *= -z / fk;
        let del = term / fk;
        sum += del;
        if del.abs() < sum.abs() * f64::EPSILON {
            return Ok(-EULER_GAMMA - z.ln() - sum);
        }
    }
    Err(Error::numerical(0, format!("E1 series did not converge at z={z}")))
}

/// `e^z E1(z)` via the continued fraction, valid for `z >= 1`.
fn scaled_cf(z: f64, opts: &EvalOptions) -> Result<f64> {
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=opts.max_terms {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::numerical(0, format!("E1 continued fraction did not converge at z={z}")))
}

pub fn exp_integral_e1(z: f64, opts: &EvalOptions) -> Result<f64> {
    check(z)?;
    if z <= 1.0 {
        series(z, opts)
    } else {
        Ok(scaled_cf(z, opts)? * (-z).exp())
    }
}

/// `e^z E1(z)`, finite for every `z > 0`.
pub fn exp_integral_e1_scaled(z: f64, opts: &EvalOptions) -> Result<f64> {
    check(z)?;
    if z <= 1.0 {
        Ok(series(z, opts)? * z.exp())
    } else {
        scaled_cf(z, opts)
    }
}

pub fn log_exp_integral_e1(z: f64, opts: &EvalOptions) -> Result<f64> {
    check(z)?;
    if z <= 1.0 {
        Ok(series(z, opts)?.ln())
    } else {
        Ok(scaled_cf(z, opts)?.ln() - z)
    }
}
