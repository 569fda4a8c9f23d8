//! Marginal prior densities of a single coefficient (`sigma = 1`).
//!
//! Every routine works on the log scale internally. A density that diverges
//! at the origin returns `f64::INFINITY` there.

use crate::error::{Error, Result};
use crate::priors::{DlParams, R2d2Params};
use crate::quad::{integrate_breaks, log_integrate_concave, QuadOptions};
use crate::specialfns::{exp_integral_e1_scaled, log_bessel_k, log_gamma, EvalOptions};
use std::f64::consts::{LN_2, PI};

/// Truncation depth (in log units below the peak) for log-concave integrands.
pub(crate) const DROP: f64 = 60.0;

pub(crate) fn quad_opts(opts: &EvalOptions) -> QuadOptions {
    QuadOptions {
        rel_tol: (opts.rel_tol * 1e-2).max(1e-14),
        abs_tol: 0.0,
        max_subdivisions: 20 * opts.max_terms,
    }
}

/// `ln(e^(2u) + 2)` without overflow.
#[inline]
pub(crate) fn ln_exp2u_plus2(u: f64) -> f64 {
    if u > 0.0 {
        2.0 * u + (2.0 * (-2.0 * u).exp()).ln_1p()
    } else {
        (2.0 + (2.0 * u).exp()).ln()
    }
}

/// `d/du ln(e^(2u) + 2) = 2 / (1 + 2 e^(-2u))`.
#[inline]
pub(crate) fn d_ln_exp2u_plus2(u: f64) -> f64 {
    2.0 / (1.0 + 2.0 * (-2.0 * u).exp())
}

/// `ln 2^a_pi Gamma(a_pi + b) / (Gamma(a_pi) Gamma(b))`.
pub(crate) fn r2d2_log_const(p: &R2d2Params) -> Result<f64> {
    Ok(p.a_pi * LN_2 + log_gamma(p.a_pi + p.b)? - log_gamma(p.a_pi)? - log_gamma(p.b)?)
}

fn integration_failed(what: &str, beta: f64) -> Error {
    Error::numerical(0, format!("{what} quadrature failed at beta={beta}"))
}

/// `ln pi_{R2-D2}(beta)` from the Laplace-transform representation
/// `C int_0^inf exp(-|beta| x) x^(2b) / (x^2 + 2)^(a_pi + b) dx`, integrated in
/// `u = ln x`.
pub fn r2d2_log_marginal(beta: f64, params: &R2d2Params, opts: &EvalOptions) -> Result<f64> {
    let lc = r2d2_log_const(params)?;
    let (a, b) = (params.a_pi, params.b);
    let ab = beta.abs();
    if ab == 0.0 {
        if a <= 0.5 {
            return Ok(f64::INFINITY);
        }
        // C 2^(-1/2 - a_pi) B(b + 1/2, a_pi - 1/2)
        let lbeta = log_gamma(b + 0.5)? + log_gamma(a - 0.5)? - log_gamma(a + b)?;
        return Ok(lc - (0.5 + a) * LN_2 + lbeta);
    }
    let g = |u: f64| -ab * u.exp() + (2.0 * b + 1.0) * u - (a + b) * ln_exp2u_plus2(u);
    let dg = |u: f64| -ab * u.exp() + (2.0 * b + 1.0) - (a + b) * d_ln_exp2u_plus2(u);
    let li = log_integrate_concave(g, dg, DROP, &quad_opts(opts)).ok_or_else(|| integration_failed("R2-D2 marginal", beta))?;
    Ok(lc + li)
}

pub fn r2d2_marginal(beta: f64, params: &R2d2Params, opts: &EvalOptions) -> Result<f64> {
    Ok(r2d2_log_marginal(beta, params, opts)?.exp())
}

/// `ln pi_DL(beta) = ((a-1)/2) ln|beta| + ln K_{1-a}(sqrt(2|beta|)) - ((1+a)/2) ln 2 - ln Gamma(a)`.
pub fn dl_log_marginal(beta: f64, params: &DlParams, opts: &EvalOptions) -> Result<f64> {
    let a = params.a_d;
    let ab = beta.abs();
    if ab == 0.0 {
        return Ok(if a > 1.0 {
            -(4.0 * (a - 1.0)).ln()
        } else {
            f64::INFINITY
        });
    }
    Ok(0.5 * (a - 1.0) * ab.ln() + log_bessel_k(1.0 - a, (2.0 * ab).sqrt(), opts)?
        - 0.5 * (1.0 + a) * LN_2
        - log_gamma(a)?)
}

pub fn dl_marginal(beta: f64, params: &DlParams, opts: &EvalOptions) -> Result<f64> {
    Ok(dl_log_marginal(beta, params, opts)?.exp())
}

/// `ln sqrt(2 pi^3)`.
const LN_HS_K: f64 = 1.837_877_066_409_345_5 * 0.5 + 1.144_729_885_849_400_2;

/// `ln pi_HS(beta)` with global scale `tau`:
/// `pi(beta) = (2 pi^3)^(-1/2) e^z E1(z) / tau`, `z = beta^2 / (2 tau^2)`.
pub fn hs_log_marginal(beta: f64, tau: f64, opts: &EvalOptions) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::domain(format!("Horseshoe tau must be positive, got {tau}")));
    }
    let x = beta / tau;
    if x == 0.0 {
        return Ok(f64::INFINITY);
    }
    let z = 0.5 * x * x;
    if z == 0.0 {
        // beta^2 underflowed; e^z E1(z) ~ -ln z - gamma
        let lnz = 2.0 * x.abs().ln() - LN_2;
        return Ok((-lnz - 0.577_215_664_901_532_9).ln() - LN_HS_K - tau.ln());
    }
    Ok(exp_integral_e1_scaled(z, opts)?.ln() - LN_HS_K - tau.ln())
}

/// Horseshoe marginal with unit global scale.
pub fn hs_marginal(beta: f64) -> Result<f64> {
    Ok(hs_log_marginal(beta, 1.0, &EvalOptions::default())?.exp())
}

/// The envelope `(1/(2K)) ln(1 + 4/beta^2) < pi_HS(beta) < (1/K) ln(1 + 2/beta^2)`,
/// `K = sqrt(2 pi^3)`.
pub fn hs_marginal_bounds(beta: f64) -> (f64, f64) {
    let k = (2.0 * PI.powi(3)).sqrt();
    let b2 = beta * beta;
    ((4.0 / b2).ln_1p() / (2.0 * k), (2.0 / b2).ln_1p() / k)
}

/// `ln(w / sinh w)`, even in `w`.
#[inline]
pub(crate) fn ln_w_over_sinh(w: f64) -> f64 {
    let a = w.abs();
    if a < 1e-4 {
        -a * a / 6.0
    } else {
        // sinh a = e^a (1 - e^{-2a}) / 2
        a.ln() - a - (-(-2.0 * a).exp()).ln_1p() + LN_2
    }
}

/// `d/dw ln(w / sinh w) = 1/w - coth w`.
#[inline]
pub(crate) fn d_ln_w_over_sinh(w: f64) -> f64 {
    if w.abs() < 1e-4 {
        -w / 3.0
    } else {
        1.0 / w - 1.0 / w.tanh()
    }
}

/// `ln` of the density of `w = ln(lambda)` for the Horseshoe+ local scale
/// `lambda = eta * kappa`, `eta, kappa ~ C+(0, 1)`: `2 w / (pi^2 sinh w)`.
#[inline]
pub(crate) fn hsplus_log_mixing(w: f64) -> f64 {
    (2.0 / (PI * PI)).ln() + ln_w_over_sinh(w)
}

/// `ln pi_{HS+}(beta)` with global scale `tau`.
///
/// The product of the two half-Cauchy layers has the closed-form log-scale
/// density `2w / (pi^2 sinh w)`, so the two-layer mixture collapses to a single
/// normal-scale-mixture integral over `w`, whose integrand is log-concave.
pub fn hsplus_log_marginal(beta: f64, tau: f64, opts: &EvalOptions) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::domain(format!("Horseshoe+ tau must be positive, got {tau}")));
    }
    let x = (beta / tau).abs();
    if x == 0.0 {
        return Ok(f64::INFINITY);
    }
    let half_ln_2pi = 0.918_938_533_204_672_7;
    let x2 = x * x;
    let g = |w: f64| -half_ln_2pi - w - 0.5 * x2 * (-2.0 * w).exp() + hsplus_log_mixing(w);
    let dg = |w: f64| -1.0 + x2 * (-2.0 * w).exp() + d_ln_w_over_sinh(w);
    let li = log_integrate_concave(g, dg, DROP, &quad_opts(opts)).ok_or_else(|| integration_failed("Horseshoe+ marginal", beta))?;
    Ok(li - tau.ln())
}

pub fn hsplus_marginal(beta: f64, opts: &EvalOptions) -> Result<f64> {
    Ok(hsplus_log_marginal(beta, 1.0, opts)?.exp())
}

/// Horseshoe+ marginal by direct two-dimensional quadrature over
/// `(ln lambda, ln eta)` with `lambda | eta ~ C+(0, tau eta)`. Slow; kept as an
/// independent cross-check of [`hsplus_log_marginal`].
pub fn hsplus_marginal_nested(beta: f64, tau: f64) -> f64 {
    let x = (beta / tau).abs();
    let opts = QuadOptions::with_rel_tol(1e-9);
    let inv_sqrt_2pi = 0.398_942_280_401_432_7;
    let outer = |v: f64| {
        // eta = e^v, density of v under C+(0,1): 1/(pi cosh v)
        let pv = 1.0 / (PI * v.cosh());
        let inner = |s: f64| {
            // lambda = eta e^s, s has density 1/(pi cosh s) under C+(0, eta)
            let lam = (v + s).exp();
            let z = x / lam;
            inv_sqrt_2pi * (-0.5 * z * z).exp() / lam / (PI * s.cosh())
        };
        let c = x.ln() - v;
        let q = integrate_breaks(inner, &[-45.0, c - 6.0, c, c + 6.0, 45.0], &opts);
        pv * q.value
    };
    let q = integrate_breaks(outer, &[-45.0, -5.0, 0.0, 5.0, 45.0], &opts);
    q.value / tau
}

/// Generalised double Pareto: `(1 + |beta|/eta)^(-(alpha+1)) alpha / (2 eta)`.
pub fn gdp_density(beta: f64, alpha: f64, eta: f64) -> f64 {
    (1.0 + beta.abs() / eta).powf(-(alpha + 1.0)) * alpha / (2.0 * eta)
}
