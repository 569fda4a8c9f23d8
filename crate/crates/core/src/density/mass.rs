//! Prior probability of `(0, q]` for each marginal, quartile ranges and
//! calibration of a free hyperparameter to a target interquartile range.
//!
//! The masses are computed from the scale-mixture hierarchies, where the
//! inner integral over `beta` is available in closed form, so only one
//! log-concave quadrature is needed per value.

use super::marginal::{d_ln_exp2u_plus2, d_ln_w_over_sinh, hsplus_log_mixing, ln_exp2u_plus2, quad_opts, r2d2_log_const, DROP};
use crate::error::{Error, Result};
use crate::priors::{DlParams, PriorSpec, R2d2Params};
use crate::quad::log_integrate_concave;
use crate::specialfns::{log_gamma, EvalOptions};
use statrs::function::erf::erf;
use std::f64::consts::{LN_2, PI, SQRT_2};

fn failed(what: &str, q: f64) -> Error {
    Error::numerical(0, format!("{what} mass quadrature failed at q={q}"))
}

/// `t / (e^t - 1)`, equal to 1 at `t = 0`.
#[inline]
fn t_over_expm1(t: f64) -> f64 {
    if t < 1e-12 {
        1.0 - 0.5 * t
    } else if t > 700.0 {
        0.0
    } else {
        t / t.exp_m1()
    }
}

/// `ln(1 - e^(-t))` for `t >= 0`.
#[inline]
fn ln_one_minus_exp_neg(t: f64) -> f64 {
    if t > 40.0 {
        -(-t).exp()
    } else {
        (-(-t).exp_m1()).ln()
    }
}

/// `ln(Phi(x) - 1/2)` for `x > 0`.
#[inline]
fn ln_phi_minus_half(x: f64) -> f64 {
    if x < 1e-8 {
        // Phi(x) - 1/2 = x / sqrt(2 pi) (1 - x^2/6 + ...)
        x.ln() - 0.918_938_533_204_672_7
    } else {
        (0.5 * erf(x / SQRT_2)).ln()
    }
}

/// `d/du ln(Phi(c e^{-u}) - 1/2) = -x phi(x) / (Phi(x) - 1/2)`, `x = c e^{-u}`.
#[inline]
fn d_ln_phi_minus_half(x: f64) -> f64 {
    if x < 1e-8 {
        -1.0
    } else {
        let pdf = 0.398_942_280_401_432_7 * (-0.5 * x * x).exp();
        -x * pdf / (0.5 * erf(x / SQRT_2))
    }
}

/// `P(0 < beta <= q)` under R2-D2: `C int (1 - e^{-q x}) x^(2b-1) / (x^2+2)^(a_pi+b) dx`.
///
/// When `a_pi` is so small that the upper flank of that integrand is too
/// shallow to truncate, the complement `1/2 - C int e^{-q x} ...` is used.
pub fn r2d2_mass_within(q: f64, params: &R2d2Params, opts: &EvalOptions) -> Result<f64> {
    if q.is_infinite() {
        return Ok(0.5);
    }
    let lc = r2d2_log_const(params)?;
    let (a, b) = (params.a_pi, params.b);
    let g = |u: f64| ln_one_minus_exp_neg(q * u.exp()) + 2.0 * b * u - (a + b) * ln_exp2u_plus2(u);
    let dg = |u: f64| t_over_expm1(q * u.exp()) + 2.0 * b - (a + b) * d_ln_exp2u_plus2(u);
    if let Some(li) = log_integrate_concave(g, dg, DROP, &quad_opts(opts)) {
        return Ok((lc + li).exp());
    }
    let gc = |u: f64| -q * u.exp() + 2.0 * b * u - (a + b) * ln_exp2u_plus2(u);
    let dgc = |u: f64| -q * u.exp() + 2.0 * b - (a + b) * d_ln_exp2u_plus2(u);
    let li = log_integrate_concave(gc, dgc, DROP, &quad_opts(opts)).ok_or_else(|| failed("R2-D2", q))?;
    Ok((0.5 - (lc + li).exp()).max(0.0))
}

/// `P(0 < beta <= q)` under DL: `E[(1 - e^{-q/psi})/2]`, `psi ~ Ga(a_D, 1/2)`,
/// integrated over `u = ln psi`; for very small `a_D` through the complement
/// `(1 - E e^{-q/psi}) / 2`.
pub fn dl_mass_within(q: f64, params: &DlParams, opts: &EvalOptions) -> Result<f64> {
    if q.is_infinite() {
        return Ok(0.5);
    }
    let a = params.a_d;
    let lc = -log_gamma(a)? - a * LN_2;
    let g = |u: f64| ln_one_minus_exp_neg(q * (-u).exp()) + a * u - 0.5 * u.exp();
    let dg = |u: f64| -t_over_expm1(q * (-u).exp()) + a - 0.5 * u.exp();
    if let Some(li) = log_integrate_concave(g, dg, DROP, &quad_opts(opts)) {
        return Ok(0.5 * (lc + li).exp());
    }
    let gc = |u: f64| -q * (-u).exp() + a * u - 0.5 * u.exp();
    let dgc = |u: f64| q * (-u).exp() + a - 0.5 * u.exp();
    let li = log_integrate_concave(gc, dgc, DROP, &quad_opts(opts)).ok_or_else(|| failed("DL", q))?;
    Ok((0.5 * (1.0 - (lc + li).exp())).max(0.0))
}

/// `P(0 < beta <= q)` under the Horseshoe with global scale `tau`.
pub fn hs_mass_within(q: f64, tau: f64, opts: &EvalOptions) -> Result<f64> {
    if q.is_infinite() {
        return Ok(0.5);
    }
    let c = q / tau;
    // ln lambda has density 1 / (pi cosh u)
    let ln_cosh = |u: f64| {
        let a = u.abs();
        a + (-2.0 * a).exp().ln_1p() - LN_2
    };
    let g = |u: f64| ln_phi_minus_half(c * (-u).exp()) - PI.ln() - ln_cosh(u);
    let dg = |u: f64| d_ln_phi_minus_half(c * (-u).exp()) - u.tanh();
    let li = log_integrate_concave(g, dg, DROP, &quad_opts(opts)).ok_or_else(|| failed("Horseshoe", q))?;
    Ok(li.exp())
}

/// `P(0 < beta <= q)` under the Horseshoe+ with global scale `tau`.
pub fn hsplus_mass_within(q: f64, tau: f64, opts: &EvalOptions) -> Result<f64> {
    if q.is_infinite() {
        return Ok(0.5);
    }
    let c = q / tau;
    let g = |w: f64| ln_phi_minus_half(c * (-w).exp()) + hsplus_log_mixing(w);
    let dg = |w: f64| d_ln_phi_minus_half(c * (-w).exp()) + d_ln_w_over_sinh(w);
    let li = log_integrate_concave(g, dg, DROP, &quad_opts(opts)).ok_or_else(|| failed("Horseshoe+", q))?;
    Ok(li.exp())
}

/// `P(0 < beta <= q)` for any prior, `sigma = 1`.
pub fn prior_mass_within(prior: &PriorSpec, q: f64, opts: &EvalOptions) -> Result<f64> {
    if !(q >= 0.0) {
        return Err(Error::domain(format!("mass bound must be non-negative, got {q}")));
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    match prior {
        PriorSpec::R2d2(p) => r2d2_mass_within(q, p, opts),
        PriorSpec::Dl(p) => dl_mass_within(q, p, opts),
        PriorSpec::Hs(p) => hs_mass_within(q, p.tau, opts),
        PriorSpec::HsPlus(p) => hsplus_mass_within(q, p.tau, opts),
    }
}

/// `int_0^{1/sqrt(n)} pi(beta) d beta`.
pub fn prior_mass_near_zero(prior: &PriorSpec, n: usize, opts: &EvalOptions) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("n must be at least 2, got {n}")));
    }
    prior_mass_within(prior, 1.0 / (n as f64).sqrt(), opts)
}

/// Upper quartile: the `q` with `P(0 < beta <= q) = 1/4`.
pub fn upper_quartile(prior: &PriorSpec, opts: &EvalOptions) -> Result<f64> {
    upper_quartile_of(|q| prior_mass_within(prior, q, opts))
}

/// Upper quartile of a symmetric law given its half-line mass function
/// `q -> P(0 < X <= q)`, by bisection in `ln q`.
pub fn upper_quartile_of<F>(mass: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let f = |lq: f64| mass(lq.exp()).map(|m| m - 0.25);
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    let mut tries = 0;
    while f(lo)? > 0.0 {
        lo -= 4.0;
        tries += 1;
        if tries > 150 {
            return Err(Error::Calibration("lower quartile bracket not found".into()));
        }
    }
    while f(hi)? < 0.0 {
        hi += 4.0;
        tries += 1;
        if tries > 300 {
            return Err(Error::Calibration("upper quartile bracket not found".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

pub fn interquartile_range(prior: &PriorSpec, opts: &EvalOptions) -> Result<f64> {
    Ok(2.0 * upper_quartile(prior, opts)?)
}

/// Tune the free hyperparameter of `prior` so its IQR equals `target_iqr`:
/// `b` for R2-D2 (with `a_pi` kept as given, `a` kept in the ratio `a / a_pi`),
/// `a_D` for DL, and the global scale for the Horseshoe variants.
pub fn iqr_calibrate(prior: &PriorSpec, target_iqr: f64, opts: &EvalOptions) -> Result<PriorSpec> {
    if !(target_iqr > 0.0 && target_iqr.is_finite()) {
        return Err(Error::domain(format!("target IQR must be positive, got {target_iqr}")));
    }
    match *prior {
        PriorSpec::Hs(mut p) | PriorSpec::HsPlus(mut p) => {
            // scale family: IQR is proportional to tau
            let unit = match prior {
                PriorSpec::Hs(_) => PriorSpec::Hs(crate::priors::HsParams { tau: 1.0, ..p }),
                _ => PriorSpec::HsPlus(crate::priors::HsParams { tau: 1.0, ..p }),
            };
            p.tau = target_iqr / interquartile_range(&unit, opts)?;
            Ok(match prior {
                PriorSpec::Hs(_) => PriorSpec::Hs(p),
                _ => PriorSpec::HsPlus(p),
            })
        }
        PriorSpec::Dl(_) => {
            // IQR increases with a_D
            let build = |la: f64| PriorSpec::Dl(DlParams { a_d: la.exp() });
            let la = bisect_log_param(|la| interquartile_range(&build(la), opts), target_iqr, true, (-6.0, 5.0))?;
            Ok(build(la))
        }
        PriorSpec::R2d2(p) => {
            // IQR decreases with b
            let ratio = p.a / p.a_pi;
            let build = |lb: f64| {
                PriorSpec::R2d2(R2d2Params {
                    a: ratio * p.a_pi,
                    b: lb.exp(),
                    a_pi: p.a_pi,
                })
            };
            let lb = bisect_log_param(|lb| interquartile_range(&build(lb), opts), target_iqr, false, (-9.0, 7.0))?;
            Ok(build(lb))
        }
    }
}

fn bisect_log_param<F>(iqr: F, target: f64, increasing: bool, range: (f64, f64)) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = range;
    let s = if increasing { 1.0 } else { -1.0 };
    let h = |x: f64| iqr(x).map(|v| s * (v - target));
    if h(lo)? > 0.0 || h(hi)? < 0.0 {
        return Err(Error::Calibration(format!(
            "target IQR {target} is not bracketed by parameter range [{}, {}]",
            lo.exp(),
            hi.exp()
        )));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if h(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::priors::HsParams;
    use crate::specialfns::bessel_k;

    fn o() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn total_half_mass() {
        let priors = [
            PriorSpec::R2d2(R2d2Params::new(1.0, 0.5, 0.25).unwrap()),
            PriorSpec::Dl(DlParams::new(0.5).unwrap()),
            PriorSpec::Hs(HsParams::default()),
            PriorSpec::HsPlus(HsParams::default()),
        ];
        for p in &priors {
            let m = prior_mass_within(p, 1e12, &o()).unwrap();
            assert!((m - 0.5).abs() < 2e-6, "{}: {m}", p.label());
            assert_eq!(prior_mass_within(p, f64::INFINITY, &o()).unwrap(), 0.5);
        }
    }

    #[test]
    fn dl_mass_matches_bessel_closed_form() {
        for &a in &[0.1, 0.5, 1.7] {
            for &q in &[1e-6, 0.01, 0.5, 4.0] {
                let got = dl_mass_within(q, &DlParams::new(a).unwrap(), &o()).unwrap();
                let k = bessel_k(a, (2.0 * q).sqrt(), &o()).unwrap();
                let want = 0.5 * (1.0 - 2f64.powf(1.0 - a) * (2.0 * q).powf(0.5 * a) * k / statrs::function::gamma::gamma(a));
                assert!(((got - want) / want).abs() < 1e-7, "a={a} q={q}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn standard_cauchy_iqr_is_two() {
        let q = upper_quartile_of(|q: f64| Ok(q.atan() / PI)).unwrap();
        assert!((2.0 * q - 2.0).abs() < 1e-12);
    }

    #[test]
    fn horseshoe_iqr_scales_with_tau() {
        let hs = PriorSpec::Hs(HsParams { tau: 2.0, ..Default::default() });
        let unit = PriorSpec::Hs(HsParams::default());
        let r = interquartile_range(&hs, &o()).unwrap() / interquartile_range(&unit, &o()).unwrap();
        assert!((r - 2.0).abs() < 1e-9);
    }

    #[test]
    fn calibrated_dl_has_requested_iqr() {
        let dl = iqr_calibrate(&PriorSpec::Dl(DlParams::new(0.5).unwrap()), 1.0, &o()).unwrap();
        let m = prior_mass_within(&dl, 0.5, &o()).unwrap();
        assert!((2.0 * m - 0.5).abs() < 1e-3);
    }
}
