//! Horseshoe and Horseshoe+ full conditionals via the inverse-gamma
//! representation of the half-Cauchy: `x ~ C+(0, s)` iff
//! `x^2 | a ~ IG(1/2, 1/a)`, `a ~ IG(1/2, 1/s^2)`.
//!
//! Horseshoe: `beta_j ~ N(0, sigma^2 tau^2 lambda_j^2)`, `lambda_j ~ C+(0, 1)`.
//! Horseshoe+: `lambda_j | eta_j ~ C+(0, eta_j)`, `eta_j ~ C+(0, 1)`. Its two
//! local layers are updated by exact slice steps instead of auxiliary
//! inverse-gammas: stacking two auxiliary chains makes excursions of
//! `lambda_j` towards zero very slow to unwind.
//! In both, `tau ~ C+(0, s)` or `tau = s` when the global scale is fixed.

use super::likelihood::{floor_variances, Likelihood};
use super::r2d2::{draw_sigma2, response_variance};
use crate::error::Result;
use crate::priors::{GlobalScale, HsParams, SigmaPrior};
use crate::rngdist::{gamma_unchecked, standard_normal, uniform_open};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[inline]
fn inv_gamma<R: Rng + ?Sized>(shape: f64, scale: f64, rng: &mut R) -> f64 {
    1.0 / gamma_unchecked(shape, scale, rng)
}

#[inline]
fn half_cauchy_sq<R: Rng + ?Sized>(s2: f64, rng: &mut R) -> (f64, f64) {
    let aux = inv_gamma(0.5, 1.0 / s2, rng);
    (inv_gamma(0.5, 1.0 / aux, rng), aux)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsState {
    pub beta: Vec<f64>,
    pub sigma2: f64,
    pub lambda2: Vec<f64>,
    pub nu: Vec<f64>,
    pub tau2: f64,
    pub xi: f64,
}

/// Horseshoe+ latents; the local variance is `tau^2 lambda_j^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsPlusState {
    pub beta: Vec<f64>,
    pub sigma2: f64,
    pub lambda2: Vec<f64>,
    pub eta2: Vec<f64>,
    pub tau2: f64,
    pub xi: f64,
}

impl HsState {
    pub fn initial(lik: &Likelihood, params: &HsParams) -> Self {
        let p = lik.p();
        HsState {
            beta: vec![0.0; p],
            sigma2: response_variance(lik),
            lambda2: vec![1.0; p],
            nu: vec![1.0; p],
            tau2: params.tau * params.tau,
            xi: 1.0,
        }
    }

    pub fn from_prior<R: Rng + ?Sized>(params: &HsParams, p: usize, sp: &SigmaPrior, rng: &mut R) -> Self {
        let sigma2 = inv_gamma(sp.a1, sp.b1, rng);
        let (tau2, xi) = global_from_prior(params, rng);
        let (lambda2, nu): (Vec<f64>, Vec<f64>) = (0..p).map(|_| half_cauchy_sq(1.0, rng)).unzip();
        let mut s = HsState {
            beta: vec![0.0; p],
            sigma2,
            lambda2,
            nu,
            tau2,
            xi,
        };
        let d = s.prior_variance();
        s.beta = d.iter().map(|v| (sigma2 * v).sqrt() * standard_normal(rng)).collect();
        s
    }

    pub fn prior_variance(&self) -> Vec<f64> {
        let mut d: Vec<f64> = self.lambda2.iter().map(|l| self.tau2 * l).collect();
        floor_variances(&mut d);
        d
    }
}

impl HsPlusState {
    pub fn initial(lik: &Likelihood, params: &HsParams) -> Self {
        let p = lik.p();
        HsPlusState {
            beta: vec![0.0; p],
            sigma2: response_variance(lik),
            lambda2: vec![1.0; p],
            eta2: vec![1.0; p],
            tau2: params.tau * params.tau,
            xi: 1.0,
        }
    }

    pub fn from_prior<R: Rng + ?Sized>(params: &HsParams, p: usize, sp: &SigmaPrior, rng: &mut R) -> Self {
        let sigma2 = inv_gamma(sp.a1, sp.b1, rng);
        let (tau2, xi) = global_from_prior(params, rng);
        let eta2: Vec<f64> = (0..p).map(|_| half_cauchy_sq(1.0, rng).0).collect();
        let lambda2: Vec<f64> = eta2.iter().map(|e| half_cauchy_sq(*e, rng).0).collect();
        let mut s = HsPlusState {
            beta: vec![0.0; p],
            sigma2,
            lambda2,
            eta2,
            tau2,
            xi,
        };
        let d = s.prior_variance();
        s.beta = d.iter().map(|v| (sigma2 * v).sqrt() * standard_normal(rng)).collect();
        s
    }

    pub fn prior_variance(&self) -> Vec<f64> {
        let mut d: Vec<f64> = self.lambda2.iter().map(|l| self.tau2 * l).collect();
        floor_variances(&mut d);
        d
    }
}

fn global_from_prior<R: Rng + ?Sized>(params: &HsParams, rng: &mut R) -> (f64, f64) {
    let s2 = params.tau * params.tau;
    match params.global {
        GlobalScale::HalfCauchy => half_cauchy_sq(s2, rng),
        GlobalScale::Fixed => (s2, 1.0),
    }
}

/// `tau^2 ~ IG((p+1)/2, 1/xi + sum beta_j^2 / (2 sigma^2 l_j))`,
/// `xi ~ IG(1, 1/s^2 + 1/tau^2)`, where `l_j` is the local variance.
fn step_global<R: Rng + ?Sized>(
    params: &HsParams,
    beta: &[f64],
    sigma2: f64,
    local: impl Iterator<Item = f64>,
    tau2: &mut f64,
    xi: &mut f64,
    rng: &mut R,
) {
    if params.global == GlobalScale::Fixed {
        *tau2 = params.tau * params.tau;
        return;
    }
    let ss: f64 = beta.iter().zip(local).map(|(b, l)| b * b / l).sum::<f64>() / (2.0 * sigma2);
    let p = beta.len() as f64;
    *tau2 = inv_gamma(0.5 * (p + 1.0), 1.0 / *xi + ss, rng);
    *xi = inv_gamma(1.0, 1.0 / (params.tau * params.tau) + 1.0 / *tau2, rng);
}

/// Local variances are kept inside `[1/LOCAL_MAX, LOCAL_MAX]`.
const LOCAL_MAX: f64 = 1e150;

/// Slice update of `lambda^2` given `eta^2` and `m = beta^2 / (2 sigma^2 tau^2)`.
/// With `g = 1/lambda^2` the conditional is `exp(-m g) / (1 + eta^2 g)`: draw
/// `u` under the second factor, then `g` from `Exp(m)` truncated to the slice.
fn slice_lambda2<R: Rng + ?Sized>(m: f64, eta2: f64, lambda2: f64, rng: &mut R) -> f64 {
    let g = 1.0 / lambda2;
    let u = uniform_open(rng) / (1.0 + eta2 * g);
    let bound = (1.0 / u - 1.0) / eta2;
    let v = uniform_open(rng);
    let g_new = if m * bound < 1e-300 || m == 0.0 {
        v * bound
    } else {
        // inverse CDF of Exp(m) on (0, bound), cancellation-free for small m * bound
        -(-v * -(-m * bound).exp_m1()).ln_1p() / m
    };
    let g_new = if g_new > 0.0 { g_new.min(bound) } else { 1.0 / LOCAL_MAX };
    (1.0 / g_new).clamp(1.0 / LOCAL_MAX, LOCAL_MAX)
}

/// Slice update of `eta^2` given `lambda^2`: the conditional density of
/// `d = eta^2` is proportional to `1 / ((d + lambda^2)(1 + d))`.
fn slice_eta2<R: Rng + ?Sized>(lambda2: f64, eta2: f64, rng: &mut R) -> f64 {
    let u = uniform_open(rng) / (1.0 + eta2);
    let bound = 1.0 / u - 1.0;
    // density 1/(d + lambda^2) on (0, bound): log(d + lambda^2) is uniform
    let v = uniform_open(rng);
    let d = lambda2 * (v * (bound / lambda2).ln_1p()).exp_m1();
    if d.is_nan() {
        return eta2;
    }
    d.clamp(1.0 / LOCAL_MAX, LOCAL_MAX)
}

pub fn hs_sweep<R: Rng + ?Sized>(
    lik: &Likelihood,
    params: &HsParams,
    sp: &SigmaPrior,
    st: &mut HsState,
    rng: &mut R,
) -> Result<()> {
    let d = st.prior_variance();
    st.beta = lik.draw_beta(&d, st.sigma2, rng)?;
    let quad: f64 = st.beta.iter().zip(&d).map(|(b, v)| b * b / v).sum();
    st.sigma2 = draw_sigma2(lik, sp, &st.beta, quad, rng)?;
    let c = 1.0 / (2.0 * st.sigma2 * st.tau2);
    for j in 0..st.beta.len() {
        st.lambda2[j] = inv_gamma(1.0, 1.0 / st.nu[j] + st.beta[j] * st.beta[j] * c, rng);
        st.nu[j] = inv_gamma(1.0, 1.0 + 1.0 / st.lambda2[j], rng);
    }
    step_global(
        params,
        &st.beta,
        st.sigma2,
        st.lambda2.iter().copied(),
        &mut st.tau2,
        &mut st.xi,
        rng,
    );
    Ok(())
}

pub fn hsplus_sweep<R: Rng + ?Sized>(
    lik: &Likelihood,
    params: &HsParams,
    sp: &SigmaPrior,
    st: &mut HsPlusState,
    rng: &mut R,
) -> Result<()> {
    let d = st.prior_variance();
    st.beta = lik.draw_beta(&d, st.sigma2, rng)?;
    let quad: f64 = st.beta.iter().zip(&d).map(|(b, v)| b * b / v).sum();
    st.sigma2 = draw_sigma2(lik, sp, &st.beta, quad, rng)?;
    let c = 1.0 / (2.0 * st.sigma2 * st.tau2);
    for j in 0..st.beta.len() {
        let m = st.beta[j] * st.beta[j] * c;
        st.lambda2[j] = slice_lambda2(m, st.eta2[j], st.lambda2[j], rng);
        st.eta2[j] = slice_eta2(st.lambda2[j], st.eta2[j], rng);
    }
    step_global(
        params,
        &st.beta,
        st.sigma2,
        st.lambda2.iter().copied(),
        &mut st.tau2,
        &mut st.xi,
        rng,
    );
    Ok(())
}
