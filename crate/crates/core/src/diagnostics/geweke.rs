//! Joint-distribution test of a Gibbs sampler.
//!
//! The marginal-conditional simulator draws `theta` from the prior and `y`
//! given `theta`, independently each time. The successive-conditional
//! simulator alternates one sweep of the sampler with a fresh `y | theta`.
//! Both have the joint law of `(theta, y)` as their stationary distribution,
//! so means of any test function must agree up to Monte Carlo error.

use super::batch_means_se;
use crate::error::Result;
use crate::gibbs::{BetaRoute, GibbsState, Likelihood};
use crate::priors::{PriorSpec, SigmaPrior};
use crate::rngdist::{standard_normal, RngStream};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GewekeConfig {
    pub n: usize,
    pub p: usize,
    pub cycles: usize,
    pub sigma_prior: SigmaPrior,
    pub batches: usize,
    pub seed: u64,
}

impl Default for GewekeConfig {
    fn default() -> Self {
        GewekeConfig {
            n: 10,
            p: 3,
            cycles: 100_000,
            sigma_prior: SigmaPrior { a1: 5.0, b1: 4.0 },
            batches: 50,
            seed: 20_170_101,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GewekeMoment {
    pub name: String,
    pub prior_mean: f64,
    pub prior_se: f64,
    pub chain_mean: f64,
    pub chain_se: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GewekeReport {
    pub prior: String,
    pub moments: Vec<GewekeMoment>,
}

impl GewekeReport {
    pub fn max_abs_z(&self) -> f64 {
        self.moments.iter().map(|m| m.z.abs()).fold(0.0, f64::max)
    }
}

const NAMES: [&str; 6] = [
    "log beta1^2",
    "log sigma2",
    "log global",
    "sigma2",
    "1{|beta1| < sigma}",
    "atan(beta1 y1)",
];

fn stats(st: &GibbsState, y: &DVector<f64>) -> [f64; 6] {
    let b1 = st.beta()[0];
    let s2 = st.sigma2();
    [
        (b1 * b1).max(f64::MIN_POSITIVE).ln(),
        s2.ln(),
        st.global().ln(),
        s2,
        if b1.abs() < s2.sqrt() { 1.0 } else { 0.0 },
        (b1 * y[0]).atan(),
    ]
}

fn simulate_y(x: &DMatrix<f64>, st: &GibbsState, rng: &mut RngStream) -> DVector<f64> {
    let b = DVector::from_column_slice(st.beta());
    let s = st.sigma2().sqrt();
    x * b + DVector::from_fn(x.nrows(), |_, _| s * standard_normal(rng))
}

pub fn geweke_test(prior: &PriorSpec, cfg: &GewekeConfig) -> Result<GewekeReport> {
    let root = RngStream::new(cfg.seed, 0);
    let mut rx = root.substream(1);
    let x = DMatrix::from_fn(cfg.n, cfg.p, |_, _| standard_normal(&mut rx));
    let sp = &cfg.sigma_prior;

    let mut rm = root.substream(2);
    let mut marginal = vec![Vec::with_capacity(cfg.cycles); NAMES.len()];
    for _ in 0..cfg.cycles {
        let st = GibbsState::from_prior(prior, cfg.p, sp, &mut rm)?;
        let y = simulate_y(&x, &st, &mut rm);
        for (k, v) in stats(&st, &y).into_iter().enumerate() {
            marginal[k].push(v);
        }
    }

    let mut rs = root.substream(3);
    let mut st = GibbsState::from_prior(prior, cfg.p, sp, &mut rs)?;
    let mut y = simulate_y(&x, &st, &mut rs);
    let mut lik = Likelihood::from_xy(x.clone(), y.clone(), BetaRoute::Auto);
    let mut chain = vec![Vec::with_capacity(cfg.cycles); NAMES.len()];
    for it in 0..cfg.cycles {
        st.sweep(&lik, prior, sp, &mut rs).map_err(|e| e.at_iteration(it + 1))?;
        y = simulate_y(&x, &st, &mut rs);
        lik.set_y(y.clone());
        for (k, v) in stats(&st, &y).into_iter().enumerate() {
            chain[k].push(v);
        }
    }

    let moments = NAMES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let m = cfg.cycles as f64;
            let pm = marginal[k].iter().sum::<f64>() / m;
            let pv = marginal[k].iter().map(|v| (v - pm) * (v - pm)).sum::<f64>() / (m - 1.0);
            let prior_se = (pv / m).sqrt();
            let chain_mean = chain[k].iter().sum::<f64>() / m;
            let chain_se = batch_means_se(&chain[k], cfg.batches);
            let z = (pm - chain_mean) / (prior_se * prior_se + chain_se * chain_se).sqrt();
            GewekeMoment {
                name: name.to_string(),
                prior_mean: pm,
                prior_se,
                chain_mean,
                chain_se,
                z: if z.is_nan() { 0.0 } else { z },
            }
        })
        .collect();
    Ok(GewekeReport {
        prior: prior.label(),
        moments,
    })
}
