//! Gibbs samplers for the Gaussian linear model under the four priors.
//!
//! A chain is strictly sequential; independent chains run on independent
//! [`RngStream`]s. All states and draw stores are `Send`.

mod dataset;
mod draws;
pub mod dl;
pub mod horseshoe;
mod likelihood;
pub mod r2d2;

pub use dataset::{Dataset, Standardization};
pub use dl::DlState;
pub use draws::{quantile_sorted, summarize, CoefSummary, DrawsMeta, PosteriorDraws};
pub use horseshoe::{HsPlusState, HsState};
pub use likelihood::{floor_variances, BetaRoute, Likelihood, FLOOR_REL, VAR_CAP};
pub use r2d2::R2d2State;

use crate::error::{Error, Result};
use crate::priors::{PriorSpec, SigmaPrior};
use crate::rngdist::RngStream;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McmcConfig {
    /// Total sweeps, burn-in included.
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    #[serde(default)]
    pub sigma_prior: SigmaPrior,
    #[serde(default)]
    pub route: BetaRoute,
}

impl Default for McmcConfig {
    fn default() -> Self {
        McmcConfig {
            iterations: 10_000,
            burn_in: 5_000,
            thin: 1,
            sigma_prior: SigmaPrior::default(),
            route: BetaRoute::Auto,
        }
    }
}

impl McmcConfig {
    pub fn new(iterations: usize, burn_in: usize, thin: usize) -> Result<Self> {
        let c = McmcConfig {
            iterations,
            burn_in,
            thin,
            ..Default::default()
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 {
            return Err(Error::Config("thin must be at least 1".into()));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::Config(format!(
                "burn-in ({}) must be smaller than the number of iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        if self.retained() == 0 {
            return Err(Error::Config("no draws would be retained".into()));
        }
        SigmaPrior::new(self.sigma_prior.a1, self.sigma_prior.b1).map(|_| ())
    }

    pub fn retained(&self) -> usize {
        (self.iterations - self.burn_in) / self.thin
    }
}

/// One complete set of parameters for one of the four priors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "prior", rename_all = "snake_case")]
pub enum GibbsState {
    R2d2(R2d2State),
    Dl(DlState),
    Hs(HsState),
    HsPlus(HsPlusState),
}

impl GibbsState {
    pub fn initial(prior: &PriorSpec, lik: &Likelihood) -> Self {
        match prior {
            PriorSpec::R2d2(_) => GibbsState::R2d2(R2d2State::initial(lik)),
            PriorSpec::Dl(_) => GibbsState::Dl(DlState::initial(lik)),
            PriorSpec::Hs(h) => GibbsState::Hs(HsState::initial(lik, h)),
            PriorSpec::HsPlus(h) => GibbsState::HsPlus(HsPlusState::initial(lik, h)),
        }
    }

    /// A joint draw of all parameters from the prior.
    pub fn from_prior<R: Rng + ?Sized>(prior: &PriorSpec, p: usize, sp: &SigmaPrior, rng: &mut R) -> Result<Self> {
        Ok(match prior {
            PriorSpec::R2d2(r) => {
                require_reduced(r, p)?;
                GibbsState::R2d2(R2d2State::from_prior(r, p, sp, rng))
            }
            PriorSpec::Dl(d) => GibbsState::Dl(DlState::from_prior(d, p, sp, rng)),
            PriorSpec::Hs(h) => GibbsState::Hs(HsState::from_prior(h, p, sp, rng)),
            PriorSpec::HsPlus(h) => GibbsState::HsPlus(HsPlusState::from_prior(h, p, sp, rng)),
        })
    }

    pub fn beta(&self) -> &[f64] {
        match self {
            GibbsState::R2d2(s) => &s.beta,
            GibbsState::Dl(s) => &s.beta,
            GibbsState::Hs(s) => &s.beta,
            GibbsState::HsPlus(s) => &s.beta,
        }
    }

    pub fn sigma2(&self) -> f64 {
        match self {
            GibbsState::R2d2(s) => s.sigma2,
            GibbsState::Dl(s) => s.sigma2,
            GibbsState::Hs(s) => s.sigma2,
            GibbsState::HsPlus(s) => s.sigma2,
        }
    }

    /// `omega` for R2-D2, `tau` otherwise.
    pub fn global(&self) -> f64 {
        match self {
            GibbsState::R2d2(s) => s.omega,
            GibbsState::Dl(s) => s.tau,
            GibbsState::Hs(s) => s.tau2.sqrt(),
            GibbsState::HsPlus(s) => s.tau2.sqrt(),
        }
    }

    pub fn global_name(&self) -> &'static str {
        match self {
            GibbsState::R2d2(_) => "omega",
            _ => "tau",
        }
    }

    /// Prior variance of each coefficient divided by `sigma^2`.
    pub fn prior_variance(&self) -> Vec<f64> {
        match self {
            GibbsState::R2d2(s) => s.shrink_scale(),
            GibbsState::Dl(s) => s.prior_variance(),
            GibbsState::Hs(s) => s.prior_variance(),
            GibbsState::HsPlus(s) => s.prior_variance(),
        }
    }

    /// One full sweep. The state variant must match `prior`.
    pub fn sweep<R: Rng + ?Sized>(
        &mut self,
        lik: &Likelihood,
        prior: &PriorSpec,
        sp: &SigmaPrior,
        rng: &mut R,
    ) -> Result<()> {
        match (self, prior) {
            (GibbsState::R2d2(s), PriorSpec::R2d2(p)) => r2d2::sweep(lik, p, sp, s, rng),
            (GibbsState::Dl(s), PriorSpec::Dl(p)) => dl::sweep(lik, p, sp, s, rng),
            (GibbsState::Hs(s), PriorSpec::Hs(p)) => horseshoe::hs_sweep(lik, p, sp, s, rng),
            (GibbsState::HsPlus(s), PriorSpec::HsPlus(p)) => horseshoe::hsplus_sweep(lik, p, sp, s, rng),
            (s, p) => Err(Error::Config(format!(
                "state for {} cannot be updated under {}",
                s.global_name(),
                p.family()
            ))),
        }
    }

    fn is_finite(&self) -> bool {
        self.beta().iter().all(|v| v.is_finite()) && self.sigma2().is_finite() && self.global().is_finite()
    }
}

fn require_reduced(r: &crate::priors::R2d2Params, p: usize) -> Result<()> {
    if !r.is_reduced(p) {
        return Err(Error::Config(format!(
            "the R2-D2 sampler needs a = p * a_pi (a = {}, p = {p}, a_pi = {})",
            r.a, r.a_pi
        )));
    }
    Ok(())
}

/// Run one chain from the neutral initial state and keep every `thin`-th
/// draw after burn-in.
pub fn run_chain(prior: &PriorSpec, data: &Dataset, mcmc: &McmcConfig, rng: &mut RngStream) -> Result<PosteriorDraws> {
    mcmc.validate()?;
    prior.validate()?;
    let lik = Likelihood::new(data, mcmc.route);
    run_chain_with(prior, &lik, mcmc, rng)
}

/// As [`run_chain`] but with a prepared likelihood.
pub fn run_chain_with(
    prior: &PriorSpec,
    lik: &Likelihood,
    mcmc: &McmcConfig,
    rng: &mut RngStream,
) -> Result<PosteriorDraws> {
    mcmc.validate()?;
    let p = lik.p();
    if let PriorSpec::R2d2(r) = prior {
        require_reduced(r, p)?;
    }
    let m = mcmc.retained();
    let mut state = GibbsState::initial(prior, lik);
    let mut beta = vec![0.0; p * m];
    let mut sigma2 = Vec::with_capacity(m);
    let mut global = Vec::with_capacity(m);
    for it in 1..=mcmc.iterations {
        state
            .sweep(lik, prior, &mcmc.sigma_prior, rng)
            .map_err(|e| e.at_iteration(it))?;
        if !state.is_finite() {
            return Err(Error::numerical(it, "non-finite parameter after sweep"));
        }
        if it > mcmc.burn_in && (it - mcmc.burn_in) % mcmc.thin == 0 {
            let r = sigma2.len();
            if r == m {
                break;
            }
            for (j, b) in state.beta().iter().enumerate() {
                beta[j * m + r] = *b;
            }
            sigma2.push(state.sigma2());
            global.push(state.global());
        }
    }
    let draws = PosteriorDraws {
        p,
        retained: m,
        beta,
        sigma2,
        global,
        global_name: state.global_name().to_string(),
        meta: DrawsMeta {
            prior: *prior,
            mcmc: *mcmc,
            seed: rng.seed(),
            stream_id: rng.stream_id(),
            n: lik.n(),
            elapsed_seconds: None,
        },
    };
    draws.check_finite()?;
    Ok(draws)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::priors::{DlParams, HsParams, R2d2Params};
    use crate::rngdist::standard_normal;
    use nalgebra::{DMatrix, DVector};

    fn data(seed: u64) -> Dataset {
        let mut rng = RngStream::new(seed, 0);
        let x = DMatrix::from_fn(20, 5, |_, _| standard_normal(&mut rng));
        let y = DVector::from_fn(20, |i, _| 2.0 * x[(i, 0)] + standard_normal(&mut rng));
        Dataset::standardize(x, y).unwrap()
    }

    fn priors(p: usize) -> [PriorSpec; 4] {
        [
            PriorSpec::R2d2(R2d2Params::reduced(p, 0.5, 0.2).unwrap()),
            PriorSpec::Dl(DlParams::new(0.5).unwrap()),
            PriorSpec::Hs(HsParams::default()),
            PriorSpec::HsPlus(HsParams::default()),
        ]
    }

    #[test]
    fn chains_are_reproducible_and_sized() {
        let d = data(1);
        let mcmc = McmcConfig::new(300, 100, 2).unwrap();
        for pr in &priors(5) {
            let a = run_chain(pr, &d, &mcmc, &mut RngStream::new(9, 3)).unwrap();
            let b = run_chain(pr, &d, &mcmc, &mut RngStream::new(9, 3)).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.retained, 100);
            assert_eq!(a.sigma2.len(), 100);
            assert!(a.posterior_mean()[0] > 1.0, "{}", pr.label());
        }
    }

    #[test]
    fn unreduced_r2d2_is_a_config_error() {
        let pr = PriorSpec::R2d2(R2d2Params::new(1.0, 0.5, 0.5).unwrap());
        let err = run_chain(&pr, &data(2), &McmcConfig::new(10, 5, 1).unwrap(), &mut RngStream::new(1, 0)).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn bad_mcmc_config() {
        assert!(McmcConfig::new(10, 10, 1).is_err());
        assert!(McmcConfig::new(10, 0, 0).is_err());
        assert_eq!(McmcConfig::default().retained(), 5000);
    }

    #[test]
    fn csv_layout() {
        let d = data(3);
        let pr = PriorSpec::Hs(HsParams::default());
        let draws = run_chain(&pr, &d, &McmcConfig::new(8, 4, 2).unwrap(), &mut RngStream::new(1, 0)).unwrap();
        let mut buf = Vec::new();
        draws.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "iteration,beta_1,beta_2,beta_3,beta_4,beta_5,sigma2,tau");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("6,") && lines[2].starts_with("8,"));
    }
}
