//! Joint-distribution and conjugate-subcase checks of the Gibbs samplers.

use super::Check;
use nalgebra::{DMatrix, DVector};
use shrinkage::diagnostics::{geweke_test, ks_statistic, GewekeConfig};
use shrinkage::gibbs::r2d2::{step_beta, step_sigma2};
use shrinkage::gibbs::{Likelihood, R2d2State};
use shrinkage::priors::{DlParams, HsParams, PriorSpec, R2d2Params, SigmaPrior};
use shrinkage::rngdist::{standard_normal, RngStream};
use statrs::distribution::{ContinuousCDF, InverseGamma, StudentsT};

pub const Z_LIMIT: f64 = 4.0;
pub const CONJUGATE_KS_LIMIT: f64 = 0.02;

pub fn priors() -> Vec<PriorSpec> {
    vec![
        PriorSpec::R2d2(R2d2Params::reduced(3, 3.0, 1.0).unwrap()),
        PriorSpec::Dl(DlParams::new(1.0).unwrap()),
        PriorSpec::Hs(HsParams::default()),
        PriorSpec::HsPlus(HsParams::default()),
    ]
}

pub fn geweke_checks(cfg: &GewekeConfig) -> Vec<Check> {
    priors()
        .iter()
        .map(|prior| {
            let r = geweke_test(prior, cfg).unwrap();
            assert_eq!(r.moments.len(), 6);
            Check::below(format!("Geweke max |z| {}", r.prior), r.max_abs_z(), Z_LIMIT)
        })
        .collect()
}

/// With every latent scale frozen, the beta and sigma^2 steps target a
/// normal-inverse-gamma posterior with closed-form marginals.
pub fn conjugate_checks() -> Vec<Check> {
    let mut rng = RngStream::new(44, 0);
    let n = 12;
    let x = DMatrix::from_fn(n, 1, |_, _| standard_normal(&mut rng));
    let y = DVector::from_fn(n, |i, _| 0.8 * x[(i, 0)] + standard_normal(&mut rng));
    let lik = Likelihood::from_xy(x.clone(), y.clone(), Default::default());
    let sp = SigmaPrior::new(3.0, 2.0).unwrap();
    let d = 0.7;

    // S = psi phi omega / 2 = d
    let mut st = R2d2State::initial(&lik);
    st.psi = vec![2.0];
    st.phi = vec![1.0];
    st.omega = d;
    let (keep, thin, warm) = (100_000, 5, 100);
    let mut s2 = Vec::with_capacity(keep);
    let mut b = Vec::with_capacity(keep);
    for it in 0..keep * thin + warm {
        step_beta(&lik, &mut st, &mut rng).unwrap();
        step_sigma2(&lik, &sp, &mut st, &mut rng).unwrap();
        if it >= warm && (it - warm) % thin == 0 {
            s2.push(st.sigma2);
            b.push(st.beta[0]);
        }
    }

    let xty = x.column(0).dot(&y);
    let prec = x.norm_squared() + 1.0 / d;
    let shape = sp.a1 + n as f64 / 2.0;
    let scale = sp.b1 + 0.5 * (y.norm_squared() - xty * xty / prec);
    let ig = InverseGamma::new(shape, scale).unwrap();
    let t = StudentsT::new(xty / prec, (scale / shape / prec).sqrt(), 2.0 * shape).unwrap();
    vec![
        Check::below("conjugate sigma^2 KS", ks_statistic(&s2, |v| ig.cdf(v)), CONJUGATE_KS_LIMIT),
        Check::below("conjugate beta KS", ks_statistic(&b, |v| t.cdf(v)), CONJUGATE_KS_LIMIT),
    ]
}
