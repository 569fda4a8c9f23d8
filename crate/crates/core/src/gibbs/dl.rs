//! Dirichlet-Laplace full conditionals.
//!
//! Model: `beta_j ~ N(0, sigma^2 psi_j phi_j^2 tau^2)`, `psi_j ~ Exp(1/2)`,
//! `phi ~ Dir(a_D, ..., a_D)`, `tau ~ Ga(p a_D, 1/2)`, so that marginally
//! `beta_j | phi, tau ~ DE(sigma phi_j tau)`.
//!
//! `(phi, tau)` are drawn jointly with `psi` integrated out, followed by
//! `psi`, `beta` and `sigma^2`.

use super::likelihood::{floor_variances, Likelihood};
use super::r2d2::{draw_sigma2, response_variance, BETA_FLOOR_REL};
use crate::error::{Error, Result};
use crate::priors::{DlParams, SigmaPrior};
use crate::rngdist::{gamma_unchecked, gig_unchecked, inverse_gaussian_unchecked, standard_normal};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DlState {
    pub beta: Vec<f64>,
    pub sigma2: f64,
    pub psi: Vec<f64>,
    pub phi: Vec<f64>,
    pub tau: f64,
}

impl DlState {
    pub fn initial(lik: &Likelihood) -> Self {
        let p = lik.p();
        DlState {
            beta: vec![0.0; p],
            sigma2: response_variance(lik),
            psi: vec![1.0; p],
            phi: vec![1.0 / p as f64; p],
            tau: 1.0,
        }
    }

    pub fn from_prior<R: Rng + ?Sized>(params: &DlParams, p: usize, sp: &SigmaPrior, rng: &mut R) -> Self {
        let sigma2 = 1.0 / gamma_unchecked(sp.a1, sp.b1, rng);
        let t: Vec<f64> = (0..p).map(|_| gamma_unchecked(params.a_d, 0.5, rng)).collect();
        let tau: f64 = t.iter().sum();
        let phi = t.iter().map(|v| (v / tau).max(f64::MIN_POSITIVE)).collect();
        let psi = (0..p).map(|_| gamma_unchecked(1.0, 0.5, rng)).collect();
        let mut s = DlState {
            beta: vec![0.0; p],
            sigma2,
            psi,
            phi,
            tau,
        };
        let d = s.prior_variance();
        s.beta = d.iter().map(|v| (sigma2 * v).sqrt() * standard_normal(rng)).collect();
        s
    }

    /// Floored `psi_j phi_j^2 tau^2`.
    pub fn prior_variance(&self) -> Vec<f64> {
        let t2 = self.tau * self.tau;
        let mut d: Vec<f64> = self.psi.iter().zip(&self.phi).map(|(s, f)| s * f * f * t2).collect();
        floor_variances(&mut d);
        d
    }

    /// Laplace scale `sigma phi_j tau` of each coefficient.
    fn laplace_scale(&self) -> Vec<f64> {
        let sigma = self.sigma2.sqrt();
        self.phi.iter().map(|f| sigma * f * self.tau).collect()
    }
}

/// `T_j ~ giG(2|beta_j|/sigma, 1, a_D - 1)`, `phi = T / sum T`, `tau = sum T`.
pub fn step_phi_tau<R: Rng + ?Sized>(params: &DlParams, st: &mut DlState, rng: &mut R) -> Result<()> {
    let sigma = st.sigma2.sqrt();
    let scale = st.laplace_scale();
    let lambda0 = params.a_d - 1.0;
    let t: Vec<f64> = (0..st.beta.len())
        .map(|j| {
            let babs = st.beta[j].abs().max(BETA_FLOOR_REL * scale[j]);
            let chi = (2.0 * babs / sigma).clamp(f64::MIN_POSITIVE, 1e300);
            gig_unchecked(chi, 1.0, lambda0, rng)
        })
        .collect();
    let total: f64 = t.iter().sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::numerical(0, format!("Dirichlet normalisation failed: sum T = {total}")));
    }
    for (phi, tj) in st.phi.iter_mut().zip(&t) {
        *phi = (tj / total).max(f64::MIN_POSITIVE);
    }
    st.tau = total;
    Ok(())
}

/// `1/psi_j ~ IG(sigma phi_j tau / |beta_j|, 1)`.
pub fn step_psi<R: Rng + ?Sized>(st: &mut DlState, rng: &mut R) {
    let scale = st.laplace_scale();
    for j in 0..st.psi.len() {
        let sc = scale[j].max(f64::MIN_POSITIVE);
        let babs = st.beta[j].abs().max(BETA_FLOOR_REL * sc);
        st.psi[j] = 1.0 / inverse_gaussian_unchecked(sc / babs, 1.0, rng);
    }
}

pub fn step_beta<R: Rng + ?Sized>(lik: &Likelihood, st: &mut DlState, rng: &mut R) -> Result<()> {
    let d = st.prior_variance();
    st.beta = lik.draw_beta(&d, st.sigma2, rng)?;
    Ok(())
}

/// `sigma^2 ~ IG(a1 + (n+p)/2, b1 + (RSS + sum beta_j^2 / d_j)/2)`.
pub fn step_sigma2<R: Rng + ?Sized>(lik: &Likelihood, sp: &SigmaPrior, st: &mut DlState, rng: &mut R) -> Result<()> {
    let d = st.prior_variance();
    let quad: f64 = st.beta.iter().zip(&d).map(|(b, v)| b * b / v).sum();
    st.sigma2 = draw_sigma2(lik, sp, &st.beta, quad, rng)?;
    Ok(())
}

pub fn sweep<R: Rng + ?Sized>(
    lik: &Likelihood,
    params: &DlParams,
    sp: &SigmaPrior,
    st: &mut DlState,
    rng: &mut R,
) -> Result<()> {
    step_phi_tau(params, st, rng)?;
    step_psi(st, rng);
    step_beta(lik, st, rng)?;
    step_sigma2(lik, sp, st, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rngdist::RngStream;
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn identity_design_shrinks_toward_zero() {
        let y = DVector::from_vec(vec![3.0, 0.1, -0.2, 0.05, 0.0]);
        let lik = Likelihood::from_xy(DMatrix::identity(5, 5), y.clone(), Default::default());
        let params = DlParams::new(0.5).unwrap();
        let sp = SigmaPrior::new(2.0, 1.0).unwrap();
        let mut st = DlState::initial(&lik);
        let mut rng = RngStream::new(4, 0);
        let mut mean = [0.0; 5];
        let m = 4000;
        for it in 0..(m + 1000) {
            sweep(&lik, &params, &sp, &mut st, &mut rng).unwrap();
            assert!((st.phi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            if it >= 1000 {
                for j in 0..5 {
                    mean[j] += st.beta[j] / m as f64;
                }
            }
        }
        for j in 1..5 {
            assert!(mean[j].abs() < y[j].abs() + 0.05, "j={j}: {} vs {}", mean[j], y[j]);
        }
        assert!(mean[0] > 1.0 && mean[0] < 3.0);
    }
}
